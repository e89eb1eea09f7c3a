#include "sta/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "sta/errors.hpp"

namespace sta::schedules {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sigmoid_pulse(double arg, double peak) {
    // peak / (1 + e^{arg}), guarded against overflow for large |arg|.
    if (arg > 700.0) return 0.0;
    return peak / (1.0 + std::exp(arg));
}

// d/darg [1 / (1 + e^{arg})] = -e^{arg} / (1 + e^{arg})^2
double sigmoid_pulse_darg(double arg, double peak) {
    if (std::abs(arg) > 700.0) return 0.0;
    const double e = std::exp(arg);
    const double den = 1.0 + e;
    return -peak * e / (den * den);
}

} // namespace

void STAScheduleParams::validate() const {
    if (r_max < 0.0) throw SimError("STA schedule: r_max must be >= 0");
    if (f0 < 5.0) throw SimError("STA schedule: f0 must be >= 5");
    if (T <= 0.0) throw SimError("STA schedule: T must be > 0");
    if (delta <= 0.0) throw SimError("STA schedule: delta must be > 0");
    if (lambda < 0.0 || lambda >= delta) {
        throw SimError("STA schedule: need 0 <= lambda < delta");
    }
}

void AdiabaticScheduleParams::validate() const {
    if (r_max < 0.0) throw SimError("adiabatic schedule: r_max must be >= 0");
    if (f0 < 5.0) throw SimError("adiabatic schedule: f0 must be >= 5");
    if (T <= 0.0) throw SimError("adiabatic schedule: T must be > 0");
    if (delta <= 0.0) throw SimError("adiabatic schedule: delta must be > 0");
    if (lambda < 0.0 || lambda >= delta) {
        throw SimError("adiabatic schedule: need 0 <= lambda < delta");
    }
}

void TurnOffParams::validate(double delta) const {
    if (omega_max < 0.0 || omega_max >= delta) {
        throw ArctanhDomain("turn-off: need 0 <= omega_max < delta");
    }
    if (T_off <= 0.0) throw SimError("turn-off: T_off must be > 0");
}

double sta_r(double t, const STAScheduleParams& p) {
    return sigmoid_pulse(p.f0 * std::cos(2.0 * kPi * t / p.T), p.r_max);
}

double sta_r_dot(double t, const STAScheduleParams& p) {
    const double arg = p.f0 * std::cos(2.0 * kPi * t / p.T);
    const double darg = -p.f0 * (2.0 * kPi / p.T) * std::sin(2.0 * kPi * t / p.T);
    return sigmoid_pulse_darg(arg, p.r_max) * darg;
}

double adiabatic_r(double t, const AdiabaticScheduleParams& p) {
    return sigmoid_pulse(p.f0 * (0.5 - t / p.T), p.r_max);
}

double adiabatic_r_dot(double t, const AdiabaticScheduleParams& p) {
    const double arg = p.f0 * (0.5 - t / p.T);
    const double darg = -p.f0 / p.T;
    return sigmoid_pulse_darg(arg, p.r_max) * darg;
}

double turnoff_r(double t, const TurnOffParams& p, double delta, double t_f,
                 TurnOffOrientation orientation) {
    p.validate(delta);
    const double peak = 0.5 * std::atanh(p.omega_max / delta);
    const double u = (t - t_f) / p.T_off;
    const double arg = (orientation == TurnOffOrientation::AsPrinted)
                           ? 10.0 * (-u + 1.0 / 3.0)
                           : 10.0 * (u - 1.0 / 3.0);
    return sigmoid_pulse(arg, peak);
}

double turnoff_r_dot(double t, const TurnOffParams& p, double delta, double t_f,
                     TurnOffOrientation orientation) {
    p.validate(delta);
    const double peak = 0.5 * std::atanh(p.omega_max / delta);
    const double u = (t - t_f) / p.T_off;
    double arg, darg;
    if (orientation == TurnOffOrientation::AsPrinted) {
        arg = 10.0 * (-u + 1.0 / 3.0);
        darg = -10.0 / p.T_off;
    } else {
        arg = 10.0 * (u - 1.0 / 3.0);
        darg = 10.0 / p.T_off;
    }
    return sigmoid_pulse_darg(arg, peak) * darg;
}

DriveAmplitudes drive_amplitudes(double r, double r_dot, double delta) {
    DriveAmplitudes d;
    d.omega_r = delta * std::tanh(2.0 * r);
    d.omega_i = r_dot;
    return d;
}

ControlSchedule sta_schedule(const STAScheduleParams& p) {
    p.validate();
    ControlSchedule s;
    s.T = p.T;
    s.r = [p](double t) { return sta_r(t, p); };
    s.r_dot = [p](double t) { return sta_r_dot(t, p); };
    return s;
}

ControlSchedule sta_schedule_clamped(const STAScheduleParams& p) {
    p.validate();
    ControlSchedule s;
    s.T = p.T;
    s.r = [p](double t) { return sta_r(std::clamp(t, 0.0, p.T), p); };
    s.r_dot = [p](double t) {
        return (t < 0.0 || t > p.T) ? 0.0 : sta_r_dot(t, p);
    };
    return s;
}

ControlSchedule adiabatic_schedule(const AdiabaticScheduleParams& p) {
    p.validate();
    ControlSchedule s;
    s.T = p.T;
    s.r = [p](double t) { return adiabatic_r(t, p); };
    s.r_dot = [p](double t) { return adiabatic_r_dot(t, p); };
    return s;
}

ControlSchedule turnoff_schedule(const TurnOffParams& p, double delta, double t_f,
                                 TurnOffOrientation orientation) {
    p.validate(delta);
    ControlSchedule s;
    s.T = p.T_off;
    s.r = [=](double t) { return turnoff_r(t, p, delta, t_f, orientation); };
    s.r_dot = [=](double t) { return turnoff_r_dot(t, p, delta, t_f, orientation); };
    return s;
}

ControlSchedule zero_schedule() {
    ControlSchedule s;
    s.T = 0.0;
    s.r = [](double) { return 0.0; };
    s.r_dot = [](double) { return 0.0; };
    return s;
}

ReservoirSchedule ReservoirSchedule::off() {
    ReservoirSchedule r;
    r.r_e = [](double) { return 0.0; };
    r.switch_times = {};
    return r;
}

ReservoirSchedule ReservoirSchedule::compensating(Protocol protocol, double r_max,
                                                  double T) {
    ReservoirSchedule r;
    if (protocol == Protocol::STA) {
        r.r_e = [r_max, T](double t) {
            return (t >= T / 4.0 && t <= 3.0 * T / 4.0) ? r_max : 0.0;
        };
        r.switch_times = {T / 4.0, 3.0 * T / 4.0};
    } else {
        r.r_e = [r_max, T](double t) { return (t >= T / 2.0) ? r_max : 0.0; };
        r.switch_times = {T / 2.0};
    }
    return r;
}

double reservoir_r_e(double t, Protocol protocol, double r_max, double T) {
    return ReservoirSchedule::compensating(protocol, r_max, T).r_e(t);
}

NoiseParams noise_params(double r, double r_e, double phi_e) {
    const double chr = std::cosh(r), shr = std::sinh(r);
    const double che = std::cosh(r_e), she = std::sinh(r_e);
    NoiseParams np;
    np.N = chr * chr * she * she + shr * shr * che * che +
           0.5 * std::sinh(2.0 * r) * std::sinh(2.0 * r_e) * std::cos(phi_e);
    const cxd em = std::exp(cxd(0.0, -phi_e));
    const cxd ep = std::exp(cxd(0.0, phi_e));
    np.M = (shr * che + em * chr * she) * (chr * che + ep * shr * she);
    return np;
}

NoiseAverages noise_averages(const ControlSchedule& schedule,
                             const ReservoirSchedule& reservoir, double T,
                             int n_samples) {
    if (n_samples < 1000) {
        throw SimError("noise_averages: n_samples must be >= 1000");
    }
    // Segment boundaries at the reservoir switch times; |N_S| and |M_S| are
    // continuous there but kinked, so per-segment Simpson keeps its order.
    std::vector<double> bounds = {0.0};
    for (double s : reservoir.switch_times) {
        if (s > 0.0 && s < T) bounds.push_back(s);
    }
    bounds.push_back(T);
    std::sort(bounds.begin(), bounds.end());

    auto integrand = [&](double t, bool want_m) {
        const NoiseParams np = noise_params(schedule.r(t), reservoir.r_e(t),
                                            reservoir.phi_e);
        return want_m ? std::abs(np.M) : std::abs(np.N);
    };

    NoiseAverages out;
    for (size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double a = bounds[seg], b = bounds[seg + 1];
        int n = std::max(16, static_cast<int>(n_samples * (b - a) / T));
        if (n % 2 != 0) ++n;
        const double h = (b - a) / n;
        double sn = integrand(a, false) + integrand(b, false);
        double sm = integrand(a, true) + integrand(b, true);
        for (int i = 1; i < n; ++i) {
            const double w = (i % 2 == 1) ? 4.0 : 2.0;
            const double t = a + i * h;
            sn += w * integrand(t, false);
            sm += w * integrand(t, true);
        }
        out.A_N += sn * h / 3.0;
        out.A_M += sm * h / 3.0;
    }
    out.A_N /= T;
    out.A_M /= T;
    return out;
}

namespace {

int locate_interval(const std::vector<double>& times, double t) {
    if (t <= times.front()) return 0;
    if (t >= times.back()) return static_cast<int>(times.size()) - 2;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<int>(it - times.begin()) - 1;
}

cxd hermite(double t, double t0, double t1, cxd y0, cxd y1, cxd d0, cxd d1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

} // namespace

cxd EtaTrajectory::eval(double t) const {
    const int i = locate_interval(times, t);
    return hermite(t, times[i], times[i + 1], eta[i], eta[i + 1], eta_dot[i],
                   eta_dot[i + 1]);
}

cxd EtaTrajectory::eval_dot(double t) const {
    const int i = locate_interval(times, t);
    // Derivative of the cubic Hermite interpolant.
    const double h = times[i + 1] - times[i];
    const double s = (t - times[i]) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * eta[i] + (3 * s2 - 4 * s + 1) * h * eta_dot[i] +
            (-6 * s2 + 6 * s) * eta[i + 1] + (3 * s2 - 2 * s) * h * eta_dot[i + 1]) /
           h;
}

namespace {

EtaTrajectory rk4_eta(const ControlSchedule& schedule, double delta, double lambda,
                      cxd eta0, double T, int n_steps) {
    EtaTrajectory traj;
    traj.times.resize(n_steps + 1);
    traj.eta.resize(n_steps + 1);
    traj.eta_dot.resize(n_steps + 1);

    auto rhs = [&](double t, cxd eta) {
        const double r = schedule.r(t);
        const double sech = 1.0 / std::cosh(2.0 * r);
        const double re = delta * eta.imag() * sech;
        const double im = 0.5 * lambda * std::exp(r) - delta * eta.real() * sech;
        return cxd(re, im);
    };

    const double h = T / n_steps;
    cxd y = eta0;
    traj.times[0] = 0.0;
    traj.eta[0] = y;
    traj.eta_dot[0] = rhs(0.0, y);
    for (int i = 0; i < n_steps; ++i) {
        const double t = i * h;
        const cxd k1 = rhs(t, y);
        const cxd k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const cxd k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const cxd k4 = rhs(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.times[i + 1] = (i + 1) * h;
        traj.eta[i + 1] = y;
        traj.eta_dot[i + 1] = rhs((i + 1) * h, y);
    }
    return traj;
}

} // namespace

EtaTrajectory integrate_eta(const STAScheduleParams& p, int n_steps) {
    return integrate_eta(sta_schedule(p), p.delta, p.lambda, p.eta0, p.T, n_steps);
}

EtaTrajectory integrate_eta(const ControlSchedule& schedule, double delta,
                            double lambda, cxd eta0, double T, int n_steps) {
    if (n_steps < 100) throw SimError("integrate_eta: n_steps must be >= 100");

    int n = n_steps;
    for (int attempt = 0; attempt < 7; ++attempt) {
        EtaTrajectory coarse = rk4_eta(schedule, delta, lambda, eta0, T, n / 2);
        EtaTrajectory fine = rk4_eta(schedule, delta, lambda, eta0, T, n);
        // Classic RK4 is order 4; Richardson error of the fine solution.
        const double err =
            std::abs(fine.final_eta() - coarse.final_eta()) / 15.0;
        fine.richardson_error = err;
        if (err <= 1e-8) return fine;
        n *= 2;
    }
    throw StepFailure("integrate_eta: Richardson estimate above 1e-8 at the "
                      "step-count cap");
}

double adiabatic_eta_from_r(double r, double lambda, double delta) {
    return lambda / (4.0 * delta) * (std::exp(3.0 * r) + std::exp(-r));
}

double adiabatic_eta(double t, const AdiabaticScheduleParams& p) {
    return adiabatic_eta_from_r(adiabatic_r(t, p), p.lambda, p.delta);
}

std::vector<double> cd_coupling_lambda(const EtaTrajectory& traj) {
    std::vector<double> out(traj.eta_dot.size());
    for (size_t i = 0; i < traj.eta_dot.size(); ++i) {
        if (std::abs(traj.eta_dot[i].real()) > 1e-8) {
            throw NonRealCoupling(
                "cd_coupling_lambda: Re[eta_dot] = " +
                std::to_string(traj.eta_dot[i].real()) + " at t = " +
                std::to_string(traj.times[i]));
        }
        // lambda = -2i eta_dot, real for purely imaginary eta_dot.
        out[i] = 2.0 * traj.eta_dot[i].imag();
    }
    return out;
}

} // namespace sta::schedules
