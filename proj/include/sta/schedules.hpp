#ifndef STA_SCHEDULES_HPP
#define STA_SCHEDULES_HPP

#include <complex>
#include <functional>
#include <vector>

namespace sta::schedules {

using cxd = std::complex<double>;

// Control-pulse family for the fast protocol: r(t) = r_max / (1 + e^{f(t)})
// with f(t) = f0 cos(2 pi t / T), a near-square wave vanishing at both ends.
struct STAScheduleParams {
    double r_max = 2.3;
    double f0 = 10.0;
    double T = 20.0;
    double delta = 1.0;
    double lambda = 0.045;
    cxd eta0 = cxd(0.01, 0.01);

    void validate() const;
};

// Slow-ramp family: r(t) = r_max / (1 + e^{f0 (1/2 - t/T)}), monotone 0 -> r_max.
struct AdiabaticScheduleParams {
    double r_max = 1.8;
    double f0 = 10.0;
    double T = 250.0;
    double delta = 1.0;
    double lambda = 0.045;

    void validate() const;
};

// Ramp-down of the parametric drive after the protocol end t_f.
struct TurnOffParams {
    double omega_max = 0.99;
    double T_off = 5.0;

    void validate(double delta) const;
};

// The printed ramp-down formula rises from ~0 to its plateau while the
// figure it belongs to shows the drive decreasing; both readings are kept.
enum class TurnOffOrientation { Decreasing, AsPrinted };

double sta_r(double t, const STAScheduleParams& p);
double sta_r_dot(double t, const STAScheduleParams& p);
double adiabatic_r(double t, const AdiabaticScheduleParams& p);
double adiabatic_r_dot(double t, const AdiabaticScheduleParams& p);
double turnoff_r(double t, const TurnOffParams& p, double delta, double t_f,
                 TurnOffOrientation orientation = TurnOffOrientation::Decreasing);
double turnoff_r_dot(double t, const TurnOffParams& p, double delta, double t_f,
                     TurnOffOrientation orientation = TurnOffOrientation::Decreasing);

struct DriveAmplitudes {
    double omega_r = 0.0; // in-phase two-photon drive, delta * tanh(2r)
    double omega_i = 0.0; // quadrature counter-drive, r_dot
};
DriveAmplitudes drive_amplitudes(double r, double r_dot, double delta);

// Generic r(t) control wrapper used by the Hamiltonian builders.
struct ControlSchedule {
    std::function<double(double)> r;
    std::function<double(double)> r_dot;
    double T = 0.0;
};
ControlSchedule sta_schedule(const STAScheduleParams& p);
// Same pulse but frozen at its t = T values for t > T and at t = 0 values
// for t < 0; used for evolution-time imperfection runs.
ControlSchedule sta_schedule_clamped(const STAScheduleParams& p);
ControlSchedule adiabatic_schedule(const AdiabaticScheduleParams& p);
ControlSchedule turnoff_schedule(const TurnOffParams& p, double delta, double t_f,
                                 TurnOffOrientation orientation = TurnOffOrientation::Decreasing);
ControlSchedule zero_schedule();

enum class Protocol { STA, Adiabatic };

// Piecewise-constant squeezed-reservoir parameter r_e(t) plus reference
// phase; switch_times lists the discontinuities so integrators can place
// step boundaries on them exactly.
struct ReservoirSchedule {
    std::function<double(double)> r_e;
    double phi_e = 3.14159265358979323846;
    std::vector<double> switch_times;

    static ReservoirSchedule off();
    static ReservoirSchedule compensating(Protocol protocol, double r_max, double T);
};

double reservoir_r_e(double t, Protocol protocol, double r_max, double T);

struct NoiseParams {
    double N = 0.0;
    cxd M = cxd(0.0, 0.0);
};
// Squeezed-frame bath parameters for frame squeezing r against reservoir
// squeezing r_e at reference phase phi_e; satisfies |M|^2 = N(N+1) exactly.
NoiseParams noise_params(double r, double r_e, double phi_e);

struct NoiseAverages {
    double A_N = 0.0;
    double A_M = 0.0;
};
// Time averages (1/T) integral |N_S| dt and (1/T) integral |M_S| dt by
// composite Simpson quadrature, segmented at the reservoir switch times.
NoiseAverages noise_averages(const ControlSchedule& schedule,
                             const ReservoirSchedule& reservoir, double T,
                             int n_samples);

// Solution of the inverse-engineering equations of motion
//   Re[eta'] = delta Im[eta] sech(2r),  Im[eta'] = (lambda/2) e^r - delta Re[eta] sech(2r)
// on a uniform grid, with cubic-Hermite evaluation between nodes.
struct EtaTrajectory {
    std::vector<double> times;
    std::vector<cxd> eta;
    std::vector<cxd> eta_dot;
    double richardson_error = 0.0;

    cxd eval(double t) const;
    cxd eval_dot(double t) const;
    cxd final_eta() const { return eta.back(); }
};

EtaTrajectory integrate_eta(const STAScheduleParams& p, int n_steps = 10000);
EtaTrajectory integrate_eta(const ControlSchedule& schedule, double delta,
                            double lambda, cxd eta0, double T, int n_steps = 10000);

// Effective normalized coupling reached adiabatically at squeezing r:
// (lambda / 4 delta) (e^{3r} + e^{-r}).
double adiabatic_eta(double t, const AdiabaticScheduleParams& p);
double adiabatic_eta_from_r(double r, double lambda, double delta);

// lambda(t) = -2i eta_dot(t) for the driven-qubit variant; requires eta_dot
// purely imaginary along the trajectory.
std::vector<double> cd_coupling_lambda(const EtaTrajectory& traj);

} // namespace sta::schedules

#endif
