#include "sta/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <Eigen/Eigenvalues>

#include "sta/errors.hpp"
#include "sta/fock.hpp"

namespace sta::evolve {

using kernels::DiagOperator;

namespace {

const cxd I(0.0, 1.0);

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, for the embedded error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Sorted union of sample times and breakpoints inside (t0, t1].
std::vector<double> event_times(double t0, double t1, int n_samples,
                                const std::vector<double>& breakpoints) {
    std::vector<double> ev;
    for (int k = 1; k <= n_samples; ++k) {
        ev.push_back(t0 + (t1 - t0) * k / n_samples);
    }
    for (double b : breakpoints) {
        if (b > t0 && b < t1) ev.push_back(b);
    }
    std::sort(ev.begin(), ev.end());
    const double tiny = 1e-12 * std::abs(t1 - t0);
    ev.erase(std::unique(ev.begin(), ev.end(),
                         [tiny](double a, double b) { return std::abs(a - b) <= tiny; }),
             ev.end());
    return ev;
}

bool is_sample_time(double t, double t0, double t1, int n_samples) {
    const double step = (t1 - t0) / n_samples;
    const double k = (t - t0) / step;
    return std::abs(k - std::round(k)) <= 1e-9;
}

// Adaptive Dormand-Prince driver shared by the pure-state and density-matrix
// paths. State is VectorXcd or MatrixXcd; rhs writes the derivative into its
// last argument. on_accept runs after each accepted step; on_event fires at
// the precomputed event times (which every step lands on exactly when due).
template <class State>
void dopri5(const std::function<void(double, const State&, State&)>& rhs,
            State& y, double t0, double t1, double rtol, double atol,
            const std::vector<double>& events,
            const std::function<void(double, State&)>& on_accept,
            const std::function<void(double, State&)>& on_event,
            IntegratorStats& stats) {
    const double span = t1 - t0;
    State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
    State ynew = y, err = y, work = y;

    double t = t0;
    double h = span / 1024.0;
    const double h_min = 1e-14 * std::abs(span);
    size_t next_event = 0;
    bool fresh_k1 = false;

    while (t < t1 - 1e-14 * std::abs(span)) {
        const double target = next_event < events.size() ? events[next_event] : t1;
        if (h > target - t) h = target - t;
        if (!fresh_k1) {
            rhs(t, y, k1);
            fresh_k1 = true;
        }

        work = y + (h * a21) * k1;
        rhs(t + c2 * h, work, k2);
        work = y + (h * a31) * k1 + (h * a32) * k2;
        rhs(t + c3 * h, work, k3);
        work = y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3;
        rhs(t + c4 * h, work, k4);
        work = y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4;
        rhs(t + c5 * h, work, k5);
        work = y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 +
               (h * a64) * k4 + (h * a65) * k5;
        rhs(t + h, work, k6);
        ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 +
               (h * b6) * k6;
        rhs(t + h, ynew, k7);
        err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
              (h * e6) * k6 + (h * e7) * k7;

        const double scale_floor = atol;
        const double emax =
            (err.cwiseAbs().array() /
             (scale_floor + rtol * y.cwiseAbs().array().max(ynew.cwiseAbs().array())))
                .maxCoeff();

        if (emax <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7); // first-same-as-last
            ++stats.n_steps;
            on_accept(t, y);
            if (next_event < events.size() &&
                std::abs(t - events[next_event]) <= 1e-12 * std::abs(span)) {
                on_event(t, y);
                ++next_event;
                // Coefficients may jump at a breakpoint; restart the FSAL pair.
                fresh_k1 = false;
            }
        } else {
            ++stats.n_rejected;
        }

        const double factor =
            std::clamp(0.9 * std::pow(std::max(emax, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
        if (h < h_min) {
            throw StepFailure("dopri5: step size below minimum at t = " +
                              std::to_string(t));
        }
    }
}

// Dissipator term rate * (A rho B - (BA rho + rho BA)/2) with banded A, B.
struct DissipatorTerm {
    std::function<cxd(double)> rate;
    DiagOperator A, B, BA;
};

} // namespace

void BathSpec::check_physical(double t) const {
    if (kappa < 0.0 || gamma < 0.0) {
        throw UnphysicalBath("bath: negative decay rate");
    }
    const double n = N_at(t);
    const double m2 = std::norm(M_at(t));
    if (m2 > n * (n + 1.0) + 1e-12) {
        throw UnphysicalBath("bath: |M|^2 = " + std::to_string(m2) +
                             " exceeds N(N+1) = " + std::to_string(n * (n + 1.0)) +
                             " at t = " + std::to_string(t));
    }
}

BathSpec BathSpec::vacuum(double kappa, double gamma) {
    BathSpec b;
    b.kappa = kappa;
    b.gamma = gamma;
    return b;
}

BathSpec BathSpec::squeezed_frame(double kappa, double gamma,
                                  const schedules::ControlSchedule& schedule,
                                  const schedules::ReservoirSchedule& reservoir) {
    BathSpec b;
    b.kappa = kappa;
    b.gamma = gamma;
    auto r = schedule.r;
    auto r_e = reservoir.r_e;
    const double phi = reservoir.phi_e;
    b.N = [r, r_e, phi](double t) {
        return schedules::noise_params(r(t), r_e(t), phi).N;
    };
    b.M = [r, r_e, phi](double t) {
        return schedules::noise_params(r(t), r_e(t), phi).M;
    };
    return b;
}

TrajectoryRecord schrodinger_evolve(const TimeDependentHamiltonian& h,
                                    const VectorXcd& psi0, double t0, double t1,
                                    const EvolveOptions& opts,
                                    const PureObserver& observer) {
    if (psi0.size() != h.dim()) {
        throw DimensionMismatch("schrodinger_evolve: psi0 does not match H");
    }
    if (opts.tol < 1e-12 || opts.tol > 1e-6) {
        throw SimError("schrodinger_evolve: tol must lie in [1e-12, 1e-6]");
    }

    TrajectoryRecord rec;
    DiagOperator hop = h.prepare();

    auto rhs = [&](double t, const VectorXcd& y, VectorXcd& dydt) {
        h.assemble(t, hop);
        dydt.setZero();
        kernels::apply_vec_accum(-I, hop, y, dydt);
    };

    auto record = [&](double t, VectorXcd& y) {
        rec.times.push_back(t);
        if (opts.record_states) rec.states.push_back(y);
        if (observer) observer(t, y);
    };

    VectorXcd psi = psi0;
    record(t0, psi);

    const auto events = event_times(t0, t1, opts.n_samples, opts.breakpoints);
    dopri5<VectorXcd>(
        rhs, psi, t0, t1, opts.tol, opts.tol * 1e-2, events,
        [](double, VectorXcd&) {},
        [&](double t, VectorXcd& y) {
            if (is_sample_time(t, t0, t1, opts.n_samples)) record(t, y);
        },
        rec.stats);

    rec.stats.final_norm_err = std::abs(psi.norm() - 1.0);
    rec.final_state = psi;
    return rec;
}

MatrixXcd lindblad_rhs(const MatrixXcd& rho, const MatrixXcd& h,
                       const BathSpec& bath, double t) {
    if (rho.rows() != rho.cols() || rho.rows() != h.rows() || h.rows() != h.cols()) {
        throw DimensionMismatch("lindblad_rhs: dimension mismatch");
    }
    bath.check_physical(t);
    const int dim = static_cast<int>(rho.rows());
    if (dim % 2 != 0) {
        throw DimensionMismatch("lindblad_rhs: composite dimension must be even");
    }
    fock::HilbertConfig cfg{dim / 2, fock::Frame::Squeezed};
    const MatrixXcd a = fock::tensor(fock::qubit_identity(), fock::annihilation(cfg));
    const MatrixXcd ad = a.adjoint();
    const MatrixXcd sm = fock::tensor(fock::sigma_minus(),
                                      MatrixXcd::Identity(cfg.fock_dim, cfg.fock_dim));

    auto dissipator = [&](cxd rate, const MatrixXcd& A, const MatrixXcd& B) {
        const MatrixXcd BA = B * A;
        return rate * (A * rho * B - 0.5 * (BA * rho + rho * BA));
    };

    const double n = bath.N_at(t);
    const cxd m = bath.M_at(t);
    MatrixXcd out = I * (rho * h - h * rho);
    out += dissipator(bath.gamma, sm, sm.adjoint());
    out += dissipator(bath.kappa * (n + 1.0), a, ad);
    out += dissipator(bath.kappa * n, ad, a);
    out += dissipator(-bath.kappa * m, ad, ad);
    out += dissipator(-bath.kappa * std::conj(m), a, a);
    return out;
}

TrajectoryRecord master_evolve(const TimeDependentHamiltonian& h,
                               const BathSpec& bath, const MatrixXcd& rho0,
                               double t0, double t1, const EvolveOptions& opts,
                               const DensityObserver& observer) {
    const int dim = h.dim();
    if (rho0.rows() != dim || rho0.cols() != dim) {
        throw DimensionMismatch("master_evolve: rho0 does not match H");
    }
    if (dim % 2 != 0) {
        throw DimensionMismatch("master_evolve: composite dimension must be even");
    }
    bath.check_physical(t0);

    fock::HilbertConfig cfg{dim / 2, fock::Frame::Squeezed};
    const DiagOperator a_op =
        DiagOperator::from_dense(fock::tensor(fock::qubit_identity(), fock::annihilation(cfg)));
    const DiagOperator ad_op = a_op.adjoint();
    const DiagOperator sm_op = DiagOperator::from_dense(
        fock::tensor(fock::sigma_minus(), MatrixXcd::Identity(cfg.fock_dim, cfg.fock_dim)));

    const double kappa = bath.kappa, gamma = bath.gamma;
    std::vector<DissipatorTerm> terms;
    if (gamma > 0.0) {
        terms.push_back({[gamma](double) { return cxd(gamma, 0.0); },
                         sm_op, sm_op.adjoint(),
                         DiagOperator::product(sm_op.adjoint(), sm_op)});
    }
    if (kappa > 0.0) {
        terms.push_back({[&bath, kappa](double t) { return cxd(kappa * (bath.N_at(t) + 1.0), 0.0); },
                         a_op, ad_op, DiagOperator::product(ad_op, a_op)});
        terms.push_back({[&bath, kappa](double t) { return cxd(kappa * bath.N_at(t), 0.0); },
                         ad_op, a_op, DiagOperator::product(a_op, ad_op)});
        terms.push_back({[&bath, kappa](double t) { return -kappa * bath.M_at(t); },
                         ad_op, ad_op, DiagOperator::product(ad_op, ad_op)});
        terms.push_back({[&bath, kappa](double t) { return -kappa * std::conj(bath.M_at(t)); },
                         a_op, a_op, DiagOperator::product(a_op, a_op)});
    }

    TrajectoryRecord rec;
    DiagOperator hop = h.prepare();
    MatrixXcd scratch = MatrixXcd::Zero(dim, dim);

    auto rhs = [&](double t, const MatrixXcd& y, MatrixXcd& dydt) {
        h.assemble(t, hop);
        dydt.setZero();
        kernels::left_mul_accum(-I, hop, y, dydt);
        kernels::right_mul_accum(I, y, hop, dydt);
        for (const auto& term : terms) {
            const cxd rate = term.rate(t);
            if (rate == cxd(0.0, 0.0)) continue;
            scratch.setZero();
            kernels::left_mul_accum(cxd(1.0, 0.0), term.A, y, scratch);
            kernels::right_mul_accum(rate, scratch, term.B, dydt);
            kernels::left_mul_accum(-0.5 * rate, term.BA, y, dydt);
            kernels::right_mul_accum(-0.5 * rate, y, term.BA, dydt);
        }
    };

    Eigen::SelfAdjointEigenSolver<MatrixXcd> eigs;
    rec.stats.min_eigenvalue = 1.0;

    auto record = [&](double t, MatrixXcd& y) {
        rec.times.push_back(t);
        rec.stats.max_trace_err =
            std::max(rec.stats.max_trace_err, std::abs(y.trace().real() - 1.0));
        if (opts.check_positivity) {
            eigs.compute(y, Eigen::EigenvaluesOnly);
            const double mineig = eigs.eigenvalues().minCoeff();
            rec.stats.min_eigenvalue = std::min(rec.stats.min_eigenvalue, mineig);
            if (mineig < -1e-5 && !rec.stats.positivity_warning) {
                rec.stats.positivity_warning = true;
                std::cerr << "master_evolve: positivity warning, min eigenvalue "
                          << mineig << " at t = " << t << "\n";
            }
        }
        if (opts.record_states) rec.density_states.push_back(y);
        if (observer) observer(t, y);
    };

    MatrixXcd rho = rho0;
    record(t0, rho);

    const auto events = event_times(t0, t1, opts.n_samples, opts.breakpoints);
    dopri5<MatrixXcd>(
        rhs, rho, t0, t1, opts.tol, opts.tol * 1e-2, events,
        [&](double t, MatrixXcd& y) {
            bath.check_physical(t);
            // Enforce Hermiticity every accepted step, logging the drift.
            scratch = 0.5 * (y + y.adjoint());
            rec.stats.max_herm_drift = std::max(
                rec.stats.max_herm_drift, (y - scratch).cwiseAbs().maxCoeff());
            y = scratch;
        },
        [&](double t, MatrixXcd& y) {
            if (is_sample_time(t, t0, t1, opts.n_samples)) record(t, y);
        },
        rec.stats);

    rec.final_density = rho;
    return rec;
}

TrajectoryRecord effective_lindblad_evolve(const TimeDependentHamiltonian& h,
                                           double kappa, double gamma,
                                           const MatrixXcd& rho0, double t0,
                                           double t1, const EvolveOptions& opts,
                                           const DensityObserver& observer) {
    return master_evolve(h, BathSpec::vacuum(kappa, gamma), rho0, t0, t1, opts,
                         observer);
}

} // namespace sta::evolve
