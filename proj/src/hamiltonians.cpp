#include "sta/hamiltonians.hpp"

#include <cmath>
#include <iostream>

#include "sta/errors.hpp"

namespace sta::hamiltonians {

using fock::annihilation;
using fock::creation;
using fock::hermitize;
using fock::number_operator;
using fock::qubit_identity;
using fock::sigma_minus;
using fock::sigma_x;
using fock::sigma_y;
using fock::sigma_z;
using fock::tensor;
using kernels::DiagOperator;

namespace {

const cxd I(0.0, 1.0);

void check_eta_bound(cxd eta, const HilbertConfig& cfg) {
    if (std::norm(eta) > cfg.fock_dim / 4.0) {
        throw TruncationRisk("h_rabi: |eta|^2 exceeds fock_dim/4");
    }
}

// Hermitian composite patterns shared by the time-dependent builders.
struct Patterns {
    DiagOperator number;     // I (x) a^dag a
    DiagOperator sz;         // sigma_z (x) I
    DiagOperator sx;         // sigma_x (x) I
    DiagOperator x_plus;     // sigma_x (x) (a + a^dag)
    DiagOperator x_minus_i;  // sigma_x (x) i(a^dag - a)
    DiagOperator err;        // -i sigma_y (x) (a^dag - a)
    DiagOperator na;         // -i (x) (a^dag^2 - a^2)/2
    DiagOperator tp_cos;     // I (x) (a^2 + a^dag^2)
    DiagOperator tp_sin;     // I (x) i(a^2 - a^dag^2)
    DiagOperator jc;         // sigma a^dag + sigma^dag a
};

Patterns build_patterns(const HilbertConfig& cfg) {
    const MatrixXcd a = annihilation(cfg);
    const MatrixXcd ad = creation(cfg);
    const MatrixXcd id = MatrixXcd::Identity(cfg.fock_dim, cfg.fock_dim);
    Patterns p;
    p.number = DiagOperator::from_dense(tensor(qubit_identity(), number_operator(cfg)));
    p.sz = DiagOperator::from_dense(tensor(sigma_z(), id));
    p.sx = DiagOperator::from_dense(tensor(sigma_x(), id));
    p.x_plus = DiagOperator::from_dense(tensor(sigma_x(), a + ad));
    p.x_minus_i = DiagOperator::from_dense(tensor(sigma_x(), I * (ad - a)));
    p.err = DiagOperator::from_dense(tensor(-I * sigma_y(), ad - a));
    p.na = DiagOperator::from_dense(tensor(qubit_identity(), -0.5 * I * (ad * ad - a * a)));
    p.tp_cos = DiagOperator::from_dense(tensor(qubit_identity(), a * a + ad * ad));
    p.tp_sin = DiagOperator::from_dense(tensor(qubit_identity(), I * (a * a - ad * ad)));
    p.jc = DiagOperator::from_dense(tensor(sigma_minus(), ad) +
                                    tensor(sigma_minus().adjoint(), a));
    return p;
}

} // namespace

void ModelParams::validate_dispersive() const {
    if (!(lambda < delta)) {
        throw SimError("ModelParams: dispersive builders require lambda < delta");
    }
}

void TimeDependentHamiltonian::add_term(DiagOperator pattern,
                                        std::function<double(double)> coeff) {
    if (dim_ == 0) {
        dim_ = pattern.dim();
    } else if (pattern.dim() != dim_) {
        throw DimensionMismatch("TimeDependentHamiltonian: pattern dim mismatch");
    }
    patterns_.push_back(std::move(pattern));
    coeffs_.push_back(std::move(coeff));
}

DiagOperator TimeDependentHamiltonian::prepare() const {
    DiagOperator out(dim_);
    for (const auto& p : patterns_) {
        for (int off : p.offsets()) out.ensure_offset(off);
    }
    return out;
}

void TimeDependentHamiltonian::assemble(double t, DiagOperator& out) const {
    out.set_zero();
    for (size_t i = 0; i < patterns_.size(); ++i) {
        out.add_scaled(coeffs_[i](t), patterns_[i]);
    }
}

MatrixXcd TimeDependentHamiltonian::dense(double t) const {
    DiagOperator out = prepare();
    assemble(t, out);
    return out.to_dense();
}

MatrixXcd h_rabi(cxd eta, const ModelParams& p, const HilbertConfig& cfg) {
    check_eta_bound(eta, cfg);
    const MatrixXcd a = annihilation(cfg);
    const MatrixXcd ad = creation(cfg);
    const cxd g = eta * p.omega_c;
    MatrixXcd h = p.omega_c * tensor(qubit_identity(), number_operator(cfg)) +
                  0.5 * p.omega_q * tensor(sigma_z(), MatrixXcd::Identity(cfg.fock_dim, cfg.fock_dim)) +
                  tensor(sigma_x(), g * ad + std::conj(g) * a);
    return hermitize(h);
}

MatrixXcd h_cd(cxd eta_dot, const HilbertConfig& cfg) {
    const MatrixXcd a = annihilation(cfg);
    const MatrixXcd ad = creation(cfg);
    MatrixXcd h = tensor(sigma_x(), I * (std::conj(eta_dot) * a - eta_dot * ad));
    return hermitize(h);
}

MatrixXcd h_lab_driven_jc(double t, const ControlSchedule& schedule,
                          const ModelParams& p, const HilbertConfig& cfg) {
    const auto drive = schedules::drive_amplitudes(schedule.r(t), schedule.r_dot(t), p.delta);
    const MatrixXcd a = annihilation(cfg);
    const MatrixXcd ad = creation(cfg);
    const MatrixXcd sm = sigma_minus();
    const cxd w = 0.5 * cxd(drive.omega_r, drive.omega_i);
    MatrixXcd h = p.delta * tensor(qubit_identity(), number_operator(cfg)) -
                  tensor(qubit_identity(), w * a * a + std::conj(w) * ad * ad) +
                  p.lambda * (tensor(sm, ad) + tensor(sm.adjoint(), a));
    return hermitize(h);
}

SqueezedFrameTerms h_squeezed_frame_terms(double t, const ControlSchedule& schedule,
                                          const ModelParams& p,
                                          const HilbertConfig& cfg) {
    const double r = schedule.r(t);
    const double r_dot = schedule.r_dot(t);
    const MatrixXcd a = annihilation(cfg);
    const MatrixXcd ad = creation(cfg);

    SqueezedFrameTerms out;
    out.h_s_rabi = hermitize(
        p.delta / std::cosh(2.0 * r) * tensor(qubit_identity(), number_operator(cfg)) +
        0.5 * p.lambda * std::exp(r) * tensor(sigma_x(), ad + a));
    out.h_err = hermitize(-0.5 * I * p.lambda * std::exp(-r) * tensor(sigma_y(), ad - a));
    out.h_na = hermitize(-0.5 * I * r_dot * tensor(qubit_identity(), ad * ad - a * a));
    return out;
}

MatrixXcd h_effective_sta(double t, const ControlSchedule& schedule,
                          const ModelParams& p, const HilbertConfig& cfg) {
    return h_squeezed_frame_terms(t, schedule, p, cfg).h_s_rabi;
}

AltDrivenPair h_alt_driven(double t, double lambda_t, const ModelParams& p,
                           const HilbertConfig& cfg) {
    (void)t;
    if (lambda_t != 0.0 && p.big_omega < 20.0 * std::abs(lambda_t)) {
        std::cerr << "h_alt_driven: big_omega / lambda = "
                  << p.big_omega / std::abs(lambda_t)
                  << " < 20; rotating-frame reduction degrades\n";
    }
    const MatrixXcd a = annihilation(cfg);
    const MatrixXcd ad = creation(cfg);
    const MatrixXcd sm = sigma_minus();
    const MatrixXcd id = MatrixXcd::Identity(cfg.fock_dim, cfg.fock_dim);
    AltDrivenPair out;
    out.h2 = hermitize(p.big_omega * tensor(sigma_x(), id) +
                       lambda_t * (tensor(sm, ad) + tensor(sm.adjoint(), a)));
    out.h_eff = hermitize(0.5 * lambda_t * tensor(sigma_x(), ad + a));
    return out;
}

double adiabatic_condition_ratio(const EtaTrajectory& traj,
                                 const ControlSchedule& schedule, double delta) {
    double worst = 0.0;
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double omega_c = delta / std::cosh(2.0 * schedule.r(traj.times[i]));
        worst = std::max(worst, std::abs(traj.eta_dot[i]) / omega_c);
    }
    return worst;
}

TimeDependentHamiltonian squeezed_frame_hamiltonian(const ControlSchedule& schedule,
                                                    const ModelParams& p,
                                                    const HilbertConfig& cfg,
                                                    bool with_err, bool with_na) {
    Patterns pat = build_patterns(cfg);
    TimeDependentHamiltonian h;
    const double delta = p.delta, lambda = p.lambda;
    auto r = schedule.r;
    h.add_term(pat.number, [r, delta](double t) { return delta / std::cosh(2.0 * r(t)); });
    h.add_term(pat.x_plus, [r, lambda](double t) { return 0.5 * lambda * std::exp(r(t)); });
    if (with_err) {
        h.add_term(pat.err, [r, lambda](double t) { return 0.5 * lambda * std::exp(-r(t)); });
    }
    if (with_na) {
        auto r_dot = schedule.r_dot;
        h.add_term(pat.na, [r_dot](double t) { return r_dot(t); });
    }
    return h;
}

TimeDependentHamiltonian lab_driven_jc_hamiltonian(const ControlSchedule& schedule,
                                                   const ModelParams& p,
                                                   const HilbertConfig& cfg) {
    Patterns pat = build_patterns(cfg);
    TimeDependentHamiltonian h;
    const double delta = p.delta;
    auto r = schedule.r;
    auto r_dot = schedule.r_dot;
    h.add_term(pat.number, [delta](double) { return delta; });
    h.add_term(pat.tp_cos, [r, delta](double t) {
        return -0.5 * schedules::drive_amplitudes(r(t), 0.0, delta).omega_r;
    });
    h.add_term(pat.tp_sin, [r_dot](double t) { return -0.5 * r_dot(t); });
    h.add_term(pat.jc, [lambda = p.lambda](double) { return lambda; });
    return h;
}

TimeDependentHamiltonian rabi_cd_hamiltonian(const EtaTrajectory& traj,
                                             const ControlSchedule& schedule,
                                             const ModelParams& p,
                                             const HilbertConfig& cfg, bool with_cd) {
    Patterns pat = build_patterns(cfg);
    TimeDependentHamiltonian h;
    const double delta = p.delta;
    auto r = schedule.r;
    auto omega_c = [r, delta](double t) { return delta / std::cosh(2.0 * r(t)); };
    h.add_term(pat.number, omega_c);
    if (p.omega_q != 0.0) {
        h.add_term(pat.sz, [wq = p.omega_q](double) { return 0.5 * wq; });
    }
    // sigma_x (g a^dag + g* a) with g = eta omega_c, plus the counterdiabatic
    // drive Im[eta_dot] sigma_x (a + a^dag) - Re[eta_dot] sigma_x i(a^dag - a).
    h.add_term(pat.x_plus, [traj, omega_c, with_cd](double t) {
        double c = traj.eval(t).real() * omega_c(t);
        if (with_cd) c += traj.eval_dot(t).imag();
        return c;
    });
    h.add_term(pat.x_minus_i, [traj, omega_c, with_cd](double t) {
        double c = traj.eval(t).imag() * omega_c(t);
        if (with_cd) c -= traj.eval_dot(t).real();
        return c;
    });
    return h;
}

TimeDependentHamiltonian h2_hamiltonian(std::function<double(double)> lambda_t,
                                        double big_omega, const HilbertConfig& cfg) {
    Patterns pat = build_patterns(cfg);
    TimeDependentHamiltonian h;
    h.add_term(pat.sx, [big_omega](double) { return big_omega; });
    h.add_term(pat.jc, lambda_t);
    return h;
}

TimeDependentHamiltonian heff_hamiltonian(std::function<double(double)> lambda_t,
                                          const HilbertConfig& cfg) {
    Patterns pat = build_patterns(cfg);
    TimeDependentHamiltonian h;
    h.add_term(pat.x_plus, [lambda_t](double t) { return 0.5 * lambda_t(t); });
    return h;
}

TimeDependentHamiltonian constant_hamiltonian(const MatrixXcd& m) {
    TimeDependentHamiltonian h;
    h.add_term(DiagOperator::from_dense(m), [](double) { return 1.0; });
    return h;
}

} // namespace sta::hamiltonians
