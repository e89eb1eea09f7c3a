#ifndef STA_HAMILTONIANS_HPP
#define STA_HAMILTONIANS_HPP

#include <functional>
#include <vector>

#include "sta/fock.hpp"
#include "sta/kernels.hpp"
#include "sta/schedules.hpp"

namespace sta::hamiltonians {

using Eigen::MatrixXcd;
using fock::HilbertConfig;
using schedules::ControlSchedule;
using schedules::EtaTrajectory;
using kernels::cxd;

struct ModelParams {
    double delta = 1.0;    // detuning, the frequency unit
    double lambda = 0.045; // qubit-cavity coupling
    double omega_c = 1.0;  // bare cavity frequency (pure-Rabi builder only)
    double omega_q = 0.0;  // bare qubit frequency (pure-Rabi builder only)
    double big_omega = 0.0; // strong qubit drive for the driven-qubit variant

    void validate_dispersive() const;
};

// Sum of fixed Hermitian banded patterns with time-dependent real
// coefficients. The assembled operator is Hermitian by construction.
class TimeDependentHamiltonian {
  public:
    TimeDependentHamiltonian() = default;

    void add_term(kernels::DiagOperator pattern, std::function<double(double)> coeff);

    int dim() const { return dim_; }
    // Returns a zero operator carrying the union of all term offsets, to be
    // reused across assemble() calls.
    kernels::DiagOperator prepare() const;
    void assemble(double t, kernels::DiagOperator& out) const;
    MatrixXcd dense(double t) const;

  private:
    int dim_ = 0;
    std::vector<kernels::DiagOperator> patterns_;
    std::vector<std::function<double(double)>> coeffs_;
};

// omega_c a^dag a + (omega_q/2) sigma_z + sigma_x (g a^dag + g* a), g = eta omega_c.
MatrixXcd h_rabi(cxd eta, const ModelParams& p, const HilbertConfig& cfg);

// i sigma_x (eta_dot* a - eta_dot a^dag); cancels nonadiabatic transitions
// along the displaced-ground-state path.
MatrixXcd h_cd(cxd eta_dot, const HilbertConfig& cfg);

// delta a^dag a - [((omega_r + i omega_i)/2) a^2 - lambda a^dag sigma + h.c.]
MatrixXcd h_lab_driven_jc(double t, const ControlSchedule& schedule,
                          const ModelParams& p, const HilbertConfig& cfg);

struct SqueezedFrameTerms {
    MatrixXcd h_s_rabi; // delta sech(2r) a^dag a + (lambda/2) e^r sigma_x (a^dag + a)
    MatrixXcd h_err;    // -i (lambda/2) e^{-r} sigma_y (a^dag - a)
    MatrixXcd h_na;     // -i (r_dot/2) (a^dag^2 - a^2)
};
SqueezedFrameTerms h_squeezed_frame_terms(double t, const ControlSchedule& schedule,
                                          const ModelParams& p,
                                          const HilbertConfig& cfg);

// The h_s_rabi component alone (counter-drive cancels h_na, h_err dropped).
MatrixXcd h_effective_sta(double t, const ControlSchedule& schedule,
                          const ModelParams& p, const HilbertConfig& cfg);

struct AltDrivenPair {
    MatrixXcd h2;    // big_omega sigma_x + lambda_t (sigma a^dag + h.c.)
    MatrixXcd h_eff; // (lambda_t/2) (a^dag + a) sigma_x
};
AltDrivenPair h_alt_driven(double t, double lambda_t, const ModelParams& p,
                           const HilbertConfig& cfg);

// max |eta_dot| / omega_c along the trajectory with omega_c = delta sech(2r);
// small values indicate the reference dynamics is adiabatic.
double adiabatic_condition_ratio(const EtaTrajectory& traj,
                                 const ControlSchedule& schedule, double delta);

// ---- time-dependent builders for the integrators ----

// Squeezed-frame Hamiltonian; with_err adds the sigma_y Y error term,
// with_na adds the nonadiabatic squeeze-rate term (present only when the
// quadrature counter-drive is absent).
TimeDependentHamiltonian squeezed_frame_hamiltonian(const ControlSchedule& schedule,
                                                    const ModelParams& p,
                                                    const HilbertConfig& cfg,
                                                    bool with_err = true,
                                                    bool with_na = false);

TimeDependentHamiltonian lab_driven_jc_hamiltonian(const ControlSchedule& schedule,
                                                   const ModelParams& p,
                                                   const HilbertConfig& cfg);

// Reference Rabi Hamiltonian along eta(t) with omega_c(t) = delta sech(2r(t))
// and optional counterdiabatic drive.
TimeDependentHamiltonian rabi_cd_hamiltonian(const EtaTrajectory& traj,
                                             const ControlSchedule& schedule,
                                             const ModelParams& p,
                                             const HilbertConfig& cfg,
                                             bool with_cd = true);

// Driven-qubit variant: full Hamiltonian and its rotating-frame effective form.
TimeDependentHamiltonian h2_hamiltonian(std::function<double(double)> lambda_t,
                                        double big_omega, const HilbertConfig& cfg);
TimeDependentHamiltonian heff_hamiltonian(std::function<double(double)> lambda_t,
                                          const HilbertConfig& cfg);

// Wraps a constant dense matrix; convenience for tests and simple drives.
TimeDependentHamiltonian constant_hamiltonian(const MatrixXcd& m);

} // namespace sta::hamiltonians

#endif
