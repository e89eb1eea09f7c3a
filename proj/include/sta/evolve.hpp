#ifndef STA_EVOLVE_HPP
#define STA_EVOLVE_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sta/hamiltonians.hpp"

namespace sta::evolve {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using hamiltonians::TimeDependentHamiltonian;
using kernels::cxd;

// Squeezed-bath parameters: cavity decay kappa against a reservoir with
// occupation N(t) and two-photon correlation M(t), qubit decay gamma.
// Physicality |M|^2 <= N(N+1) is checked at every accepted step.
struct BathSpec {
    double kappa = 0.0;
    double gamma = 0.0;
    std::function<double(double)> N;
    std::function<cxd(double)> M;

    double N_at(double t) const { return N ? N(t) : 0.0; }
    cxd M_at(double t) const { return M ? M(t) : cxd(0.0, 0.0); }
    void check_physical(double t) const;

    static BathSpec vacuum(double kappa, double gamma);
    // Bath seen in the frame squeezed by schedule.r(t) when the cavity
    // couples to a reservoir squeezed by reservoir.r_e(t).
    static BathSpec squeezed_frame(double kappa, double gamma,
                                   const schedules::ControlSchedule& schedule,
                                   const schedules::ReservoirSchedule& reservoir);
};

struct EvolveOptions {
    double tol = 1e-8;
    int n_samples = 400;
    std::vector<double> breakpoints; // forced step boundaries (bath switches)
    bool record_states = false;
    bool check_positivity = true;
};

struct IntegratorStats {
    long n_steps = 0;
    long n_rejected = 0;
    double max_herm_drift = 0.0;   // per-step symmetrization residual
    double max_trace_err = 0.0;    // |tr rho - 1| over sample times
    double min_eigenvalue = 0.0;   // most negative eigenvalue seen at samples
    double final_norm_err = 0.0;   // | ||psi|| - 1 | at t1 (pure runs)
    bool positivity_warning = false;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> observables;
    std::vector<VectorXcd> states;         // pure runs, if record_states
    std::vector<MatrixXcd> density_states; // density runs, if record_states
    VectorXcd final_state;
    MatrixXcd final_density;
    IntegratorStats stats;
};

using PureObserver = std::function<void(double, const VectorXcd&)>;
using DensityObserver = std::function<void(double, const MatrixXcd&)>;

// i psi' = H(t) psi via adaptive embedded Runge-Kutta (Dormand-Prince 5(4)).
TrajectoryRecord schrodinger_evolve(const TimeDependentHamiltonian& h,
                                    const VectorXcd& psi0, double t0, double t1,
                                    const EvolveOptions& opts = {},
                                    const PureObserver& observer = {});

// Right-hand side of the squeezed-bath master equation; dense reference
// used as the oracle against the banded fast path.
MatrixXcd lindblad_rhs(const MatrixXcd& rho, const MatrixXcd& h,
                       const BathSpec& bath, double t);

// rho' = i[rho, H] + qubit decay + the four squeezed-bath cavity dissipators.
TrajectoryRecord master_evolve(const TimeDependentHamiltonian& h,
                               const BathSpec& bath, const MatrixXcd& rho0,
                               double t0, double t1,
                               const EvolveOptions& opts = {},
                               const DensityObserver& observer = {});

// Standard two-dissipator Lindblad equation: master_evolve at N = M = 0.
TrajectoryRecord effective_lindblad_evolve(const TimeDependentHamiltonian& h,
                                           double kappa, double gamma,
                                           const MatrixXcd& rho0, double t0,
                                           double t1,
                                           const EvolveOptions& opts = {},
                                           const DensityObserver& observer = {});

} // namespace sta::evolve

#endif
