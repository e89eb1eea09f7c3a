#ifndef STA_EXPERIMENTS_HPP
#define STA_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "sta/config.hpp"
#include "sta/evolve.hpp"
#include "sta/observables.hpp"
#include "sta/result_table.hpp"

namespace sta::experiments {

using kernels::cxd;

extern const char* kVersion;

// Physical and numerical inputs for one protocol run, resolved from a config.
struct ProtocolSettings {
    hamiltonians::ModelParams model;
    schedules::STAScheduleParams sta;
    schedules::AdiabaticScheduleParams adiabatic;
    int fock_dim = 0; // 0 = auto-size from the protocol endpoint
    double tol = 1e-8;
    int n_samples = 400;
};
ProtocolSettings settings_from_config(const ScenarioConfig& cfg);
std::pair<double, double> resolve_rates(const ScenarioConfig& cfg);

struct ProtocolResult {
    double fidelity = 0.0;        // to the protocol's own target state
    double log_neg = 0.0;         // of the final state
    double mean_photon_final = 0.0;
    double n_d_target = 0.0;      // |eta_f|^2 of the target
    cxd eta_f;
    int fock_dim = 0;
    evolve::IntegratorStats stats;
};

// Closed-system squeezed-frame run of the fast protocol. extend_frac != 0
// evolves to T (1 + extend_frac) with the drives held at their boundary
// values outside [0, T].
ProtocolResult run_sta_closed(const ProtocolSettings& s, double extend_frac = 0.0);
ProtocolResult run_adiabatic_closed(const ProtocolSettings& s);

enum class ReservoirMode { Off, Compensated, Effective };

ProtocolResult run_sta_dissipative(const ProtocolSettings& s, double kappa,
                                   double gamma, ReservoirMode mode,
                                   double phi_e = 3.14159265358979323846);
ProtocolResult run_adiabatic_dissipative(const ProtocolSettings& s, double kappa,
                                         double gamma, ReservoirMode mode,
                                         double phi_e = 3.14159265358979323846);

struct TurnoffResult {
    std::vector<double> t, r, omega_r, r_dot, n_photon, p_sg, p_g, log_neg;
    double n_at_start = 0.0;
    double n_peak = 0.0;
    double en_at_toff = 0.0;
    double p_sg_at_toff = 0.0;
    double p_g_at_toff = 0.0;
    int fock_dim = 0;
};
// Ramp-down of the parametric drive from the adiabatic protocol endpoint,
// tracking photon pumping and the loss of the prepared state.
TurnoffResult run_turnoff(const ProtocolSettings& s,
                          const schedules::TurnOffParams& params,
                          schedules::TurnOffOrientation orientation,
                          int n_samples);

struct AltCdResult {
    std::vector<double> t, lambda_t, frame_fidelity, n_full, n_eff;
    double final_frame_fidelity = 0.0; // effective vs rotated full propagation
    double endpoint_fidelity = 0.0;    // full vs entangled-cat target
    double alt_state_fidelity = 0.0;   // full vs phase-rotated cat formula
    cxd eta_f;
    double theta = 0.0;
    double big_omega = 0.0;
    double t_f = 0.0;
    int fock_dim = 0;
};
// Driven-qubit realization of the counterdiabatic Hamiltonian: full dynamics
// against the rotating-frame effective dynamics.
AltCdResult run_alt_cd(const ProtocolSettings& s, double omega_ratio,
                       double tf_lambda, bool round_two_pi, int n_samples);

struct TimeToEntanglement {
    double T = 0.0;
    double en_achieved = 0.0;
    double fidelity = 0.0;
    double n_d = 0.0;
};
// Smallest closed-run duration whose final log-negativity reaches target_en,
// located by coarse scan plus bisection to t_tol.
TimeToEntanglement smallest_time_to_en(schedules::Protocol protocol,
                                       const ProtocolSettings& s, double target_en,
                                       double t_lo, double t_hi, double t_tol = 0.5);

// Deterministic scenario evaluation; identical configs give identical tables.
ResultTable run_scenario(const ScenarioConfig& cfg);
// Grid evaluation on a bounded worker pool; output is byte-identical to
// run_scenario for any worker count.
ResultTable sweep(const ScenarioConfig& cfg, int max_workers);

enum class EmitFormat { CSV, JSON };
// Writes <scenario>.<ext>, <scenario>.plot and metadata.json into output_dir;
// returns the written paths.
std::vector<std::string> emit(const ResultTable& table, const ScenarioConfig& cfg,
                              EmitFormat format, const std::string& output_dir);

} // namespace sta::experiments

#endif
