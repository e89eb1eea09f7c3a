#ifndef STA_CONFIG_HPP
#define STA_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sta/fock.hpp"
#include "sta/schedules.hpp"

namespace sta::experiments {

enum class Scenario {
    Fig2a_AdiabaticTvsEN,
    Fig2b_StaTvsEN,
    Fig3a_Pulses,
    Fig3b_Contour,
    Fig4a_Robustness,
    Fig4b_Dissipation,
    FigS1_Turnoff,
    FigS2_StaNoise,
    FigS3_AdiabaticNoise,
    AltDrivenCD,
};

const char* scenario_name(Scenario s);
std::optional<Scenario> scenario_from_name(const std::string& name);
std::vector<Scenario> all_scenarios();

struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

// One flat, reviewable description of a run: scenario choice plus every
// physical and numerical parameter. Parsed from an INI-style file with
// line-precise validation errors.
struct ScenarioConfig {
    Scenario scenario = Scenario::Fig2b_StaTvsEN;
    std::string output_dir = "out";

    // [hilbert]
    int fock_dim = 0; // 0 = auto-size from the protocol endpoint
    fock::Frame frame = fock::Frame::Squeezed;

    // [model]
    double delta = 1.0;
    double lambda = 0.045;
    double omega_c = 1.0;
    double omega_q = 0.0;

    // [sta]
    double sta_r_max = 2.3;
    double sta_f0 = 10.0;
    double sta_T = 20.0;
    double eta0_re = 0.01;
    double eta0_im = 0.01;

    // [adiabatic]
    double ad_r_max = 1.8;
    double ad_f0 = 10.0;
    double ad_T = 250.0;

    // [turnoff]
    double turnoff_omega_max = 0.0; // 0 = delta * tanh(2 ad_r_max)
    double turnoff_T_off = 5.0;
    schedules::TurnOffOrientation turnoff_orientation =
        schedules::TurnOffOrientation::Decreasing;

    // [bath]
    double kappa = 0.0;
    double gamma = 0.0;
    double inv_sqrt_C = 0.0; // if > 0, sets kappa = gamma = inv_sqrt_C * lambda
    bool reservoir_compensated = true;
    double phi_e = 3.14159265358979323846;

    // [alt]
    double alt_omega_ratio = 50.0; // big_omega / lambda_max
    double alt_tf_lambda = 40.0;   // t_f * lambda_max
    bool alt_round_two_pi = true;  // snap big_omega so 2 big_omega t_f = 2 pi n

    // [output]
    int n_samples = 400;
    double tol = 1e-8;

    // [sweep]
    std::vector<SweepAxis> sweep;

    std::string canonical_text() const;
    std::uint64_t hash() const;
};

ScenarioConfig parse_config_text(const std::string& text, const std::string& filename);
ScenarioConfig parse_config_file(const std::string& path);

// Semantic checks beyond parsing: axis registry, counts, rate signs.
void validate_config(const ScenarioConfig& cfg);

// Parameter names a sweep axis may reference.
const std::vector<std::string>& sweep_axis_registry();

} // namespace sta::experiments

#endif
