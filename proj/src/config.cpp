#include "sta/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sta/errors.hpp"

namespace sta::experiments {

namespace {

const struct {
    Scenario s;
    const char* name;
} kScenarios[] = {
    {Scenario::Fig2a_AdiabaticTvsEN, "Fig2a_AdiabaticTvsEN"},
    {Scenario::Fig2b_StaTvsEN, "Fig2b_StaTvsEN"},
    {Scenario::Fig3a_Pulses, "Fig3a_Pulses"},
    {Scenario::Fig3b_Contour, "Fig3b_Contour"},
    {Scenario::Fig4a_Robustness, "Fig4a_Robustness"},
    {Scenario::Fig4b_Dissipation, "Fig4b_Dissipation"},
    {Scenario::FigS1_Turnoff, "FigS1_Turnoff"},
    {Scenario::FigS2_StaNoise, "FigS2_StaNoise"},
    {Scenario::FigS3_AdiabaticNoise, "FigS3_AdiabaticNoise"},
    {Scenario::AltDrivenCD, "AltDrivenCD"},
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& file, int line, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(file, line, "expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& file, int line, const std::string& v) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(file, line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& file, int line, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(file, line, "expected a boolean, got '" + v + "'");
}

} // namespace

const char* scenario_name(Scenario s) {
    for (const auto& e : kScenarios) {
        if (e.s == s) return e.name;
    }
    return "unknown";
}

std::optional<Scenario> scenario_from_name(const std::string& name) {
    for (const auto& e : kScenarios) {
        if (name == e.name) return e.s;
    }
    return std::nullopt;
}

std::vector<Scenario> all_scenarios() {
    std::vector<Scenario> out;
    for (const auto& e : kScenarios) out.push_back(e.s);
    return out;
}

const std::vector<std::string>& sweep_axis_registry() {
    static const std::vector<std::string> axes = {
        "lambda",      "sta_r_max", "sta_T",        "ad_r_max",
        "ad_T",        "inv_sqrt_C", "delta_T_frac", "target_EN",
    };
    return axes;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& filename) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    bool have_scenario = false;
    int sweep_index = -1;

    auto axis = [&]() -> SweepAxis& {
        if (sweep_index < 0) {
            throw ConfigError(filename, line, "sweep key before 'axis'");
        }
        return cfg.sweep[sweep_index];
    };

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash_pos = s.find('#');
        if (hash_pos != std::string::npos) s = s.substr(0, hash_pos);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError(filename, line, "unterminated section header");
            }
            section = trim(s.substr(1, s.size() - 2));
            static const char* known[] = {"hilbert", "model", "sta",   "adiabatic",
                                          "turnoff", "bath",  "alt",   "output",
                                          "sweep"};
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                    return section == k;
                }) == std::end(known)) {
                throw ConfigError(filename, line, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(filename, line, "expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) {
            throw ConfigError(filename, line, "empty key or value");
        }

        if (section.empty()) {
            if (key == "scenario") {
                auto sc = scenario_from_name(val);
                if (!sc) {
                    throw ConfigError(filename, line, "unknown scenario '" + val + "'");
                }
                cfg.scenario = *sc;
                have_scenario = true;
            } else if (key == "output_dir") {
                cfg.output_dir = val;
            } else {
                throw ConfigError(filename, line, "unknown top-level key '" + key + "'");
            }
        } else if (section == "hilbert") {
            if (key == "fock_dim") {
                cfg.fock_dim = parse_int(filename, line, val);
            } else if (key == "frame") {
                if (val == "lab") {
                    cfg.frame = fock::Frame::Lab;
                } else if (val == "squeezed") {
                    cfg.frame = fock::Frame::Squeezed;
                } else {
                    throw ConfigError(filename, line, "frame must be lab or squeezed");
                }
            } else {
                throw ConfigError(filename, line, "unknown key '" + key + "' in [hilbert]");
            }
        } else if (section == "model") {
            if (key == "delta") cfg.delta = parse_double(filename, line, val);
            else if (key == "lambda") cfg.lambda = parse_double(filename, line, val);
            else if (key == "omega_c") cfg.omega_c = parse_double(filename, line, val);
            else if (key == "omega_q") cfg.omega_q = parse_double(filename, line, val);
            else throw ConfigError(filename, line, "unknown key '" + key + "' in [model]");
        } else if (section == "sta") {
            if (key == "r_max") cfg.sta_r_max = parse_double(filename, line, val);
            else if (key == "f0") cfg.sta_f0 = parse_double(filename, line, val);
            else if (key == "T") cfg.sta_T = parse_double(filename, line, val);
            else if (key == "eta0_re") cfg.eta0_re = parse_double(filename, line, val);
            else if (key == "eta0_im") cfg.eta0_im = parse_double(filename, line, val);
            else throw ConfigError(filename, line, "unknown key '" + key + "' in [sta]");
        } else if (section == "adiabatic") {
            if (key == "r_max") cfg.ad_r_max = parse_double(filename, line, val);
            else if (key == "f0") cfg.ad_f0 = parse_double(filename, line, val);
            else if (key == "T") cfg.ad_T = parse_double(filename, line, val);
            else throw ConfigError(filename, line, "unknown key '" + key + "' in [adiabatic]");
        } else if (section == "turnoff") {
            if (key == "omega_max") cfg.turnoff_omega_max = parse_double(filename, line, val);
            else if (key == "T_off") cfg.turnoff_T_off = parse_double(filename, line, val);
            else if (key == "orientation") {
                if (val == "decreasing") {
                    cfg.turnoff_orientation = schedules::TurnOffOrientation::Decreasing;
                } else if (val == "as_printed") {
                    cfg.turnoff_orientation = schedules::TurnOffOrientation::AsPrinted;
                } else {
                    throw ConfigError(filename, line,
                                      "orientation must be decreasing or as_printed");
                }
            } else {
                throw ConfigError(filename, line, "unknown key '" + key + "' in [turnoff]");
            }
        } else if (section == "bath") {
            if (key == "kappa") cfg.kappa = parse_double(filename, line, val);
            else if (key == "gamma") cfg.gamma = parse_double(filename, line, val);
            else if (key == "inv_sqrt_C") cfg.inv_sqrt_C = parse_double(filename, line, val);
            else if (key == "phi_e") cfg.phi_e = parse_double(filename, line, val);
            else if (key == "reservoir") {
                if (val == "compensated") cfg.reservoir_compensated = true;
                else if (val == "off") cfg.reservoir_compensated = false;
                else throw ConfigError(filename, line, "reservoir must be compensated or off");
            } else {
                throw ConfigError(filename, line, "unknown key '" + key + "' in [bath]");
            }
        } else if (section == "alt") {
            if (key == "omega_ratio") cfg.alt_omega_ratio = parse_double(filename, line, val);
            else if (key == "tf_lambda") cfg.alt_tf_lambda = parse_double(filename, line, val);
            else if (key == "round_two_pi") cfg.alt_round_two_pi = parse_bool(filename, line, val);
            else throw ConfigError(filename, line, "unknown key '" + key + "' in [alt]");
        } else if (section == "output") {
            if (key == "samples") cfg.n_samples = parse_int(filename, line, val);
            else if (key == "tol") cfg.tol = parse_double(filename, line, val);
            else throw ConfigError(filename, line, "unknown key '" + key + "' in [output]");
        } else if (section == "sweep") {
            if (key == "axis") {
                cfg.sweep.push_back(SweepAxis{val, 0.0, 0.0, 0});
                sweep_index = static_cast<int>(cfg.sweep.size()) - 1;
            } else if (key == "min") {
                axis().min = parse_double(filename, line, val);
            } else if (key == "max") {
                axis().max = parse_double(filename, line, val);
            } else if (key == "count") {
                axis().count = parse_int(filename, line, val);
            } else {
                throw ConfigError(filename, line, "unknown key '" + key + "' in [sweep]");
            }
        }
    }

    if (!have_scenario) {
        throw ConfigError(filename, 0, "missing required top-level key 'scenario'");
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.fock_dim < 0 || (cfg.fock_dim > 0 && cfg.fock_dim < 2)) {
        throw ConfigError("fock_dim must be 0 (auto) or >= 2");
    }
    if (cfg.delta <= 0.0) throw ConfigError("delta must be positive");
    if (cfg.lambda < 0.0 || cfg.lambda >= cfg.delta) {
        throw ConfigError("lambda must satisfy 0 <= lambda < delta");
    }
    if (cfg.kappa < 0.0 || cfg.gamma < 0.0 || cfg.inv_sqrt_C < 0.0) {
        throw ConfigError("decay rates must be nonnegative");
    }
    if (cfg.n_samples < 2) throw ConfigError("samples must be >= 2");
    if (cfg.tol < 1e-12 || cfg.tol > 1e-5) {
        throw ConfigError("tol must lie in [1e-12, 1e-5]");
    }
    if (cfg.sta_T <= 0.0 || cfg.ad_T <= 0.0 || cfg.turnoff_T_off <= 0.0) {
        throw ConfigError("all durations must be positive");
    }
    if (cfg.turnoff_omega_max < 0.0 || cfg.turnoff_omega_max >= cfg.delta) {
        throw ConfigError("turnoff omega_max must satisfy 0 <= omega_max < delta");
    }
    const auto& registry = sweep_axis_registry();
    for (const auto& ax : cfg.sweep) {
        if (std::find(registry.begin(), registry.end(), ax.name) == registry.end()) {
            std::string names;
            for (const auto& n : registry) names += n + " ";
            throw ConfigError("unknown sweep axis '" + ax.name + "'; known axes: " + names);
        }
        if (ax.count < 2) {
            throw ConfigError("sweep axis '" + ax.name + "' needs count >= 2");
        }
        if (!(ax.max > ax.min)) {
            throw ConfigError("sweep axis '" + ax.name + "' needs max > min");
        }
    }
    if (cfg.sweep.size() > 2) {
        throw ConfigError("at most two sweep axes are supported");
    }
}

std::string ScenarioConfig::canonical_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "scenario=" << scenario_name(scenario) << "\n";
    os << "fock_dim=" << fock_dim << " frame=" << (frame == fock::Frame::Lab ? "lab" : "squeezed") << "\n";
    os << "delta=" << delta << " lambda=" << lambda << " omega_c=" << omega_c
       << " omega_q=" << omega_q << "\n";
    os << "sta=" << sta_r_max << "," << sta_f0 << "," << sta_T << "," << eta0_re
       << "," << eta0_im << "\n";
    os << "adiabatic=" << ad_r_max << "," << ad_f0 << "," << ad_T << "\n";
    os << "turnoff=" << turnoff_omega_max << "," << turnoff_T_off << ","
       << (turnoff_orientation == schedules::TurnOffOrientation::Decreasing ? "dec" : "printed")
       << "\n";
    os << "bath=" << kappa << "," << gamma << "," << inv_sqrt_C << ","
       << (reservoir_compensated ? "comp" : "off") << "," << phi_e << "\n";
    os << "alt=" << alt_omega_ratio << "," << alt_tf_lambda << "," << alt_round_two_pi << "\n";
    os << "output=" << n_samples << "," << tol << "\n";
    for (const auto& ax : sweep) {
        os << "axis=" << ax.name << "," << ax.min << "," << ax.max << "," << ax.count << "\n";
    }
    return os.str();
}

std::uint64_t ScenarioConfig::hash() const {
    // FNV-1a over the canonical text.
    const std::string text = canonical_text();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace sta::experiments
