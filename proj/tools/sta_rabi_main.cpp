#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sta/errors.hpp"
#include "sta/experiments.hpp"

namespace {

using namespace sta;
using experiments::EmitFormat;
using experiments::ResultTable;
using experiments::ScenarioConfig;

struct GlobalFlags {
    int fock_dim = -1;
    double tol = -1.0;
    std::string out;
    int workers = 1;
};

ScenarioConfig load(const std::string& path, const GlobalFlags& flags) {
    ScenarioConfig cfg = experiments::parse_config_file(path);
    if (flags.fock_dim >= 0) cfg.fock_dim = flags.fock_dim;
    if (flags.tol > 0.0) cfg.tol = flags.tol;
    if (!flags.out.empty()) cfg.output_dir = flags.out;
    if (const char* env = std::getenv("STA_RABI_OUT")) cfg.output_dir = env;
    experiments::validate_config(cfg);
    return cfg;
}

void emit_all(const ResultTable& table, const ScenarioConfig& cfg) {
    auto files = experiments::emit(table, cfg, EmitFormat::CSV, cfg.output_dir);
    auto more = experiments::emit(table, cfg, EmitFormat::JSON, cfg.output_dir);
    files.insert(files.end(), more.begin(), more.end());
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    const auto conv = table.metadata.find("convergence_status");
    if (conv != table.metadata.end()) {
        std::cout << "convergence: " << conv->second << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parametrically driven JC simulator: entangled-cat state "
                 "preparation, schedules, and open-system dynamics"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--fock-dim", flags.fock_dim,
                   "override Fock truncation (0 = auto-size)");
    app.add_option("--tol", flags.tol, "override integrator tolerance");
    app.add_option("--out", flags.out, "override output directory");

    std::string config_path;

    auto* run = app.add_subcommand("run", "run a scenario from a config file");
    run->add_option("config", config_path, "config file")->required();

    auto* sweep = app.add_subcommand("sweep", "run a scenario grid in parallel");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--workers", flags.workers, "worker pool size")
        ->default_val(1);

    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("config", config_path, "config file")->required();

    app.add_subcommand("list-scenarios", "print the available scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-scenarios")) {
            for (auto s : experiments::all_scenarios()) {
                std::cout << experiments::scenario_name(s) << "\n";
            }
            return 0;
        }
        if (app.got_subcommand("validate")) {
            load(config_path, flags);
            std::cout << "ok\n";
            return 0;
        }
        if (app.got_subcommand("run")) {
            const ScenarioConfig cfg = load(config_path, flags);
            emit_all(experiments::run_scenario(cfg), cfg);
            return 0;
        }
        if (app.got_subcommand("sweep")) {
            const ScenarioConfig cfg = load(config_path, flags);
            emit_all(experiments::sweep(cfg, flags.workers), cfg);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SimError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
