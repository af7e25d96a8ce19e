// hartree-lab: command-line front end for the radial Hartree laboratory.

#include "hartree/app/config.hpp"
#include "hartree/app/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace hartree::app;
    CLI::App app{"Radial numerical laboratory for the fourth-order Hartree equation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, kernel_cache;
    unsigned threads = 0;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key=value or JSON configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads for kernel assembly and scans");
    app.add_option("--kernel-cache", kernel_cache, "directory for cached kernel matrices");
    app.add_option("--set", overrides, "override a configuration key, e.g. --set grid.M=2048")->take_all();
    app.fallthrough();

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"exponents", "derived exponents and Strichartz pairs"},
        {"ground-state", "Petviashvili ground state with certification"},
        {"evolve", "time evolution with trajectory diagnostics"},
        {"dichotomy-scan", "amplitude scan classifying scattering against blow-up"},
        {"morawetz-check", "Morawetz identity under (dt, h) refinement"},
        {"convergence", "refinement ladders with fitted orders"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid_params;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            set_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
    } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return exit_invalid_params;
    }
    cfg.experiment = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!kernel_cache.empty()) cfg.kernel_cache = kernel_cache;
    if (threads > 0) cfg.threads = threads;
    return run_experiment(cfg, std::cerr);
}
