#pragma once

// Experiment configuration: flat `key = value` text or JSON with namespaced keys
// (model.N, grid.M, evolve.dt, ...). Everything is validated before any compute.

#include "hartree/diagnostics.hpp"
#include "hartree/evolution.hpp"
#include "hartree/ground_state.hpp"
#include "hartree/model.hpp"
#include "hartree/radial_domain.hpp"
#include "hartree/riesz.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hartree::app {

/// Malformed or inconsistent configuration; maps to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InitialData {
    double amplitude = 1.0;
    double width = 1.0;  ///< u₀ = amplitude · e^{−(r/width)²}
};

struct ScanConfig {
    std::vector<double> lambdas{0.0, 2.0, 4.0, 6.0, 7.0};
    bool confirm = true;  ///< rerun blow-up candidates at 2× resolution
};

struct MorawetzConfig {
    bool both_signs = true;
    double tolerance_ratio = 3.0;  ///< required residual reduction per (dt, h) halving
};

struct ConvergenceConfig {
    int levels = 3;
    double min_order = 1.5;
};

struct ExperimentConfig {
    std::string experiment;
    ModelParams model{5, Number(2), Number(3), -1, false};
    GridSpec grid{5, 12.0, 1024, Grading::uniform, 3.0};
    SolverOptions solver;
    EvolutionConfig evolve;
    KernelOptions kernel;
    InitialData init;
    ScanConfig scan;
    MorawetzConfig morawetz;
    ConvergenceConfig convergence;
    TrajectoryOptions diagnostics;
    std::string out_dir = "out";
    std::string kernel_cache;
    unsigned seed = 1;
    unsigned threads = 0;
};

/// Parses text; JSON when the first non-blank character is '{'.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Applies one key; throws ConfigError on unknown keys or bad values.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Throws ConfigError / DomainError when the configuration cannot run.
void validate_config(const ExperimentConfig& cfg);

std::vector<std::string> known_keys();

}  // namespace hartree::app
