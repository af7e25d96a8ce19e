#pragma once

// Experiment drivers behind the hartree-lab subcommands. Each returns a process
// exit code and writes its artifacts below cfg.out_dir.

#include "hartree/app/config.hpp"
#include "hartree/app/output.hpp"
#include "hartree/diagnostics.hpp"
#include "hartree/evolution.hpp"
#include "hartree/ground_state.hpp"
#include "hartree/spectral.hpp"

#include <functional>
#include <iosfwd>
#include <memory>

namespace hartree::app {

enum ExitCode : int {
    exit_ok = 0,
    exit_runtime_error = 1,
    exit_invalid_params = 2,
    exit_no_convergence = 3,
    exit_certification_failed = 4,
    exit_morawetz_failed = 5,
    exit_order_failed = 6,
};

/// Grid, kernel and eigenbasis for one resolution; shared read-only by workers.
struct Workspace {
    std::shared_ptr<const SpectralBasis> basis;
    std::shared_ptr<const RieszKernel> kernel;
    Propagator prop;

    const RadialGrid& grid() const { return basis->grid(); }
};

Workspace make_workspace(const ModelParams& model, const GridSpec& grid, const KernelOptions& kernel,
                         const std::string& cache_dir);

/// u₀ = amplitude · e^{−(r/width)²}.
Field initial_data(const RadialGrid& grid, const InitialData& init);

/// Morawetz identity sweep at one resolution: M(t) sampled every step,
/// dM/dt by centred differences, compared with the rate formula.
struct IdentityRun {
    int M = 0;
    double dt = 0;
    int epsilon = 0;
    std::vector<double> t, dMdt, rate, residual;
    double max_residual = 0;
    double rate_scale = 0;
    double max_outer_fraction = 0;  ///< mass fraction beyond 0.8 r_max along the run
    double morawetz_cum = 0;        ///< ∫₀^T ∫|x|^{−1}(I_α∗|u|^p)|u|^p
    double origin_atom0 = 0;        ///< δ₀ contribution at t = 0 (N = 5, a = |x|), not in the rate
};

IdentityRun morawetz_identity_run(const ModelParams& model, const Workspace& ws, const Field& u0, double dt,
                                  double t_end, const RadialWeight& weight);

/// Least-squares slope of log(error) against log(1/step) over a ladder.
double fitted_order(const std::vector<double>& steps, const std::vector<double>& errors);

/// Classification of one dichotomy-scan point.
struct ScanPoint {
    double lambda = 0;
    double MG0 = 0;
    std::optional<double> ME0;
    double sup_MG = 0;
    double max_growth = 0;  ///< max_t ‖Δu(t)‖ / ‖Δu(0)‖
    Termination cause = Termination::completed;
    double final_time = 0;
    bool defect_decreasing = false;
    bool confirmed = false;  ///< blow-up reproduced at 2× resolution
    std::string classification;
};

/// `fine` supplies the 2×-resolution workspace used to confirm blow-up; it may return null.
ScanPoint classify_scan_point(const ExperimentConfig& cfg, const Workspace& ws, const GroundState& gs, double lambda,
                              const std::function<const Workspace*()>& fine);

int run_exponents(const ExperimentConfig& cfg, std::ostream& log);
int run_ground_state(const ExperimentConfig& cfg, std::ostream& log);
int run_evolve(const ExperimentConfig& cfg, std::ostream& log);
int run_dichotomy_scan(const ExperimentConfig& cfg, std::ostream& log);
int run_morawetz_check(const ExperimentConfig& cfg, std::ostream& log);
int run_convergence(const ExperimentConfig& cfg, std::ostream& log);

/// Validates, dispatches on cfg.experiment and maps exceptions to exit codes.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace hartree::app
