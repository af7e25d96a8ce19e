#pragma once

// Time integration: exact linear propagator e^{itΔ²} from the eigenbasis of the
// discrete Laplacian, Strang splitting with the exact nonlinear phase.

#include "hartree/model.hpp"
#include "hartree/radial_domain.hpp"
#include "hartree/riesz.hpp"
#include "hartree/spectral.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hartree {

struct Propagator {
    std::shared_ptr<const SpectralBasis> basis;
    const RadialGrid& grid() const { return basis->grid(); }
};

Propagator build_propagator(const RadialGrid& grid);
Propagator build_propagator(std::shared_ptr<const SpectralBasis> basis);

/// e^{itΔ²}u.
Field free_evolve(const Propagator& prop, const Field& u, double t);

enum class Termination { completed, blowup_detected, boundary_contaminated, nan };
std::string to_string(Termination t);

struct EvolutionConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    int snapshot_stride = 10;         ///< steps between diagnostic rows
    double blowup_factor = 5.0;       ///< stop once ‖Δu‖ > factor·‖Δu(0)‖
    double boundary_mass_cap = 1e-4;  ///< fraction of M(0) allowed near the wall
    bool sponge = false;
    double sponge_strength = 1000.0;  ///< σ₀ in σ(r) = σ₀ ((r−r_s)/(r_max−r_s))²
    double sponge_fraction = 0.15;    ///< outer part of the grid carrying the sponge
    bool adaptive_dt = true;          ///< halve dt on energy drift; inactive while the sponge is on
    double energy_drift_cap = 1e-3;   ///< allowed |ΔE|/(max(|E₀|,‖Δu₀‖²)·Δt) per stride
    double min_dt = 1e-7;
    bool nonlinear = true;            ///< false: V forced to zero
    std::vector<double> snapshot_times;  ///< fields stored at the first rows with t ≥ each entry
};

/// Field plus the nonlinear multiplier V|u|^{p−2} for the current |u|.
struct StepState {
    Field u;
    RealField multiplier;
};

/// Extra diagnostic columns evaluated on every recorded row.
struct DiagnosticHook {
    std::vector<std::string> names;
    std::function<std::vector<double>(double t, const Field& u)> eval;
};

struct TrajectoryRecord {
    std::vector<std::string> columns;           ///< starts with t, mass, energy, delta_norm
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<double, Field>> snapshots;
    Termination cause = Termination::completed;
    std::string message;
    Field final_state;
    double final_time = 0;
    double final_dt = 0;
    int dt_halvings = 0;
    long steps = 0;

    /// Column by name; throws if absent.
    std::vector<double> series(const std::string& name) const;
};

RealField nonlinear_multiplier(const ModelParams& params, const RieszKernel& kernel, const Field& u);
StepState make_state(const ModelParams& params, const RieszKernel& kernel, const Field& u, bool nonlinear = true);

/// One Strang step; dt may be negative. `damping` (may be empty) is applied after the linear substep.
void strang_step(StepState& state, double dt, const ModelParams& params, const RieszKernel& kernel,
                 const Propagator& prop, bool nonlinear = true, const RealField& damping = {});

/// Energy with the sign of params.epsilon.
double energy(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel, const Field& u);

RealField sponge_profile(const RadialGrid& grid, const EvolutionConfig& cfg);

TrajectoryRecord evolve(const Field& u0, const ModelParams& params, const RieszKernel& kernel, const Propagator& prop,
                        const EvolutionConfig& cfg, const std::vector<DiagnosticHook>& hooks = {});

/// RFC-4180 CSV of all rows.
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

}  // namespace hartree
