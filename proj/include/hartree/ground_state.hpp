#pragma once

// Ground states of φ + Δ²φ = (I_α∗|φ|^p)|φ|^{p−2}φ by Petviashvili iteration,
// with the Pohozaev certification, the sharp Gagliardo–Nirenberg constant and
// the threshold ratios ME, MG.

#include "hartree/model.hpp"
#include "hartree/radial_domain.hpp"
#include "hartree/riesz.hpp"
#include "hartree/spectral.hpp"

#include <optional>
#include <stdexcept>

namespace hartree {

struct SolverOptions {
    double tol = 1e-10;             ///< on ‖φ_{n+1}−φ_n‖_{H²}/‖φ_n‖_{H²} and |S_n − 1|
    int max_iter = 500;
    double residual_cert = 1e-6;
    double pohozaev_cert = 1e-5;
};

class SolverError : public std::runtime_error {
public:
    enum class Kind { no_convergence, collapse, nan };
    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    Kind kind;
};

struct GroundState {
    RealField phi;
    double mass = 0;        ///< ‖φ‖²
    double energy = 0;      ///< ‖Δφ‖² − (1/p)∫(I_α∗|φ|^p)|φ|^p
    double delta_norm = 0;  ///< ‖Δφ‖
    double potential_energy = 0;
    double sharp_C = 0;
    double action_m = 0;    ///< S[φ] = M[φ] + E[φ]
    double residual = 0;    ///< ‖φ + Δ²φ − N(φ)‖ / ‖φ‖_{H²}
    double stabilizer = 0;  ///< final S_n
    int iterations = 0;
    int sign_changes = 0;
    bool core_decreasing = false;  ///< strictly decreasing up to the first zero crossing
};

struct PohozaevResiduals {
    double res_K = 0;   ///< |K[u]| / ‖Δu‖²
    double res_EB = 0;  ///< |E − (B−2)/B ‖Δu‖²| / |E|
    double res_EA = 0;  ///< |E − (B−2)/A ‖u‖²| / |E|
    double ratio_E_D2 = 0;  ///< E/‖Δu‖²
};

struct Thresholds {
    std::optional<double> ME;  ///< empty when E[u] < 0 and s_c is not an integer
    double MG = 0;
};

/// Gaussian initial guess e^{−r²}.
RealField default_initial_guess(const RadialGrid& grid);

GroundState petviashvili_solve(const ModelParams& params, const SpectralBasis& basis, const RieszKernel& kernel,
                               const RealField& init, const SolverOptions& opts = {});

PohozaevResiduals pohozaev_residuals(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel,
                                     const Field& u);
PohozaevResiduals pohozaev_residuals(const ModelParams& params, const GroundState& gs);

/// True when the residual and the three Pohozaev residuals are within the certification thresholds.
bool certified(const ModelParams& params, const GroundState& gs, const SolverOptions& opts = {});

/// ‖u‖^A ‖Δu‖^B / ∫(I_α∗|u|^p)|u|^p.
double weinstein_J(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel, const Field& u);

/// (2p/A)(A/B)^{B/2} ‖φ‖^{−2(p−1)}.
double sharp_constant(const ModelParams& params, double ground_state_mass);

/// Focusing energy ‖Δu‖² − (1/p)∫(I_α∗|u|^p)|u|^p.
double focusing_energy(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel, const Field& u);

Thresholds thresholds(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel, const Field& u,
                      const GroundState& gs);

}  // namespace hartree
