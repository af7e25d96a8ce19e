#pragma once

// Scalar functionals of a field and of a trajectory: virial, Morawetz action
// and rate, decay and scattering indicators, the cut-off coercivity check.

#include "hartree/evolution.hpp"
#include "hartree/ground_state.hpp"
#include "hartree/model.hpp"
#include "hartree/radial_domain.hpp"
#include "hartree/riesz.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hartree {

/// ‖Δu‖² − (B/2p)∫(I_α∗|u|^p)|u|^p.
double virial_K(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel, const Field& u);

/// ψ = 1 on [0, 1/2], 0 on [1, ∞), quintic smoothstep in between; ψ_R(r) = ψ(r/R).
double cutoff(double s);
RealField cutoff_profile(const RadialGrid& grid, double R);

/// f = s²/2 on [0, 1/2]; f'' = 1 − S(2s−1) on [1/2, 1] with the C⁴ nonic smoothstep S;
/// linear with slope 3/4 beyond 1. Returns f^{(k)}(s), k ≤ 8.
double virial_profile(double s, int k);

struct RadialWeight {
    enum class Kind { abs_x, f_R };
    Kind kind = Kind::abs_x;
    double R = 1.0;  ///< f_R(r) = R² f(r/R)

    static RadialWeight abs_x() { return {Kind::abs_x, 1.0}; }
    static RadialWeight virial(double R) { return {Kind::f_R, R}; }
};

/// Quadrature-ready coefficients of a weight a(r): `a1` holds a'(r_i); every
/// other entry is ∫_{cell i} g dx for the named radial function g.
struct WeightCoefficients {
    std::vector<double> a1;
    std::vector<double> c_a1, c_a2, c_a1_r3, c_lap, c_lap_dd, c_bilap, c_trilap;
    /// Coefficient C of a point mass C·δ₀ in Δ³a (a = |x| in N = 5), else 0.
    double origin_atom = 0;
};

WeightCoefficients weight_coefficients(const RadialGrid& grid, const RadialWeight& weight);

/// Taylor jets at r of a, Δa, (Δa)'', Δ²a, Δ³a for the given weight.
struct WeightJet {
    double a1, a2, lap, lap_dd, bilap, trilap;
};
WeightJet weight_jet(int N, const RadialWeight& weight, double r);

/// 2∫ a'(r) Im(u_r ū) dx.
double morawetz_action(const RadialGrid& grid, const Field& u, const RadialWeight& weight);
double morawetz_action(const RadialGrid& grid, const Field& u, const WeightCoefficients& coeffs);

struct MorawetzRate {
    double rate = 0;       ///< linear + nonlinear, origin atom excluded
    double linear = 0;
    double nonlinear = 0;
    double origin_atom = 0;  ///< −(C/2)|u(0)|², u(0) extrapolated in r²; reported, never added
};

MorawetzRate morawetz_rate(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel,
                           const Field& u, const WeightCoefficients& coeffs);
MorawetzRate morawetz_rate(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel,
                           const Field& u, const RadialWeight& weight);

/// ∫ |x|^{−1}(I_α∗|u|^p)|u|^p.
double morawetz_integrand(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel,
                          const Field& u);

struct PositivityReport {
    double value = 0;
    double scale = 0;  ///< ∫∫ of the absolute integrand
    bool nonnegative = true;
};

/// Double radial integral ½∫∫ I_α(x−z)|x−z|^{−2}|u(z)|^p|u(x)|^p (x−z)·(x/|x| − z/|z|).
PositivityReport symmetrized_positivity(const ModelParams& params, const RadialGrid& grid, const Field& u,
                                        int angular_points = 16);

struct CoercivityReport {
    double lhs = 0;     ///< K[ψ_R u]
    double rhs = 0;     ///< δ'‖ψ_R u‖²_{2Np/(N+α)}
    double margin = 0;
    double delta = 0;   ///< 1 − MG[ψ_R u]
    double delta_prime = 0;
    double cutoff_commutator = 0;  ///< ‖Δ(ψ_R u)‖² − ‖ψ_R Δu‖²
};

CoercivityReport coercivity_gap(const ModelParams& params, const RadialGrid& grid, const RieszKernel& kernel,
                                const Field& u, double R, const GroundState& gs);

struct VirialFit {
    double integral = 0;
    double exponent = 0;
    double C = 0;
    std::vector<double> T_values, integrals;
    bool sufficient = true;
    std::string note;
};

/// ∫₀^T g(t) dt on nested T/8, T/4, T/2, T and a log–log slope fit.
VirialFit truncated_virial_report(const std::vector<double>& t, const std::vector<double>& g, double T);

struct EvacuationReport {
    double ball_mass = 0;
    double holder_bound = 0;  ///< |B_R|^{1−2/r}‖u‖²_r, r = 2Np/(N+α)
    bool holds = true;
};

EvacuationReport evacuation_mass(const ModelParams& params, const RadialGrid& grid, const Field& u, double R);

/// v(t) = e^{−itΔ²}u(t).
Field scattering_profile(const Propagator& prop, const Field& u, double t);
/// ‖v_i − v_j‖_{H²}.
double cauchy_defect(const RadialGrid& grid, const Field& vi, const Field& vj);

struct MixedNorm {
    double value = 0;
    bool sparse = false;
};

/// (∫ g(t)^q dt)^{1/q} by trapezoids; q = ∞ gives sup g.
MixedNorm mixed_norm(const std::vector<double>& t, const std::vector<double>& g, double q);

/// Rejects r outside (2, 2N/(N−4)).
void check_decay_exponent(int N, double r);
DiagnosticHook lebesgue_hook(const RadialGrid& grid, double r, const std::string& name);

struct TrajectoryOptions {
    double R_report = 2.0;
    RadialWeight weight = RadialWeight::abs_x();
};

/// Hooks producing K, M_action, morawetz_cum, L^{2+4/N} and L^{2Np/(N+α)} norms,
/// ball_mass(R_report) and cauchy_defect between consecutive rows.
std::vector<DiagnosticHook> trajectory_hooks(const ModelParams& params, const RadialGrid& grid,
                                             const RieszKernel& kernel, const Propagator& prop,
                                             const TrajectoryOptions& opts = {});

/// u_λ(x) = λ^{(4+α)/(2(p−1))} u(λx), sampled on the grid.
Field scaled_sample(const ModelParams& params, const RadialGrid& grid, const std::function<Complex(double)>& u,
                    double lambda);

/// Quadratic extrapolation in r² of u to the origin.
Complex origin_value(const RadialGrid& grid, const Field& u);

}  // namespace hartree
