#include "hartree/ground_state.hpp"

#include <cmath>
#include <limits>

namespace hartree {

namespace {

struct Spectral {
    RealField c, n;  // coefficients of φ and of N(φ)
    double potential = 0;
};

// The coefficients c are authoritative: φ is synthesized from them and never
// transformed back, since the round trip leaves roundoff of size ε·λ_max² in
// (1+λ²)c.
Spectral spectral_state(const ModelParams& prm, const SpectralBasis& basis, const RieszKernel& kernel, RealField c,
                        RealField& phi) {
    const double p = prm.p.value();
    const RadialGrid& g = basis.grid();
    phi = basis.backward(c);
    RealField f(phi.size()), nl(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) f[i] = std::pow(std::abs(phi[i]), p);
    RealField V = kernel.apply(f);
    Spectral s;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double a = std::abs(phi[i]);
        nl[i] = a > 0 ? V[i] * std::pow(a, p - 2) * phi[i] : 0.0;
        s.potential += g.w[i] * V[i] * f[i];
    }
    s.c = std::move(c);
    s.n = basis.forward(nl);
    return s;
}

}  // namespace

RealField default_initial_guess(const RadialGrid& grid) {
    return sample(grid, [](double r) { return std::exp(-r * r); });
}

GroundState petviashvili_solve(const ModelParams& prm, const SpectralBasis& basis, const RieszKernel& kernel,
                               const RealField& init, const SolverOptions& opts) {
    validate(prm);
    if (prm.epsilon != -1) throw DomainError("ground states need the focusing sign ε = −1");
    if (init.size() != basis.size()) throw std::invalid_argument("initial guess size does not match grid");
    const double p = prm.p.value();
    const double gamma = (2 * p - 1) / (2 * p - 2);
    const std::vector<double>& lam = basis.lambda();
    const std::size_t n = lam.size();

    RealField phi;
    RealField c = basis.forward(init);
    double S = 0;
    int it = 0;
    bool converged = false;
    for (it = 1; it <= opts.max_iter; ++it) {
        Spectral st = spectral_state(prm, basis, kernel, c, phi);
        double num = 0, den = 0;
        for (std::size_t k = 0; k < n; ++k) {
            num += (1 + lam[k] * lam[k]) * st.c[k] * st.c[k];
            den += st.n[k] * st.c[k];
        }
        if (!std::isfinite(num) || !std::isfinite(den)) throw SolverError(SolverError::Kind::nan, "NaN in iterate");
        if (num <= std::numeric_limits<double>::min() || den <= 0)
            throw SolverError(SolverError::Kind::collapse, "iterate collapsed to zero");
        S = num / den;
        double scale = std::pow(S, gamma);
        RealField cnew(n);
        double diff = 0;
        for (std::size_t k = 0; k < n; ++k) {
            double m = 1 + lam[k] * lam[k];
            cnew[k] = scale * st.n[k] / m;
            diff += m * (cnew[k] - st.c[k]) * (cnew[k] - st.c[k]);
        }
        diff = std::sqrt(diff / num);
        c = std::move(cnew);
        if (!std::isfinite(diff)) throw SolverError(SolverError::Kind::nan, "NaN in iterate");
        if (diff < opts.tol && std::abs(S - 1) < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError(SolverError::Kind::no_convergence,
                          "Petviashvili iteration did not converge in " + std::to_string(opts.max_iter) + " steps");

    GroundState gs;
    gs.iterations = it;
    Spectral st = spectral_state(prm, basis, kernel, c, phi);
    gs.phi = phi;
    double m2 = 0, d2 = 0, res = 0, den = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double mk = 1 + lam[k] * lam[k];
        m2 += st.c[k] * st.c[k];
        d2 += lam[k] * lam[k] * st.c[k] * st.c[k];
        double rk = mk * st.c[k] - st.n[k];
        res += rk * rk;
        den += st.n[k] * st.c[k];
    }
    gs.mass = m2;
    gs.delta_norm = std::sqrt(d2);
    gs.potential_energy = st.potential;
    gs.energy = d2 - st.potential / p;
    gs.action_m = gs.mass + gs.energy;
    gs.residual = std::sqrt(res) / std::sqrt(m2 + d2);
    gs.stabilizer = (m2 + d2) / den;
    gs.sharp_C = sharp_constant(prm, gs.mass);

    // Count zero crossings and check the core decreases up to the first one.
    int changes = 0;
    bool dec = true;
    for (std::size_t i = 1; i < n; ++i) {
        if ((phi[i] < 0) != (phi[i - 1] < 0)) ++changes;
        if (changes == 0 && !(phi[i] < phi[i - 1])) dec = false;
    }
    gs.sign_changes = changes;
    gs.core_decreasing = dec && phi[0] > 0;
    return gs;
}

double focusing_energy(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u) {
    double p = prm.p.value();
    double d2 = mass(grid, laplacian(grid, u));
    return d2 - hartree_energy(kernel, u, p) / p;
}

PohozaevResiduals pohozaev_residuals(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel,
                                     const Field& u) {
    DerivedExponents d = derive_exponents(prm);
    const double p = prm.p.value(), A = d.A.value(), B = d.B.value();
    double m = mass(grid, u);
    double d2 = mass(grid, laplacian(grid, u));
    double P = hartree_energy(kernel, u, p);
    double E = d2 - P / p;
    PohozaevResiduals r;
    r.res_K = std::abs(d2 - B / (2 * p) * P) / d2;
    r.res_EB = std::abs(E - (B - 2) / B * d2) / std::abs(E);
    r.res_EA = std::abs(E - (B - 2) / A * m) / std::abs(E);
    r.ratio_E_D2 = E / d2;
    return r;
}

PohozaevResiduals pohozaev_residuals(const ModelParams& prm, const GroundState& gs) {
    DerivedExponents d = derive_exponents(prm);
    const double p = prm.p.value(), A = d.A.value(), B = d.B.value();
    const double d2 = gs.delta_norm * gs.delta_norm;
    const double E = gs.energy;
    PohozaevResiduals r;
    r.res_K = std::abs(d2 - B / (2 * p) * gs.potential_energy) / d2;
    r.res_EB = std::abs(E - (B - 2) / B * d2) / std::abs(E);
    r.res_EA = std::abs(E - (B - 2) / A * gs.mass) / std::abs(E);
    r.ratio_E_D2 = E / d2;
    return r;
}

bool certified(const ModelParams& prm, const GroundState& gs, const SolverOptions& opts) {
    PohozaevResiduals r = pohozaev_residuals(prm, gs);
    return gs.residual <= opts.residual_cert && r.res_K <= opts.pohozaev_cert && r.res_EB <= opts.pohozaev_cert &&
           r.res_EA <= opts.pohozaev_cert;
}

double weinstein_J(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u) {
    DerivedExponents d = derive_exponents(prm);
    double P = hartree_energy(kernel, u, prm.p.value());
    if (!(P > 0)) throw std::domain_error("Weinstein functional needs a nonzero denominator");
    double nu = std::sqrt(mass(grid, u));
    double nd = laplacian_norm(grid, u);
    return std::pow(nu, d.A.value()) * std::pow(nd, d.B.value()) / P;
}

double sharp_constant(const ModelParams& prm, double gs_mass) {
    DerivedExponents d = derive_exponents(prm);
    const double p = prm.p.value(), A = d.A.value(), B = d.B.value();
    return (2 * p / A) * std::pow(A / B, 0.5 * B) * std::pow(std::sqrt(gs_mass), -2 * (p - 1));
}

Thresholds thresholds(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u,
                      const GroundState& gs) {
    DerivedExponents d = derive_exponents(prm);
    const double sc = d.s_c.value();
    double m = mass(grid, u);
    double dn = laplacian_norm(grid, u);
    Thresholds t;
    t.MG = std::pow(dn, sc) * std::pow(std::sqrt(m), 2 - sc) /
           (std::pow(gs.delta_norm, sc) * std::pow(std::sqrt(gs.mass), 2 - sc));
    double E = focusing_energy(prm, grid, kernel, u);
    bool integer_sc = d.s_c.is_exact() && d.s_c.exact()->denominator() == 1;
    if (E >= 0) {
        t.ME = std::pow(E, sc) * std::pow(m, 2 - sc) / (std::pow(gs.energy, sc) * std::pow(gs.mass, 2 - sc));
    } else if (integer_sc) {
        t.ME = std::pow(E, sc) * std::pow(m, 2 - sc) / (std::pow(gs.energy, sc) * std::pow(gs.mass, 2 - sc));
    }
    return t;
}

}  // namespace hartree
