#include "hartree/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace hartree {

double virial_K(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u) {
    DerivedExponents d = derive_exponents(prm);
    const double p = prm.p.value();
    return mass(grid, laplacian(grid, u)) - d.B.value() / (2 * p) * hartree_energy(kernel, u, p);
}

double cutoff(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    double x = 2 * s - 1;
    return 1.0 - x * x * x * (10 + x * (-15 + 6 * x));
}

RealField cutoff_profile(const RadialGrid& grid, double R) {
    if (!(R > 0)) throw std::invalid_argument("cutoff radius must be positive");
    return sample(grid, [R](double r) { return cutoff(r / R); });
}

namespace {

using Poly = std::vector<double>;  // coefficients in ascending powers

double poly_eval(const Poly& p, double x) {
    double s = 0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + p[k];
    return s;
}

Poly poly_deriv(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = k * p[k];
    return d;
}

Poly poly_integral(const Poly& p, double c0) {
    Poly q(p.size() + 1);
    q[0] = c0;
    for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] = p[k] / (k + 1);
    return q;
}

// Transition piece of the virial profile in x = 2s − 1 ∈ [0, 1].
struct Transition {
    Poly f0, f1, f2;  // f, f', f'' as functions of x
    double f_at_1 = 0;
    Transition() {
        // f'' = 1 − S(x), S(x) = 126x⁵ − 420x⁶ + 540x⁷ − 315x⁸ + 70x⁹.
        f2 = {1, 0, 0, 0, 0, -126, 420, -540, 315, -70};
        // ds = dx/2, so integrating in s halves each antiderivative in x.
        Poly i1 = poly_integral(f2, 0.0);
        for (double& c : i1) c *= 0.5;
        i1[0] = 0.5;
        f1 = i1;
        Poly i0 = poly_integral(f1, 0.0);
        for (double& c : i0) c *= 0.5;
        i0[0] = 0.125;
        f0 = i0;
        f_at_1 = poly_eval(f0, 1.0);
    }
};

const Transition& transition() {
    static const Transition t;
    return t;
}

// Truncated Taylor jets in (r − r0).
using Jet = std::vector<double>;

Jet jet_deriv(const Jet& j) {
    Jet d(j.size() > 1 ? j.size() - 1 : 1, 0.0);
    for (std::size_t k = 1; k < j.size(); ++k) d[k - 1] = k * j[k];
    return d;
}

Jet jet_lap(const Jet& j, int N, double r0) {
    Jet d1 = jet_deriv(j);
    Jet d2 = jet_deriv(d1);
    Jet out(d2.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = d2[k];
        // (N−1) · (1/r) · d1, with 1/r = Σ (−1)^m (r−r0)^m / r0^{m+1}.
        double acc = 0;
        for (std::size_t m = 0; m <= k; ++m) {
            double inv = ((m % 2) ? -1.0 : 1.0) / std::pow(r0, static_cast<double>(m + 1));
            acc += inv * d1[k - m];
        }
        out[k] = s + (N - 1) * acc;
    }
    return out;
}

}  // namespace

double virial_profile(double s, int k) {
    if (k < 0 || k > 8) throw std::invalid_argument("virial profile derivative order must be in [0, 8]");
    if (s <= 0.5) {
        if (k == 0) return 0.5 * s * s;
        if (k == 1) return s;
        if (k == 2) return 1.0;
        return 0.0;
    }
    const Transition& tr = transition();
    if (s >= 1.0) {
        if (k == 0) return tr.f_at_1 + 0.75 * (s - 1.0);
        if (k == 1) return 0.75;
        return 0.0;
    }
    double x = 2 * s - 1;
    if (k == 0) return poly_eval(tr.f0, x);
    if (k == 1) return poly_eval(tr.f1, x);
    Poly p = tr.f2;
    for (int j = 2; j < k; ++j) p = poly_deriv(p);
    return std::pow(2.0, k - 2) * poly_eval(p, x);
}

WeightJet weight_jet(int N, const RadialWeight& wt, double r) {
    if (!(r > 0)) throw std::invalid_argument("weight jets need r > 0");
    WeightJet j{};
    if (wt.kind == RadialWeight::Kind::abs_x) {
        j.a1 = 1;
        j.a2 = 0;
        j.lap = (N - 1) / r;
        j.lap_dd = 2.0 * (N - 1) / (r * r * r);
        j.bilap = -double(N - 1) * (N - 3) / (r * r * r);
        j.trilap = 3.0 * (N - 1) * (N - 3) * (N - 5) / std::pow(r, 5);
        return j;
    }
    const double R = wt.R;
    Jet a(9);
    double fact = 1;
    for (int k = 0; k <= 8; ++k) {
        if (k > 0) fact *= k;
        a[k] = std::pow(R, 2 - k) * virial_profile(r / R, k) / fact;
    }
    Jet l1 = jet_lap(a, N, r);
    Jet l2 = jet_lap(l1, N, r);
    Jet l3 = jet_lap(l2, N, r);
    j.a1 = a[1];
    j.a2 = 2 * a[2];
    j.lap = l1[0];
    j.lap_dd = 2 * l1[2];
    j.bilap = l2[0];
    j.trilap = l3[0];
    return j;
}

WeightCoefficients weight_coefficients(const RadialGrid& grid, const RadialWeight& wt) {
    const int N = grid.N();
    const std::size_t M = grid.r.size();
    WeightCoefficients c;
    if (wt.kind == RadialWeight::Kind::abs_x) {
        if (N < 5) throw DomainError("the weight |x| needs N ≥ 5 for the rate identity");
        // Singular coefficients use exact cell moments of r^{−k}.
        std::vector<double> p1 = power_weights(grid, 1), p3 = power_weights(grid, 3);
        c.a1.assign(M, 1.0);
        c.c_a1 = grid.w;
        c.c_a2.assign(M, 0.0);
        c.c_a1_r3 = p3;
        c.c_lap.resize(M);
        c.c_lap_dd.resize(M);
        c.c_bilap.resize(M);
        c.c_trilap.assign(M, 0.0);
        for (std::size_t i = 0; i < M; ++i) {
            c.c_lap[i] = (N - 1) * p1[i];
            c.c_lap_dd[i] = 2.0 * (N - 1) * p3[i];
            c.c_bilap[i] = -double(N - 1) * (N - 3) * p3[i];
        }
        if (N > 5) {
            std::vector<double> p5 = power_weights(grid, 5);
            for (std::size_t i = 0; i < M; ++i) c.c_trilap[i] = 3.0 * (N - 1) * (N - 3) * (N - 5) * p5[i];
        } else {
            // Δ²|x| = −8 r^{−3} = −8 r^{2−N}, and Δ r^{2−N} = −(N−2)|S^{N−1}| δ₀.
            c.origin_atom = 24.0 * grid.sphere;
        }
        return c;
    }
    if (!(wt.R > 0)) throw std::invalid_argument("virial weight needs R > 0");
    c.a1.resize(M);
    c.c_a1.resize(M);
    c.c_a2.resize(M);
    c.c_a1_r3.resize(M);
    c.c_lap.resize(M);
    c.c_lap_dd.resize(M);
    c.c_bilap.resize(M);
    c.c_trilap.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double r = grid.r[i], w = grid.w[i];
        WeightJet j = weight_jet(N, wt, r);
        c.a1[i] = j.a1;
        c.c_a1[i] = w * j.a1;
        c.c_a2[i] = w * j.a2;
        c.c_a1_r3[i] = w * j.a1 / (r * r * r);
        c.c_lap[i] = w * j.lap;
        c.c_lap_dd[i] = w * j.lap_dd;
        c.c_bilap[i] = w * j.bilap;
        c.c_trilap[i] = w * j.trilap;
    }
    return c;
}

double morawetz_action(const RadialGrid& grid, const Field& u, const WeightCoefficients& c) {
    Field ur = d_r(grid, u);
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += grid.w[i] * c.a1[i] * std::imag(ur[i] * std::conj(u[i]));
    return 2 * s;
}

double morawetz_action(const RadialGrid& grid, const Field& u, const RadialWeight& weight) {
    if (weight.kind == RadialWeight::Kind::abs_x) {
        WeightCoefficients c;
        c.a1.assign(u.size(), 1.0);
        return morawetz_action(grid, u, c);
    }
    return morawetz_action(grid, u, weight_coefficients(grid, weight));
}

Complex origin_value(const RadialGrid& grid, const Field& u) {
    double a = grid.r[0] * grid.r[0], b = grid.r[1] * grid.r[1];
    return (b * u[0] - a * u[1]) / (b - a);
}

MorawetzRate morawetz_rate(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u,
                           const WeightCoefficients& c) {
    const int N = grid.N();
    const double p = prm.p.value();
    Field ur = d_r(grid, u), urr = d_rr(grid, u);
    double t_dd = 0, t_tri = 0, t_hess = 0, t_tan = 0, t_bi = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double g = std::norm(ur[i]);
        t_dd += c.c_lap_dd[i] * g;
        t_tri += c.c_trilap[i] * std::norm(u[i]);
        t_hess += c.c_a2[i] * std::norm(urr[i]);
        t_tan += c.c_a1_r3[i] * g;
        t_bi += c.c_bilap[i] * g;
    }
    MorawetzRate out;
    out.linear = 2 * (2 * t_dd - 0.5 * t_tri - 4 * (t_hess + (N - 1) * t_tan) + t_bi);
    RealField f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = std::pow(std::abs(u[i]), p);
    RealField V = kernel.apply(f);
    RealField Vr = d_r(grid, V, OuterClosure::one_sided);
    double n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        n1 += c.c_lap[i] * V[i] * f[i];
        n2 += c.c_a1[i] * Vr[i] * f[i];
    }
    out.nonlinear = 2 * prm.epsilon * ((-1 + 2 / p) * n1 + (2 / p) * n2);
    out.rate = out.linear + out.nonlinear;
    if (c.origin_atom != 0) out.origin_atom = -0.5 * c.origin_atom * std::norm(origin_value(grid, u));
    return out;
}

MorawetzRate morawetz_rate(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u,
                           const RadialWeight& weight) {
    return morawetz_rate(prm, grid, kernel, u, weight_coefficients(grid, weight));
}

double morawetz_integrand(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u) {
    const double p = prm.p.value();
    RealField f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = std::pow(std::abs(u[i]), p);
    RealField V = kernel.apply(f);
    std::vector<double> p1 = power_weights(grid, 1);
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += p1[i] * V[i] * f[i];
    return s;
}

PositivityReport symmetrized_positivity(const ModelParams& prm, const RadialGrid& grid, const Field& u,
                                        int angular_points) {
    const int N = grid.N();
    const double alpha = prm.alpha.value(), p = prm.p.value();
    if (!(alpha > 1)) throw DomainError("symmetrized positivity needs α > 1");
    const double c = riesz_constant(N, alpha);
    const double beta = 0.5 * (alpha - N - 2);
    const std::size_t M = u.size();
    RealField g(M);
    for (std::size_t i = 0; i < M; ++i) g[i] = grid.w[i] * std::pow(std::abs(u[i]), p);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < M; ++i)
        if (g[i] != 0.0) support.push_back(i);
    unsigned nt = std::max(1u, std::thread::hardware_concurrency());
    std::vector<double> partial(nt, 0.0), partial_abs(nt, 0.0);
    auto work = [&](unsigned tid) {
        for (std::size_t a = tid; a < support.size(); a += nt) {
            std::size_t i = support[a];
            for (std::size_t b = a; b < support.size(); ++b) {
                std::size_t j = support[b];
                double k = angular_average(grid.r[i], grid.r[j], N, beta, 1, angular_points);
                double term = c * (grid.r[i] + grid.r[j]) * k * g[i] * g[j] * (i == j ? 1.0 : 2.0);
                partial[tid] += term;
                partial_abs[tid] += std::abs(term);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
    PositivityReport rep;
    for (unsigned t = 0; t < nt; ++t) {
        rep.value += 0.5 * partial[t];
        rep.scale += 0.5 * partial_abs[t];
    }
    rep.nonnegative = rep.value >= -1e-12 * rep.scale;
    return rep;
}

CoercivityReport coercivity_gap(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel,
                                const Field& u, double R, const GroundState& gs) {
    const double p = prm.p.value();
    RealField psi = cutoff_profile(grid, R);
    Field v(u.size()), psi_lap(u.size());
    Field lu = laplacian(grid, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        v[i] = psi[i] * u[i];
        psi_lap[i] = psi[i] * lu[i];
    }
    CoercivityReport rep;
    double d2 = mass(grid, laplacian(grid, v));
    rep.cutoff_commutator = d2 - mass(grid, psi_lap);
    if (mass(grid, v) == 0.0) return rep;
    rep.lhs = virial_K(prm, grid, kernel, v);
    Thresholds th = thresholds(prm, grid, kernel, v, gs);
    rep.delta = 1 - th.MG;
    double delta_K = 1 - std::pow(th.MG, p - 1);
    rep.rhs = delta_K * d2;
    double q = 2.0 * grid.N() * p / (grid.N() + prm.alpha.value());
    double nr = lebesgue_norm(grid, v, q);
    rep.delta_prime = rep.rhs / (nr * nr);
    rep.margin = rep.lhs - rep.rhs;
    return rep;
}

namespace {

// ∫₀^T of piecewise-linear g.
double trapz_to(const std::vector<double>& t, const std::vector<double>& g, double T) {
    double s = 0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (t[k - 1] >= T) break;
        double t1 = std::min(t[k], T);
        double g1 = t[k] <= T ? g[k] : g[k - 1] + (g[k] - g[k - 1]) * (T - t[k - 1]) / (t[k] - t[k - 1]);
        s += 0.5 * (g[k - 1] + g1) * (t1 - t[k - 1]);
    }
    return s;
}

}  // namespace

VirialFit truncated_virial_report(const std::vector<double>& t, const std::vector<double>& g, double T) {
    if (t.size() != g.size() || t.size() < 2) throw std::invalid_argument("truncated virial needs a time series");
    if (!(T > 0)) throw std::invalid_argument("truncated virial needs T > 0");
    VirialFit fit;
    if (t.back() < T * (1 - 1e-9)) {
        fit.sufficient = false;
        fit.note = "trajectory shorter than T";
    }
    std::size_t early = std::count_if(t.begin(), t.end(), [&](double x) { return x > 0 && x <= T / 8; });
    if (early < 4) {
        fit.sufficient = false;
        fit.note = "fewer than 4 samples in [0, T/8]";
    }
    for (double div : {8.0, 4.0, 2.0, 1.0}) {
        double Tk = T / div;
        fit.T_values.push_back(Tk);
        fit.integrals.push_back(trapz_to(t, g, Tk));
    }
    fit.integral = fit.integrals.back();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = 4;
    for (int k = 0; k < 4; ++k) {
        double x = std::log(fit.T_values[k]), y = std::log(fit.integrals[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.C = std::exp((sy - fit.exponent * sx) / n);
    return fit;
}

EvacuationReport evacuation_mass(const ModelParams& prm, const RadialGrid& grid, const Field& u, double R) {
    const int N = grid.N();
    const double p = prm.p.value();
    const double q = 2.0 * N * p / (N + prm.alpha.value());
    EvacuationReport rep;
    rep.ball_mass = ball_mass(grid, u, R);
    double vol = grid.sphere * std::pow(R, N) / N;
    double nr = lebesgue_norm(grid, u, q);
    rep.holder_bound = std::pow(vol, 1 - 2 / q) * nr * nr;
    rep.holds = rep.ball_mass <= rep.holder_bound * (1 + 1e-2);
    return rep;
}

Field scattering_profile(const Propagator& prop, const Field& u, double t) { return free_evolve(prop, u, -t); }

double cauchy_defect(const RadialGrid& grid, const Field& vi, const Field& vj) {
    if (vi.size() != vj.size()) throw std::invalid_argument("profile size mismatch");
    Field d(vi.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = vi[i] - vj[i];
    return h2_norm(grid, d);
}

MixedNorm mixed_norm(const std::vector<double>& t, const std::vector<double>& g, double q) {
    if (t.size() != g.size()) throw std::invalid_argument("mixed norm needs aligned series");
    MixedNorm out;
    out.sparse = t.size() < 16;
    if (t.empty()) return out;
    if (std::isinf(q)) {
        out.value = *std::max_element(g.begin(), g.end());
        return out;
    }
    if (!(q >= 1)) throw std::invalid_argument("mixed norm needs q ≥ 1");
    std::vector<double> gq(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) gq[k] = std::pow(std::abs(g[k]), q);
    out.value = std::pow(trapz_to(t, gq, t.back()), 1.0 / q);
    return out;
}

void check_decay_exponent(int N, double r) {
    bool upper_ok = N <= 4 || r < 2.0 * N / (N - 4);
    if (!(r > 2) || !upper_ok) throw DomainError("decay exponent must satisfy 2 < r < 2N/(N−4)");
}

DiagnosticHook lebesgue_hook(const RadialGrid& grid, double r, const std::string& name) {
    check_decay_exponent(grid.N(), r);
    const RadialGrid* g = &grid;
    return DiagnosticHook{{name}, [g, r](double, const Field& u) { return std::vector<double>{lebesgue_norm(*g, u, r)}; }};
}

std::vector<DiagnosticHook> trajectory_hooks(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel,
                                             const Propagator& prop, const TrajectoryOptions& opts) {
    struct State {
        WeightCoefficients coeffs;
        std::vector<double> p1;
        double last_t = 0, last_integrand = 0, cum = 0;
        bool started = false;
        Field last_profile;
    };
    auto st = std::make_shared<State>();
    // The action needs only a'(r); full coefficients would reject |x| for N < 5.
    if (opts.weight.kind == RadialWeight::Kind::abs_x)
        st->coeffs.a1.assign(grid.r.size(), 1.0);
    else
        st->coeffs = weight_coefficients(grid, opts.weight);
    st->p1 = power_weights(grid, 1);
    DerivedExponents d = derive_exponents(prm);
    const double p = prm.p.value(), B = d.B.value();
    const double r_decay = 2.0 + 4.0 / grid.N();
    const double r_str = d.r_strichartz.value();
    const RadialGrid* g = &grid;
    const RieszKernel* K = &kernel;
    const Propagator* P = &prop;
    const double R = opts.R_report;
    DiagnosticHook hook;
    hook.names = {"K", "M_action", "morawetz_cum", "norm_decay", "norm_r", "ball_mass", "cauchy_defect"};
    hook.eval = [=](double t, const Field& u) {
        RealField f(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) f[i] = std::pow(std::abs(u[i]), p);
        RealField V = K->apply(f);
        double P_en = 0, integrand = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            P_en += g->w[i] * V[i] * f[i];
            integrand += st->p1[i] * V[i] * f[i];
        }
        double Kval = mass(*g, laplacian(*g, u)) - B / (2 * p) * P_en;
        if (st->started) st->cum += 0.5 * (integrand + st->last_integrand) * (t - st->last_t);
        Field v = scattering_profile(*P, u, t);
        double defect = st->started ? cauchy_defect(*g, v, st->last_profile) : 0.0;
        st->started = true;
        st->last_t = t;
        st->last_integrand = integrand;
        st->last_profile = std::move(v);
        return std::vector<double>{Kval,
                                   morawetz_action(*g, u, st->coeffs),
                                   st->cum,
                                   lebesgue_norm(*g, u, r_decay),
                                   lebesgue_norm(*g, u, r_str),
                                   ball_mass(*g, u, R),
                                   defect};
    };
    return {hook};
}

Field scaled_sample(const ModelParams& prm, const RadialGrid& grid, const std::function<Complex(double)>& u,
                    double lambda) {
    const double e = (4 + prm.alpha.value()) / (2 * (prm.p.value() - 1));
    const double amp = std::pow(lambda, e);
    return sample_complex(grid, [&](double r) { return amp * u(lambda * r); });
}

}  // namespace hartree
