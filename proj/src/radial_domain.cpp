#include "hartree/radial_domain.hpp"

#include "hartree/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hartree {

namespace {

void check_size(const RadialGrid& g, std::size_t n) {
    if (n != g.r.size()) throw std::invalid_argument("field size does not match grid");
}

// Derivative at x0 of the quadratic through three samples.
template <class T>
T lagrange_d1(double x0, double xa, T ua, double xb, T ub, double xc, T uc) {
    double la = ((x0 - xb) + (x0 - xc)) / ((xa - xb) * (xa - xc));
    double lb = ((x0 - xa) + (x0 - xc)) / ((xb - xa) * (xb - xc));
    double lc = ((x0 - xa) + (x0 - xb)) / ((xc - xa) * (xc - xb));
    return la * ua + lb * ub + lc * uc;
}

template <class T>
std::vector<T> d_r_impl(const RadialGrid& g, const std::vector<T>& u, OuterClosure outer) {
    check_size(g, u.size());
    const std::size_t M = u.size();
    std::vector<T> du(M);
    for (std::size_t i = 0; i < M; ++i) {
        double xm = i == 0 ? -g.r[0] : g.r[i - 1];
        T um = i == 0 ? u[0] : u[i - 1];
        if (i + 1 < M) {
            du[i] = lagrange_d1(g.r[i], xm, um, g.r[i], u[i], g.r[i + 1], u[i + 1]);
        } else if (outer == OuterClosure::dirichlet) {
            du[i] = lagrange_d1(g.r[i], xm, um, g.r[i], u[i], g.r_ghost, T(0));
        } else {
            du[i] = lagrange_d1(g.r[i], g.r[i - 2], u[i - 2], xm, um, g.r[i], u[i]);
        }
    }
    return du;
}

}  // namespace

double RadialGrid::h() const {
    double hmax = 0;
    for (std::size_t i = 0; i + 1 < faces.size(); ++i) hmax = std::max(hmax, faces[i + 1] - faces[i]);
    return hmax;
}

std::string RadialGrid::grading_tag() const {
    if (spec.grading == Grading::uniform) return "uniform";
    std::ostringstream os;
    os << "geometric:" << std::setprecision(17) << spec.stretch;
    return os.str();
}

RadialGrid build_grid(const GridSpec& spec) {
    if (spec.M < 16) throw std::invalid_argument("grid needs M ≥ 16");
    if (!(spec.r_max > 0)) throw std::invalid_argument("grid needs r_max > 0");
    if (spec.N < 1) throw std::invalid_argument("grid needs N ≥ 1");
    if (spec.grading == Grading::geometric && !(spec.stretch > 0))
        throw std::invalid_argument("geometric grading needs stretch > 0");
    RadialGrid g;
    g.spec = spec;
    const int M = spec.M;
    g.faces.resize(M + 1);
    const double xi_end = M - 0.5;
    for (int k = 0; k <= M; ++k) {
        double xi = k / xi_end;
        g.faces[k] = spec.grading == Grading::uniform ? xi : std::sinh(spec.stretch * xi) / std::sinh(spec.stretch);
    }
    // Scale so that the last node lands on r_max.
    double last = 0.5 * (g.faces[M - 1] + g.faces[M]);
    for (double& f : g.faces) f *= spec.r_max / last;
    g.r.resize(M);
    for (int i = 0; i < M; ++i) g.r[i] = 0.5 * (g.faces[i] + g.faces[i + 1]);
    g.r[M - 1] = spec.r_max;
    g.r_ghost = 2 * g.faces[M] - g.r[M - 1];
    g.sphere = sphere_area(spec.N);
    g.w.resize(M);
    g.area.resize(M + 1);
    for (int i = 0; i < M; ++i)
        g.w[i] = g.sphere * (std::pow(g.faces[i + 1], spec.N) - std::pow(g.faces[i], spec.N)) / spec.N;
    for (int k = 0; k <= M; ++k) g.area[k] = g.sphere * std::pow(g.faces[k], spec.N - 1);
    if (spec.N == 1) g.area[0] = 0;  // even extension: no flux through the origin
    return g;
}

template <class T>
std::vector<T> Tridiagonal::apply(const std::vector<T>& u) const {
    const std::size_t M = diag.size();
    if (u.size() != M) throw std::invalid_argument("tridiagonal size mismatch");
    std::vector<T> out(M);
    for (std::size_t i = 0; i < M; ++i) {
        T s = diag[i] * u[i];
        if (i > 0) s += lower[i] * u[i - 1];
        if (i + 1 < M) s += upper[i] * u[i + 1];
        out[i] = s;
    }
    return out;
}

template std::vector<double> Tridiagonal::apply(const std::vector<double>&) const;
template std::vector<Complex> Tridiagonal::apply(const std::vector<Complex>&) const;

OperatorSet build_operators(const RadialGrid& g) {
    const std::size_t M = g.r.size();
    OperatorSet ops;
    ops.grid = &g;
    Tridiagonal& L = ops.lap;
    L.lower.assign(M, 0);
    L.diag.assign(M, 0);
    L.upper.assign(M, 0);
    for (std::size_t i = 0; i < M; ++i) {
        // Flux through the right face; the ghost beyond r_M holds zero.
        double cr = g.area[i + 1] / g.dr_right(i);
        double cl = i == 0 ? 0.0 : g.area[i] / (g.r[i] - g.r[i - 1]);
        L.diag[i] = -(cr + cl) / g.w[i];
        if (i + 1 < M) L.upper[i] = cr / g.w[i];
        if (i > 0) L.lower[i] = cl / g.w[i];
    }
    return ops;
}

namespace {

const Tridiagonal& cached_lap(const RadialGrid& g) {
    // Operators are cheap; rebuilt lazily per grid address and size.
    thread_local const RadialGrid* key = nullptr;
    thread_local std::vector<double> key_w;
    thread_local OperatorSet ops;
    if (key != &g || key_w != g.w) {
        ops = build_operators(g);
        key = &g;
        key_w = g.w;
    }
    return ops.lap;
}

}  // namespace

Field laplacian(const RadialGrid& g, const Field& u) {
    check_size(g, u.size());
    return cached_lap(g).apply(u);
}

RealField laplacian(const RadialGrid& g, const RealField& u) {
    check_size(g, u.size());
    return cached_lap(g).apply(u);
}

Field bilaplacian(const RadialGrid& g, const Field& u) {
    const Tridiagonal& L = cached_lap(g);
    check_size(g, u.size());
    return L.apply(L.apply(u));
}

Field d_r(const RadialGrid& g, const Field& u, OuterClosure outer) { return d_r_impl(g, u, outer); }
RealField d_r(const RadialGrid& g, const RealField& u, OuterClosure outer) { return d_r_impl(g, u, outer); }

Field d_rr(const RadialGrid& g, const Field& u) {
    check_size(g, u.size());
    const std::size_t M = u.size();
    Field out(M);
    for (std::size_t i = 0; i < M; ++i) {
        double xm = i == 0 ? -g.r[0] : g.r[i - 1];
        Complex um = i == 0 ? u[0] : u[i - 1];
        double xp = i + 1 < M ? g.r[i + 1] : g.r_ghost;
        Complex up = i + 1 < M ? u[i + 1] : Complex(0);
        double dm = g.r[i] - xm, dp = xp - g.r[i];
        out[i] = 2.0 * ((up - u[i]) / dp - (u[i] - um) / dm) / (dm + dp);
    }
    return out;
}

double integrate(const RadialGrid& g, const RealField& f) {
    check_size(g, f.size());
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += g.w[i] * f[i];
    return s;
}

Complex integrate(const RadialGrid& g, const Field& f) {
    check_size(g, f.size());
    Complex s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += g.w[i] * f[i];
    return s;
}

double integrate(const RadialGrid& g, const std::function<double(double)>& f) {
    return integrate(g, sample(g, f));
}

RealField sample(const RadialGrid& g, const std::function<double(double)>& f) {
    RealField out(g.r.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.r[i]);
    return out;
}

Field sample_complex(const RadialGrid& g, const std::function<Complex(double)>& f) {
    Field out(g.r.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.r[i]);
    return out;
}

double mass(const RadialGrid& g, const Field& u) {
    check_size(g, u.size());
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += g.w[i] * std::norm(u[i]);
    return s;
}

double lebesgue_norm(const RadialGrid& g, const Field& u, double q) {
    check_size(g, u.size());
    if (std::isinf(q)) return max_abs(u);
    if (!(q >= 1)) throw std::invalid_argument("Lebesgue exponent must be ≥ 1");
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += g.w[i] * std::pow(std::abs(u[i]), q);
    return std::pow(s, 1.0 / q);
}

double laplacian_norm(const RadialGrid& g, const Field& u) { return std::sqrt(mass(g, laplacian(g, u))); }

double h2_norm(const RadialGrid& g, const Field& u) {
    return std::sqrt(mass(g, u) + mass(g, laplacian(g, u)));
}

double grad_norm(const RadialGrid& g, const Field& u) { return std::sqrt(mass(g, d_r(g, u))); }

double ball_mass(const RadialGrid& g, const Field& u, double R) {
    check_size(g, u.size());
    double s = 0;
    const int N = g.N();
    for (std::size_t i = 0; i < u.size() && g.faces[i] < R; ++i) {
        double hi = std::min(g.faces[i + 1], R);
        double vol = g.sphere * (std::pow(hi, N) - std::pow(g.faces[i], N)) / N;
        s += vol * std::norm(u[i]);
    }
    return s;
}

std::vector<double> power_weights(const RadialGrid& g, int k) {
    const int e = g.N() - k;
    if (e <= 0) throw std::invalid_argument("r^{-k} is not integrable at the origin for k ≥ N");
    std::vector<double> out(g.r.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = g.sphere * (std::pow(g.faces[i + 1], e) - std::pow(g.faces[i], e)) / e;
    return out;
}

void write_snapshot_csv(const std::string& path, const RadialGrid& g, const Field& u) {
    check_size(g, u.size());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "r,re,im\r\n" << std::setprecision(17);
    for (std::size_t i = 0; i < u.size(); ++i) os << g.r[i] << ',' << u[i].real() << ',' << u[i].imag() << "\r\n";
}

double max_abs(const Field& u) {
    double m = 0;
    for (const Complex& z : u) m = std::max(m, std::abs(z));
    return m;
}

Field to_complex(const RealField& f) { return Field(f.begin(), f.end()); }

RealField real_part(const Field& u) {
    RealField out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i].real();
    return out;
}

}  // namespace hartree
