#include "hartree/model.hpp"
#include "hartree/riesz.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace hartree;

namespace {

RadialGrid grid(int N, double r_max, int M) { return build_grid(GridSpec{N, r_max, M}); }

// In ℝ³ the sphere average of D^β has the elementary form
// [(r+s)^{2β+2} − |r−s|^{2β+2}] / (4rs(β+1)).
double average_3d(double r, double s, double beta) {
    return (std::pow(r + s, 2 * beta + 2) - std::pow(std::abs(r - s), 2 * beta + 2)) / (4 * r * s * (beta + 1));
}

// Interior band [1/2, r_cut]: next to the origin the discrete Laplacian of the O(h²) quadrature
// error leaves an O(1) layer in a fixed number of cells.
double newton_residual(int N, int M, int points, double r_cut) {
    RadialGrid g = grid(N, 10, M);
    KernelOptions o;
    o.angular_points = points;
    RieszKernel K = build_kernel(g, 2.0, o);
    RealField f = sample(g, [](double r) { return std::exp(-2 * r * r); });
    RealField lv = laplacian(g, K.apply(f));
    double e = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (g.r[i] >= 0.5 && g.r[i] <= r_cut) e = std::max(e, std::abs(lv[i] + f[i]));
    return e;
}

}  // namespace

TEST_CASE("angular average against the three-dimensional closed form") {
    for (double beta : {-0.5, -0.25, 0.5, 1.0}) {
        for (auto [r, s] : {std::pair{1.0, 2.0}, {0.3, 0.31}, {5.0, 0.1}, {1.0, 1.0}}) {
            CHECK(angular_average(r, s, 3, beta, 0, 16) == doctest::Approx(average_3d(r, s, beta)).epsilon(1e-10));
        }
    }
    // 1 − cosθ = (D − (r−s)²)/(2rs), so the m = 1 average follows from two m = 0 ones.
    double r = 0.7, s = 1.9, beta = -0.5;
    double expect = (average_3d(r, s, beta + 1) - (r - s) * (r - s) * average_3d(r, s, beta)) / (2 * r * s);
    CHECK(angular_average(r, s, 3, beta, 1, 16) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("kernel symmetry, positivity and linearity") {
    RadialGrid g = grid(5, 8, 200);
    RieszKernel K = build_kernel(g, 2.0);
    double defect = 0, big = 0;
    bool positive = true;
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = 0; j < K.size(); ++j) {
            defect = std::max(defect, std::abs(K.entry(i, j) * g.w[i] - K.entry(j, i) * g.w[j]));
            big = std::max(big, K.entry(i, j));
            positive = positive && K.entry(i, j) > 0;
        }
    CHECK(defect / big < 1e-8);
    CHECK(positive);

    RealField f = sample(g, [](double r) { return std::exp(-r * r); });
    RealField h = sample(g, [](double r) { return r * r * std::exp(-r); });
    RealField fh(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) fh[i] = f[i] + h[i];
    RealField a = K.apply(f), b = K.apply(h), c = K.apply(fh);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(c[i] - a[i] - b[i]) < 1e-13 * std::abs(c[i]));
    for (double x : K.apply(RealField(f.size(), 0.0))) CHECK(x == 0.0);

    // ∫(I∗f)h = ∫(I∗h)f.
    double fa = integrate(g, RealField([&] {
        RealField t(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) t[i] = b[i] * f[i];
        return t;
    }()));
    double ha = integrate(g, RealField([&] {
        RealField t(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) t[i] = a[i] * h[i];
        return t;
    }()));
    CHECK(fa == doctest::Approx(ha).epsilon(1e-10));
}

TEST_CASE("Newtonian oracle: Δ(I_2∗f) = −f") {
    for (int N : {5, 6}) {
        double coarse = newton_residual(N, 256, 16, 6), fine = newton_residual(N, 512, 32, 6);
        MESSAGE("N=" << N << " Newtonian residual " << coarse << " -> " << fine);
        CHECK(coarse / fine >= 3.0);
        CHECK(fine < 1e-3);
    }
}

TEST_CASE("far field follows the multipole limit") {
    RadialGrid g = grid(5, 12, 512);
    RieszKernel K = build_kernel(g, 2.0);
    RealField f = sample(g, [](double r) { return r < 3 ? std::exp(-4 * r * r) : 0.0; });
    double total = integrate(g, f);
    double expect = riesz_constant(5, 2) * total * std::pow(g.r.back(), 2.0 - 5);
    CHECK(K.apply(f).back() == doctest::Approx(expect).epsilon(1e-2));
}

TEST_CASE("Gaussian self-energy") {
    CHECK(gaussian_hartree_energy(5, 2, 3) == doctest::Approx(0.0220421547).epsilon(1e-9));
    RadialGrid g = grid(5, 12, 1024);
    RieszKernel K = build_kernel(g, 2.0);
    Field u = sample_complex(g, [](double r) { return Complex(std::exp(-r * r), 0.0); });
    double e = hartree_energy(K, u, 3.0);
    CHECK(std::abs(e / gaussian_hartree_energy(5, 2, 3) - 1) < 1e-3);
    RealField V = hartree_potential(K, u, 3.0);
    for (double v : V) CHECK(v > 0);
    for (double v : hartree_potential(K, Field(u.size()), 3.0)) CHECK(v == 0.0);
}

TEST_CASE("semigroup spot check: I_2∗(I_2∗f) ≈ I_4∗f") {
    // The outer integral loses the r^{−3} tail of I_2∗f beyond r_max, a relative O(1/r_max) effect,
    // so the defect must roughly halve when the domain doubles at fixed h.
    auto defect = [](double r_max, int M) {
        RadialGrid g = grid(5, r_max, M);
        RieszKernel K2 = build_kernel(g, 2.0), K4 = build_kernel(g, 4.0);
        RealField f = sample(g, [](double r) { return std::exp(-r * r); });
        RealField a = K2.apply(K2.apply(f)), b = K4.apply(f);
        double e = 0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (g.r[i] < 2) e = std::max(e, std::abs(a[i] / b[i] - 1));
        return e;
    };
    double e1 = defect(16, 512), e2 = defect(32, 1024);
    MESSAGE("semigroup defect " << e1 << " -> " << e2);
    CHECK(e1 / e2 > 1.7);
    CHECK(e2 < 0.05);
}

TEST_CASE("kernel cache round trip is bit-identical") {
    RadialGrid g = grid(6, 6, 64);
    auto dir = std::filesystem::temp_directory_path() / "hartree_kernel_cache_test";
    std::filesystem::remove_all(dir);
    RieszKernel a = load_or_build_kernel(g, 3.0, {}, dir.string());
    CHECK(std::filesystem::exists(dir / kernel_cache_name(g, 3.0, {})));
    RieszKernel b = load_or_build_kernel(g, 3.0, {}, dir.string());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a.core(i, j) == b.core(i, j));
    CHECK(kernel_cache_name(g, 3.0, {}) != kernel_cache_name(g, 2.5, {}));
    CHECK(kernel_cache_name(g, 3.0, {}) != kernel_cache_name(grid(6, 6, 65), 3.0, {}));
    std::filesystem::remove_all(dir);
}

TEST_CASE("α ≤ 1 is rejected") {
    RadialGrid g = grid(5, 6, 32);
    CHECK_THROWS(build_kernel(g, 1.0));
    CHECK_THROWS(build_kernel(g, 0.5));
}
