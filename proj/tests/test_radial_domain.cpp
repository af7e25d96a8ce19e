#include "hartree/model.hpp"
#include "hartree/radial_domain.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace hartree;

namespace {

const double pi = std::numbers::pi;

RadialGrid grid(int N, double r_max, int M, Grading g = Grading::uniform) {
    return build_grid(GridSpec{N, r_max, M, g, 3.0});
}

Field gaussian(const RadialGrid& g, double a = 1.0) {
    return sample_complex(g, [a](double r) { return Complex(std::exp(-a * r * r), 0.0); });
}

// Max |f_h − f| over nodes with r_lo ≤ r < r_cut. Second differences of O(h²) errors leave an
// O(1) layer in the first few cells, so pointwise checks start at a fixed radius.
double interior_error(const RadialGrid& g, const Field& num, const std::function<double(double)>& exact,
                      double r_cut, double r_lo = 0.5) {
    double e = 0;
    for (std::size_t i = 0; i < g.r.size(); ++i)
        if (g.r[i] >= r_lo && g.r[i] < r_cut) e = std::max(e, std::abs(num[i] - exact(g.r[i])));
    return e;
}

}  // namespace

TEST_CASE("grid geometry") {
    for (Grading gr : {Grading::uniform, Grading::geometric}) {
        RadialGrid g = grid(5, 12, 256, gr);
        CHECK(g.r.size() == 256);
        CHECK(g.r.back() == doctest::Approx(12.0).epsilon(1e-13));
        CHECK(g.r.front() > 0);
        for (std::size_t i = 1; i < g.r.size(); ++i) CHECK(g.r[i] > g.r[i - 1]);
        double vol = 0;
        for (double w : g.w) vol += w;
        CHECK(vol == doctest::Approx(sphere_area(5) * std::pow(g.faces.back(), 5) / 5).epsilon(1e-13));
    }
    CHECK_THROWS(grid(5, 12, 8));
    CHECK_THROWS(grid(5, -1, 64));
}

TEST_CASE("ball volume by truncated quadrature") {
    RadialGrid g = grid(5, 12, 2048);
    Field one(g.r.size(), Complex(1.0, 0.0));
    CHECK(ball_mass(g, one, 1.0) == doctest::Approx(8 * pi * pi / 15).epsilon(1e-12));
    // Nodal sampling of the indicator on a face-aligned grid.
    RadialGrid ga = build_grid(GridSpec{5, (2048 - 0.5) / 512.0, 2048, Grading::uniform, 3.0});
    double v = integrate(ga, [](double r) { return r < 1 ? 1.0 : 0.0; });
    CHECK(std::abs(v - 8 * pi * pi / 15) / (8 * pi * pi / 15) < 1e-3);
}

TEST_CASE("Gaussian integrals") {
    const double exact = std::pow(pi / 2, 2.5);
    for (Grading gr : {Grading::uniform, Grading::geometric}) {
        RadialGrid g = grid(5, 12, 2048, gr);
        double v = integrate(g, [](double r) { return std::exp(-2 * r * r); });
        CHECK(v == doctest::Approx(exact).epsilon(1e-4));
        CHECK(mass(g, gaussian(g)) == doctest::Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("self-convergence of the quadrature") {
    auto err = [](int M) {
        RadialGrid g = grid(5, 6, M);
        return std::abs(integrate(g, [](double r) { return std::exp(-2 * r * r); }) - std::pow(pi / 2, 2.5));
    };
    double e16 = err(16), e32 = err(32), e64 = err(64);
    CHECK(e16 / e32 >= 4.0 * 0.9);
    CHECK(e32 / e64 >= 4.0 * 0.95);
}

TEST_CASE("Laplacian and bilaplacian of a Gaussian converge at second order") {
    const int N = 5;
    auto lap_exact = [](double r) { return (4 * r * r - 2 * N) * std::exp(-r * r); };
    auto bilap_exact = [](double r) {
        double r2 = r * r;
        return (16 * r2 * r2 - (16 * N + 32) * r2 + 4 * N * N + 8 * N) * std::exp(-r2);
    };
    double el[3], eb[3];
    for (int k = 0; k < 3; ++k) {
        RadialGrid g = grid(N, 10, 256 << k);
        Field u = gaussian(g);
        el[k] = interior_error(g, laplacian(g, u), lap_exact, 8);
        eb[k] = interior_error(g, bilaplacian(g, u), bilap_exact, 8);
    }
    CHECK(el[0] / el[1] > 3.5);
    CHECK(el[1] / el[2] > 3.5);
    CHECK(eb[0] / eb[1] > 3.5);
    CHECK(eb[1] / eb[2] > 3.5);
    CHECK(el[2] < 1e-3);
}

TEST_CASE("Laplacian annihilates constants away from the wall") {
    RadialGrid g = grid(6, 5, 128);
    Field c(g.r.size(), Complex(2.0, 0.0));
    Field lc = laplacian(g, c);
    for (std::size_t i = 0; i + 1 < g.r.size(); ++i) CHECK(std::abs(lc[i]) < 1e-9);
}

TEST_CASE("weighted symmetry and the two forms of ‖Δu‖²") {
    RadialGrid g = grid(5, 8, 300, Grading::geometric);
    Field u = sample_complex(g, [](double r) { return Complex(std::exp(-r * r), r * std::exp(-2 * r * r)); });
    Field v = sample_complex(g, [](double r) { return Complex(std::cos(r) * std::exp(-r * r / 2), 0.0); });
    Field lu = laplacian(g, u), lv = laplacian(g, v);
    Complex a = 0, b = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        a += g.w[i] * lu[i] * std::conj(v[i]);
        b += g.w[i] * u[i] * std::conj(lv[i]);
    }
    CHECK(std::abs(a - b) < 1e-10 * std::abs(a));
    Field bu = bilaplacian(g, u);
    Complex q = 0;
    for (std::size_t i = 0; i < u.size(); ++i) q += g.w[i] * bu[i] * std::conj(u[i]);
    double d2 = std::pow(laplacian_norm(g, u), 2);
    CHECK(std::abs(q.real() - d2) < 1e-10 * d2);
}

TEST_CASE("norms of a Gaussian in five dimensions") {
    RadialGrid g = grid(5, 12, 2048);
    Field u = gaussian(g);
    const double m = std::pow(pi / 2, 2.5);
    CHECK(lebesgue_norm(g, u, 2) == doctest::Approx(std::sqrt(m)).epsilon(1e-4));
    CHECK(std::pow(laplacian_norm(g, u), 2) == doctest::Approx(35 * m).epsilon(1e-3));
    CHECK(std::pow(grad_norm(g, u), 2) == doctest::Approx(5 * m).epsilon(1e-3));
    CHECK(std::pow(h2_norm(g, u), 2) == doctest::Approx(36 * m).epsilon(1e-3));
    CHECK(lebesgue_norm(g, u, INFINITY) == doctest::Approx(std::exp(-g.r[0] * g.r[0])));
    // ∫ e^{−4r²} = (π/4)^{5/2}, so ‖u‖_4 = (π/4)^{5/8}.
    CHECK(lebesgue_norm(g, u, 4) == doctest::Approx(std::pow(pi / 4, 5.0 / 8)).epsilon(1e-4));
    Field zero(g.r.size());
    CHECK(h2_norm(g, zero) == 0.0);
}

TEST_CASE("derivatives") {
    double e1[2], e2[2];
    for (int k = 0; k < 2; ++k) {
        RadialGrid g = grid(6, 10, 512 << k);
        Field u = gaussian(g);
        e1[k] = interior_error(g, d_r(g, u), [](double r) { return -2 * r * std::exp(-r * r); }, 8);
        e2[k] = interior_error(g, d_rr(g, u), [](double r) { return (4 * r * r - 2) * std::exp(-r * r); }, 8);
    }
    CHECK(e1[0] / e1[1] > 3.5);
    CHECK(e2[0] / e2[1] > 3.5);
}

TEST_CASE("ball mass limits") {
    RadialGrid g = grid(5, 12, 1024);
    Field u = gaussian(g);
    CHECK(ball_mass(g, u, 20.0) == doctest::Approx(mass(g, u)).epsilon(1e-14));
    CHECK(ball_mass(g, u, 6.0) == doctest::Approx(mass(g, u)).epsilon(1e-12));
    CHECK(ball_mass(g, u, 0.0) == 0.0);
    CHECK(ball_mass(g, u, 0.5) < ball_mass(g, u, 1.0));
}

TEST_CASE("power weights are exact cell moments") {
    RadialGrid g = grid(6, 4, 200, Grading::geometric);
    for (int k : {1, 3, 5}) {
        std::vector<double> pw = power_weights(g, k);
        double s = 0;
        for (double x : pw) s += x;
        CHECK(s == doctest::Approx(sphere_area(6) * std::pow(g.faces.back(), 6 - k) / (6 - k)).epsilon(1e-12));
    }
    CHECK_THROWS(power_weights(g, 6));
}

TEST_CASE("snapshot CSV layout") {
    RadialGrid g = grid(5, 2, 16);
    Field u(g.r.size(), Complex(1.5, -0.25));
    auto path = std::filesystem::temp_directory_path() / "hartree_snapshot_test.csv";
    write_snapshot_csv(path.string(), g, u);
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    std::string s = ss.str();
    CHECK(s.rfind("r,re,im\r\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 17);
    CHECK(s.find("1.5,-0.25") != std::string::npos);
    std::filesystem::remove(path);
}
