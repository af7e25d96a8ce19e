#include "hartree/evolution.hpp"
#include "hartree/ground_state.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

using namespace hartree;

namespace {

struct Lab {
    ModelParams prm;
    RadialGrid grid;
    Propagator prop;
    RieszKernel kernel;
};

Lab& five_dim() {
    static std::unique_ptr<Lab> lab = [] {
        RadialGrid g = build_grid(GridSpec{5, 12, 256});
        Propagator prop = build_propagator(g);
        return std::unique_ptr<Lab>(
            new Lab{ModelParams{5, Number(2), Number(3), 1, false}, g, prop, build_kernel(g, 2.0)});
    }();
    return *lab;
}

double rel_diff(const RadialGrid& g, const Field& a, const Field& b) {
    Field d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return std::sqrt(mass(g, d) / mass(g, b));
}

double max_energy_drift(const TrajectoryRecord& rec) {
    std::vector<double> E = rec.series("energy");
    double d = 0;
    for (double e : E) d = std::max(d, std::abs(e - E.front()));
    return d;
}

}  // namespace

TEST_CASE("propagator: identity, unitarity, group law, inverse") {
    Lab& L = five_dim();
    Field u = testing::gaussian_field(L.grid, 1.0, 1.2);
    CHECK(rel_diff(L.grid, free_evolve(L.prop, u, 0.0), u) < 1e-10);
    Field u1 = free_evolve(L.prop, u, 1.0);
    CHECK(std::sqrt(mass(L.grid, u1)) == doctest::Approx(std::sqrt(mass(L.grid, u))).epsilon(1e-10));
    CHECK(rel_diff(L.grid, free_evolve(L.prop, free_evolve(L.prop, u, 0.3), 0.7), u1) < 1e-10);
    CHECK(rel_diff(L.grid, free_evolve(L.prop, u1, -1.0), u) < 1e-9);
    CHECK(h2_norm(L.grid, u1) == doctest::Approx(h2_norm(L.grid, u)).epsilon(1e-9));
}

TEST_CASE("small-time Taylor oracle") {
    Lab& L = five_dim();
    Field u = testing::gaussian_field(L.grid, 1.0, 1.5);
    Field b = bilaplacian(L.grid, u);
    auto err = [&](double tau) {
        Field v = free_evolve(L.prop, u, tau), d(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = v[i] - (u[i] + Complex(0, tau) * b[i]);
        return std::sqrt(mass(L.grid, d));
    };
    double e1 = err(2e-3), e2 = err(1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("linear-only splitting equals the free flow") {
    Lab& L = five_dim();
    Field u = testing::gaussian_field(L.grid, 2.0);
    StepState st = make_state(L.prm, L.kernel, u, false);
    for (int k = 0; k < 10; ++k) strang_step(st, 0.01, L.prm, L.kernel, L.prop, false);
    CHECK(rel_diff(L.grid, st.u, free_evolve(L.prop, u, 0.1)) < 1e-10);
}

TEST_CASE("mass is conserved over a thousand steps") {
    Lab& L = five_dim();
    for (int eps : {1, -1}) {
        ModelParams prm = L.prm;
        prm.epsilon = eps;
        Field u = testing::gaussian_field(L.grid, 1.0);
        double M0 = mass(L.grid, u);
        StepState st = make_state(prm, L.kernel, u);
        for (int k = 0; k < 1000; ++k) strang_step(st, 1e-3, prm, L.kernel, L.prop);
        CHECK(std::abs(mass(L.grid, st.u) - M0) / M0 < 1e-10);
    }
}

TEST_CASE("Strang steps are time-reversible") {
    Lab& L = five_dim();
    Field u = testing::gaussian_field(L.grid, 2.0);
    StepState st = make_state(L.prm, L.kernel, u);
    for (int k = 0; k < 50; ++k) strang_step(st, 2e-3, L.prm, L.kernel, L.prop);
    CHECK(rel_diff(L.grid, st.u, u) > 1e-3);
    for (int k = 0; k < 50; ++k) strang_step(st, -2e-3, L.prm, L.kernel, L.prop);
    CHECK(rel_diff(L.grid, st.u, u) < 1e-9);
}

TEST_CASE("energy drift is second order in dt") {
    Lab& L = five_dim();
    Field u = testing::gaussian_field(L.grid, 2.0);
    EvolutionConfig cfg;
    cfg.t_end = 0.1;
    cfg.adaptive_dt = false;
    cfg.snapshot_stride = 1;
    cfg.dt = 4e-3;
    double d1 = max_energy_drift(evolve(u, L.prm, L.kernel, L.prop, cfg));
    cfg.dt = 2e-3;
    double d2 = max_energy_drift(evolve(u, L.prm, L.kernel, L.prop, cfg));
    MESSAGE("energy drift ratio " << d1 / d2);
    CHECK(d1 / d2 >= 3.0);
    CHECK(d1 / d2 <= 5.0);
}

TEST_CASE("zero data stays zero") {
    Lab& L = five_dim();
    EvolutionConfig cfg;
    cfg.t_end = 0.05;
    TrajectoryRecord rec = evolve(Field(L.grid.r.size()), L.prm, L.kernel, L.prop, cfg);
    CHECK(rec.cause == Termination::completed);
    CHECK(max_abs(rec.final_state) == 0.0);
}

TEST_CASE("termination causes") {
    Lab& L = five_dim();
    EvolutionConfig cfg;
    cfg.t_end = 2.0;
    cfg.dt = 1e-3;
    SUBCASE("strong focusing data blows up") {
        ModelParams foc = L.prm;
        foc.epsilon = -1;
        TrajectoryRecord rec = evolve(testing::gaussian_field(L.grid, 30.0), foc, L.kernel, L.prop, cfg);
        CHECK(rec.cause == Termination::blowup_detected);
        CHECK(rec.rows.back()[3] > 5 * rec.rows.front()[3]);
    }
    SUBCASE("dispersing data reaches the wall") {
        TrajectoryRecord rec = evolve(testing::gaussian_field(L.grid, 1.0), L.prm, L.kernel, L.prop, cfg);
        CHECK(rec.cause == Termination::boundary_contaminated);
        CHECK(rec.final_time < cfg.t_end);
    }
    SUBCASE("the sponge absorbs outgoing mass") {
        cfg.sponge = true;
        TrajectoryRecord rec = evolve(testing::gaussian_field(L.grid, 1.0), L.prm, L.kernel, L.prop, cfg);
        CHECK(rec.cause == Termination::completed);
        std::vector<double> m = rec.series("mass");
        CHECK(m.back() < 0.5 * m.front());
        CHECK(rec.dt_halvings == 0);
    }
}

TEST_CASE("trajectory records and CSV") {
    Lab& L = five_dim();
    EvolutionConfig cfg;
    cfg.t_end = 0.02;
    cfg.dt = 1e-3;
    cfg.snapshot_stride = 5;
    cfg.snapshot_times = {0.0, 0.01};
    DiagnosticHook hook{{"peak"}, [](double, const Field& u) { return std::vector<double>{max_abs(u)}; }};
    TrajectoryRecord rec = evolve(testing::gaussian_field(L.grid), L.prm, L.kernel, L.prop, cfg, {hook});
    CHECK(rec.rows.size() == 5);
    CHECK(rec.columns.back() == "peak");
    CHECK(rec.snapshots.size() == 2);
    CHECK(rec.series("t").back() == doctest::Approx(0.02));
    CHECK_THROWS(rec.series("missing"));
    auto path = std::filesystem::temp_directory_path() / "hartree_traj_test.csv";
    write_trajectory_csv(path.string(), rec);
    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header.rfind("t,mass,energy,delta_norm,peak", 0) == 0);
    std::filesystem::remove(path);
    cfg.dt = -1;
    CHECK_THROWS(evolve(testing::gaussian_field(L.grid), L.prm, L.kernel, L.prop, cfg));
}

TEST_CASE("the ground state is stationary up to phase") {
    ModelParams prm{6, Number(3), Number::parse("2.5"), -1, false};
    RadialGrid g = build_grid(GridSpec{6, 12, 512});
    auto basis = std::make_shared<const SpectralBasis>(g);
    RieszKernel K = build_kernel(g, 3.0);
    GroundState gs = petviashvili_solve(prm, *basis, K, default_initial_guess(g));
    Propagator prop = build_propagator(basis);
    EvolutionConfig cfg;
    cfg.t_end = 1.0;
    // The soliton is linearly unstable (s_c > 0): the O(dt²) splitting error grows roughly like e^{3t},
    // which at dt = 1e−3 lands just above 1e−4 by t = 1.
    cfg.dt = 5e-4;
    cfg.snapshot_stride = 200;
    Field u0 = to_complex(gs.phi);
    TrajectoryRecord rec = evolve(u0, prm, K, prop, cfg);
    REQUIRE(rec.cause == Termination::completed);
    Field modulus(u0.size()), phi_abs(u0.size());
    for (std::size_t i = 0; i < u0.size(); ++i) {
        modulus[i] = std::abs(rec.final_state[i]);
        phi_abs[i] = std::abs(gs.phi[i]);
    }
    CHECK(rel_diff(g, modulus, phi_abs) < 1e-4);
    CHECK(h2_norm(g, rec.final_state) == doctest::Approx(h2_norm(g, u0)).epsilon(1e-4));
}
