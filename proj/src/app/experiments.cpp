#include "hartree/app/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <thread>

namespace hartree::app {

namespace {

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

Json params_json(const ModelParams& m) {
    Json j;
    j["N"] = m.N;
    j["alpha"] = m.alpha.str();
    j["p"] = m.p.str();
    j["epsilon"] = m.epsilon;
    return j;
}

Json grid_json(const RadialGrid& g) {
    Json j;
    j["M"] = g.M();
    j["r_max"] = g.r_max();
    j["grading"] = g.grading_tag();
    j["h"] = g.h();
    return j;
}

KernelOptions kernel_options(const ExperimentConfig& cfg) {
    KernelOptions k = cfg.kernel;
    if (cfg.threads > 0) k.threads = cfg.threads;
    return k;
}

GridSpec grid_spec(const ExperimentConfig& cfg, int refine = 1) {
    GridSpec g = cfg.grid;
    g.N = cfg.model.N;
    g.M *= refine;
    return g;
}

Workspace workspace(const ExperimentConfig& cfg, std::ostream& log, int refine = 1) {
    GridSpec g = grid_spec(cfg, refine);
    log << "building workspace M=" << g.M << " r_max=" << g.r_max << "\n" << std::flush;
    return make_workspace(cfg.model, g, kernel_options(cfg), cfg.kernel_cache);
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    unsigned nt = std::max(1u, std::min<unsigned>(threads ? threads : 1, static_cast<unsigned>(n)));
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(err_mtx);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

Json series_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(json_number(x));
    return a;
}

GroundState solve_ground_state(const ExperimentConfig& cfg, const Workspace& ws) {
    return petviashvili_solve(cfg.model, *ws.basis, *ws.kernel, default_initial_guess(ws.grid()), cfg.solver);
}

}  // namespace

Workspace make_workspace(const ModelParams& model, const GridSpec& spec, const KernelOptions& kopts,
                         const std::string& cache_dir) {
    GridSpec g = spec;
    g.N = model.N;
    RadialGrid grid = build_grid(g);
    auto basis = std::make_shared<const SpectralBasis>(grid);
    auto kernel =
        std::make_shared<const RieszKernel>(load_or_build_kernel(basis->grid(), model.alpha.value(), kopts, cache_dir));
    return Workspace{basis, kernel, build_propagator(basis)};
}

Field initial_data(const RadialGrid& grid, const InitialData& init) {
    const double a = init.amplitude, w = init.width;
    return sample_complex(grid, [a, w](double r) { return Complex(a * std::exp(-(r / w) * (r / w)), 0.0); });
}

IdentityRun morawetz_identity_run(const ModelParams& model, const Workspace& ws, const Field& u0, double dt,
                                  double t_end, const RadialWeight& weight) {
    const RadialGrid& g = ws.grid();
    WeightCoefficients coeffs = weight_coefficients(g, weight);
    IdentityRun run;
    run.M = g.M();
    run.dt = dt;
    run.epsilon = model.epsilon;
    const long steps = std::lround(t_end / dt);
    const double total_mass = mass(g, u0);
    std::vector<double> action, rate;
    StepState st = make_state(model, *ws.kernel, u0);
    double prev_integrand = 0;
    for (long k = 0; k <= steps + 1; ++k) {
        action.push_back(morawetz_action(g, st.u, coeffs));
        MorawetzRate mr = morawetz_rate(model, g, *ws.kernel, st.u, coeffs);
        rate.push_back(mr.rate);
        if (k == 0) run.origin_atom0 = mr.origin_atom;
        double integrand = morawetz_integrand(model, g, *ws.kernel, st.u);
        if (k > 0 && k <= steps) run.morawetz_cum += 0.5 * dt * (integrand + prev_integrand);
        prev_integrand = integrand;
        double outer = 0;
        for (std::size_t i = 0; i < g.r.size(); ++i)
            if (g.r[i] > 0.8 * g.r_max()) outer += g.w[i] * std::norm(st.u[i]);
        if (total_mass > 0) run.max_outer_fraction = std::max(run.max_outer_fraction, outer / total_mass);
        strang_step(st, dt, model, *ws.kernel, ws.prop);
    }
    for (long k = 1; k <= steps; ++k) {
        double fd = (action[k + 1] - action[k - 1]) / (2 * dt);
        run.t.push_back(k * dt);
        run.dMdt.push_back(fd);
        run.rate.push_back(rate[k]);
        run.residual.push_back(std::abs(fd - rate[k]));
        run.max_residual = std::max(run.max_residual, run.residual.back());
        run.rate_scale = std::max(run.rate_scale, std::abs(rate[k]));
    }
    return run;
}

double fitted_order(const std::vector<double>& steps, const std::vector<double>& errors) {
    if (steps.size() != errors.size() || steps.size() < 2)
        throw std::invalid_argument("an order fit needs at least two levels");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
        double x = std::log(steps[k]), y = std::log(errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScanPoint classify_scan_point(const ExperimentConfig& cfg, const Workspace& ws, const GroundState& gs, double lambda,
                              const std::function<const Workspace*()>& fine) {
    const RadialGrid& g = ws.grid();
    InitialData init = cfg.init;
    init.amplitude = lambda;
    Field u0 = initial_data(g, init);
    ScanPoint pt;
    pt.lambda = lambda;
    if (lambda == 0.0) {
        pt.defect_decreasing = true;
        pt.final_time = cfg.evolve.t_end;
        pt.classification = "global+scattering-indicated";
        return pt;
    }
    Thresholds th0 = thresholds(cfg.model, g, *ws.kernel, u0, gs);
    pt.MG0 = th0.MG;
    pt.ME0 = th0.ME;

    EvolutionConfig ec = cfg.evolve;
    const double T = ec.t_end;
    ec.snapshot_times = {T / 4, T / 2, T};
    const ModelParams model = cfg.model;
    const RieszKernel* K = ws.kernel.get();
    DiagnosticHook mg{{"MG"}, [&, K](double, const Field& u) {
                          return std::vector<double>{thresholds(model, g, *K, u, gs).MG};
                      }};
    TrajectoryRecord rec = evolve(u0, model, *ws.kernel, ws.prop, ec, {mg});
    pt.cause = rec.cause;
    pt.final_time = rec.final_time;
    std::vector<double> MG = rec.series("MG"), dn = rec.series("delta_norm");
    pt.sup_MG = *std::max_element(MG.begin(), MG.end());
    pt.max_growth = *std::max_element(dn.begin(), dn.end()) / dn.front();

    if (rec.cause == Termination::completed && rec.snapshots.size() == 3) {
        std::vector<Field> v;
        for (const auto& [t, u] : rec.snapshots) v.push_back(scattering_profile(ws.prop, u, t));
        double d1 = cauchy_defect(g, v[1], v[0]), d2 = cauchy_defect(g, v[2], v[1]);
        pt.defect_decreasing = d2 < d1;
    }

    switch (rec.cause) {
        case Termination::completed:
            pt.classification =
                pt.sup_MG < 1 && pt.defect_decreasing ? "global+scattering-indicated" : "inconclusive";
            break;
        case Termination::blowup_detected: {
            const Workspace* f = fine ? fine() : nullptr;
            if (!f) {
                pt.classification = "blow-up-indicated";
                break;
            }
            Field uf = initial_data(f->grid(), init);
            EvolutionConfig efine = cfg.evolve;
            efine.dt *= 0.5;
            efine.snapshot_stride *= 2;
            TrajectoryRecord rf = evolve(uf, model, *f->kernel, f->prop, efine);
            pt.confirmed = rf.cause == Termination::blowup_detected;
            pt.classification = pt.confirmed ? "blow-up-indicated" : "inconclusive";
            break;
        }
        default:
            pt.classification = "inconclusive";
    }
    return pt;
}

int run_exponents(const ExperimentConfig& cfg, std::ostream& log) {
    auto table = exponent_table(cfg.model);
    StrichartzPairs sp = strichartz_pairs(cfg.model);
    Json report;
    report["params"] = params_json(cfg.model);
    Json t;
    for (const auto& [k, v] : table) {
        t[k] = v;
        log << k << " = " << v << "\n";
    }
    report["exponents"] = t;
    Json pairs = Json::array();
    auto add_pair = [&](const std::string& name, const AdmissiblePair& pr) {
        bool ok = admissible(pr.q, pr.r, cfg.model.N);
        pairs.push_back({{"name", name}, {"q", pr.q.str()}, {"r", pr.r.str()}, {"admissible", ok}});
        log << name << " = (" << pr.q.str() << ", " << pr.r.str() << ") admissible=" << (ok ? "true" : "false")
            << "\n";
    };
    add_pair("qr", sp.qr);
    add_pair("qr1", sp.qr1);
    report["pairs"] = pairs;
    report["a"] = sp.a.str();
    report["m"] = sp.m.str();
    ensure_directory(cfg.out_dir);
    write_json(out_path(cfg, "exponents.json"), report);
    return exit_ok;
}

int run_ground_state(const ExperimentConfig& cfg, std::ostream& log) {
    Workspace ws = workspace(cfg, log);
    GroundState gs;
    try {
        gs = solve_ground_state(cfg, ws);
    } catch (const SolverError& e) {
        log << "ground state: " << e.what() << "\n";
        return exit_no_convergence;
    }
    PohozaevResiduals po = pohozaev_residuals(cfg.model, gs);
    DerivedExponents d = derive_exponents(cfg.model);
    const double J = weinstein_J(cfg.model, ws.grid(), *ws.kernel, to_complex(gs.phi));
    const bool ok = certified(cfg.model, gs, cfg.solver);

    Json report;
    report["params"] = params_json(cfg.model);
    report["grid"] = grid_json(ws.grid());
    report["mass"] = gs.mass;
    report["energy"] = gs.energy;
    report["delta_norm"] = gs.delta_norm;
    report["potential_energy"] = gs.potential_energy;
    report["C"] = gs.sharp_C;
    report["C_from_J"] = 1.0 / J;
    report["m"] = gs.action_m;
    report["iterations"] = gs.iterations;
    report["sign_changes"] = gs.sign_changes;
    report["core_decreasing"] = gs.core_decreasing;
    report["residuals"] = {{"equation", gs.residual},
                           {"res_K", po.res_K},
                           {"res_EB", po.res_EB},
                           {"res_EA", po.res_EA},
                           {"ratio_E_D2", po.ratio_E_D2},
                           {"ratio_expected", ((d.B - 2) / d.B).str()}};
    report["thresholds"] = {{"residual_cert", cfg.solver.residual_cert}, {"pohozaev_cert", cfg.solver.pohozaev_cert}};
    report["certified"] = ok;
    ensure_directory(cfg.out_dir);
    write_json(out_path(cfg, "ground_state.json"), report);
    CsvWriter csv({"r", "phi"});
    for (std::size_t i = 0; i < gs.phi.size(); ++i) csv.add_numeric_row({ws.grid().r[i], gs.phi[i]});
    csv.write(out_path(cfg, "ground_state_profile.csv"));
    log << "ground state: mass=" << gs.mass << " energy=" << gs.energy << " residual=" << gs.residual
        << " certified=" << (ok ? "yes" : "no") << "\n";
    return ok ? exit_ok : exit_certification_failed;
}

int run_evolve(const ExperimentConfig& cfg, std::ostream& log) {
    Workspace ws = workspace(cfg, log);
    const RadialGrid& g = ws.grid();
    Field u0 = initial_data(g, cfg.init);
    auto hooks = trajectory_hooks(cfg.model, g, *ws.kernel, ws.prop, cfg.diagnostics);
    TrajectoryRecord rec = evolve(u0, cfg.model, *ws.kernel, ws.prop, cfg.evolve, hooks);

    ensure_directory(cfg.out_dir);
    CsvWriter csv(rec.columns);
    for (const auto& row : rec.rows) csv.add_numeric_row(row);
    csv.write(out_path(cfg, "trajectory.csv"));
    Json snaps = Json::array();
    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        std::string name = "snapshot_" + std::to_string(k) + ".csv";
        write_snapshot_csv(out_path(cfg, name), g, rec.snapshots[k].second);
        snaps.push_back({{"t", rec.snapshots[k].first}, {"file", name}});
    }

    DerivedExponents d = derive_exponents(cfg.model);
    std::vector<double> t = rec.series("t"), m = rec.series("mass"), E = rec.series("energy");
    std::vector<double> nd = rec.series("norm_decay"), nr = rec.series("norm_r");
    double mass_drift = 0, energy_drift = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        mass_drift = std::max(mass_drift, std::abs(m[k] - m[0]) / m[0]);
        if (std::isfinite(E[k])) energy_drift = std::max(energy_drift, std::abs(E[k] - E[0]));
    }
    MixedNorm mn = mixed_norm(t, nr, d.a_strichartz.value());
    Json report;
    report["params"] = params_json(cfg.model);
    report["grid"] = grid_json(g);
    report["termination"] = to_string(rec.cause);
    report["message"] = rec.message;
    report["final_time"] = rec.final_time;
    report["final_dt"] = rec.final_dt;
    report["dt_halvings"] = rec.dt_halvings;
    report["steps"] = rec.steps;
    report["mass_drift_relative"] = mass_drift;
    report["energy_drift_max"] = energy_drift;
    report["norm_decay_final_over_peak"] = nd.back() / *std::max_element(nd.begin(), nd.end());
    report["strichartz_norm"] = {{"q", d.a_strichartz.str()},
                                 {"r", d.r_strichartz.str()},
                                 {"value", json_number(mn.value)},
                                 {"sparse", mn.sparse}};
    report["morawetz_cum"] = rec.series("morawetz_cum").back();
    report["snapshots"] = snaps;
    write_json(out_path(cfg, "evolve.json"), report);
    log << "evolve: " << to_string(rec.cause) << " at t=" << rec.final_time << " after " << rec.steps << " steps\n";
    return exit_ok;
}

int run_dichotomy_scan(const ExperimentConfig& cfg, std::ostream& log) {
    Workspace ws = workspace(cfg, log);
    GroundState gs;
    try {
        gs = solve_ground_state(cfg, ws);
    } catch (const SolverError& e) {
        log << "ground state: " << e.what() << "\n";
        return exit_no_convergence;
    }
    std::once_flag once;
    std::unique_ptr<Workspace> fine;
    std::function<const Workspace*()> provider;
    if (cfg.scan.confirm)
        provider = [&]() -> const Workspace* {
            std::call_once(once, [&] { fine = std::make_unique<Workspace>(workspace(cfg, log, 2)); });
            return fine.get();
        };
    std::vector<ScanPoint> pts(cfg.scan.lambdas.size());
    parallel_for(pts.size(), cfg.threads, [&](std::size_t k) {
        pts[k] = classify_scan_point(cfg, ws, gs, cfg.scan.lambdas[k], provider);
    });

    ensure_directory(cfg.out_dir);
    CsvWriter csv({"lambda", "MG0", "ME0", "sup_MG", "max_growth", "termination", "final_time", "defect_decreasing",
                   "confirmed", "classification"});
    Json rows = Json::array();
    for (const auto& p : pts) {
        csv.add_row({format_number(p.lambda), format_number(p.MG0), p.ME0 ? format_number(*p.ME0) : "",
                     format_number(p.sup_MG), format_number(p.max_growth), to_string(p.cause),
                     format_number(p.final_time), p.defect_decreasing ? "true" : "false",
                     p.confirmed ? "true" : "false", p.classification});
        rows.push_back({{"lambda", p.lambda},
                        {"MG0", p.MG0},
                        {"ME0", p.ME0 ? Json(*p.ME0) : Json(nullptr)},
                        {"sup_MG", p.sup_MG},
                        {"max_growth", p.max_growth},
                        {"termination", to_string(p.cause)},
                        {"final_time", p.final_time},
                        {"defect_decreasing", p.defect_decreasing},
                        {"confirmed", p.confirmed},
                        {"classification", p.classification}});
        log << "lambda=" << p.lambda << " MG0=" << p.MG0 << " -> " << p.classification << "\n";
    }
    csv.write(out_path(cfg, "dichotomy_scan.csv"));
    Json report;
    report["params"] = params_json(cfg.model);
    report["grid"] = grid_json(ws.grid());
    report["conventions"] = {
        {"blowup_factor", cfg.evolve.blowup_factor},
        {"blowup_confirmation", cfg.scan.confirm ? "rerun at 2x radial resolution and dt/2" : "none"},
        {"scattering_indicator", "cauchy_defect(T/2,T) < cauchy_defect(T/4,T/2) and sup_t MG < 1"},
        {"profile", "lambda * exp(-(r/width)^2)"},
        {"width", cfg.init.width},
        {"note", "finite-time proxies for an asymptotic dichotomy"}};
    report["ground_state"] = {{"mass", gs.mass}, {"delta_norm", gs.delta_norm}, {"energy", gs.energy}};
    report["points"] = rows;
    write_json(out_path(cfg, "dichotomy_scan.json"), report);
    return exit_ok;
}

int run_morawetz_check(const ExperimentConfig& cfg, std::ostream& log) {
    std::vector<int> signs = cfg.morawetz.both_signs ? std::vector<int>{1, -1} : std::vector<int>{cfg.model.epsilon};
    std::vector<Workspace> levels;
    levels.push_back(workspace(cfg, log, 1));
    levels.push_back(workspace(cfg, log, 2));
    const RadialWeight weight = cfg.diagnostics.weight;

    Json runs = Json::array();
    bool pass = true;
    Json ratios;
    for (int eps : signs) {
        ModelParams m = cfg.model;
        m.epsilon = eps;
        std::vector<IdentityRun> rs;
        for (std::size_t l = 0; l < levels.size(); ++l) {
            Field u0 = initial_data(levels[l].grid(), cfg.init);
            double dt = cfg.evolve.dt / static_cast<double>(1 << l);
            rs.push_back(morawetz_identity_run(m, levels[l], u0, dt, cfg.evolve.t_end, weight));
            const IdentityRun& r = rs.back();
            log << "eps=" << eps << " M=" << r.M << " max|dM/dt - rate|=" << r.max_residual
                << " scale=" << r.rate_scale << "\n";
            runs.push_back({{"epsilon", eps},
                            {"M", r.M},
                            {"dt", r.dt},
                            {"max_residual", r.max_residual},
                            {"rate_scale", r.rate_scale},
                            {"max_outer_fraction", r.max_outer_fraction},
                            {"morawetz_cum", r.morawetz_cum},
                            {"origin_atom_t0", r.origin_atom0},
                            {"t_k", series_json(r.t)},
                            {"dM/dt", series_json(r.dMdt)},
                            {"rate", series_json(r.rate)},
                            {"residual", series_json(r.residual)}});
        }
        double ratio = rs[0].max_residual / rs[1].max_residual;
        ratios[eps > 0 ? "defocusing" : "focusing"] = json_number(ratio);
        if (!(ratio >= cfg.morawetz.tolerance_ratio)) pass = false;
    }
    Field real_data = initial_data(levels[0].grid(), cfg.init);
    double action_real = morawetz_action(levels[0].grid(), real_data, weight);
    if (action_real != 0.0) pass = false;

    ensure_directory(cfg.out_dir);
    Json report;
    report["params"] = params_json(cfg.model);
    report["weight"] = weight.kind == RadialWeight::Kind::abs_x ? "abs_x" : "virial";
    report["required_ratio"] = cfg.morawetz.tolerance_ratio;
    report["ratios"] = ratios;
    report["action_real_data"] = action_real;
    report["runs"] = runs;
    report["pass"] = pass;
    write_json(out_path(cfg, "morawetz_check.json"), report);
    return pass ? exit_ok : exit_morawetz_failed;
}

int run_convergence(const ExperimentConfig& cfg, std::ostream& log) {
    const int L = cfg.convergence.levels;
    CsvWriter csv({"ladder", "level", "M", "dt", "error"});
    Json ladders;
    bool pass = true;
    auto finish = [&](const std::string& name, const std::vector<double>& steps, const std::vector<double>& err,
                      const std::vector<int>& Ms, const std::vector<double>& dts) {
        double order = fitted_order(steps, err);
        for (int k = 0; k < L; ++k)
            csv.add_row({name, std::to_string(k), std::to_string(Ms[k]), format_number(dts[k]), format_number(err[k])});
        ladders[name] = {{"errors", series_json(err)}, {"order", json_number(order)}};
        log << name << ": fitted order " << order << "\n";
        if (!(order >= cfg.convergence.min_order)) pass = false;
    };

    std::vector<Workspace> ws;
    for (int k = 0; k < L; ++k) ws.push_back(workspace(cfg, log, 1 << k));

    {  // energy drift under dt refinement on the base grid
        std::vector<double> steps, err, dts;
        std::vector<int> Ms;
        Field u0 = initial_data(ws[0].grid(), cfg.init);
        for (int k = 0; k < L; ++k) {
            EvolutionConfig ec = cfg.evolve;
            ec.dt = cfg.evolve.dt / (1 << k);
            ec.adaptive_dt = false;
            ec.snapshot_stride = 1 << k;
            ec.snapshot_times.clear();
            TrajectoryRecord rec = evolve(u0, cfg.model, *ws[0].kernel, ws[0].prop, ec);
            std::vector<double> E = rec.series("energy");
            double drift = 0;
            for (double e : E) drift = std::max(drift, std::abs(e - E[0]));
            steps.push_back(ec.dt);
            dts.push_back(ec.dt);
            Ms.push_back(ws[0].grid().M());
            err.push_back(drift);
        }
        finish("energy_drift", steps, err, Ms, dts);
    }
    {  // Morawetz identity residual under joint (dt, h) refinement
        std::vector<double> steps, err, dts;
        std::vector<int> Ms;
        for (int k = 0; k < L; ++k) {
            double dt = cfg.evolve.dt / (1 << k);
            IdentityRun r = morawetz_identity_run(cfg.model, ws[k], initial_data(ws[k].grid(), cfg.init), dt,
                                                  cfg.evolve.t_end, cfg.diagnostics.weight);
            steps.push_back(ws[k].grid().h());
            dts.push_back(dt);
            Ms.push_back(ws[k].grid().M());
            err.push_back(r.max_residual);
        }
        finish("morawetz_residual", steps, err, Ms, dts);
    }
    {  // Gaussian Hartree energy against its closed form
        const double p = cfg.model.p.value();
        const double exact = gaussian_hartree_energy(cfg.model.N, cfg.model.alpha.value(), p);
        std::vector<double> steps, err, dts;
        std::vector<int> Ms;
        for (int k = 0; k < L; ++k) {
            Field g = initial_data(ws[k].grid(), InitialData{1.0, 1.0});
            steps.push_back(ws[k].grid().h());
            dts.push_back(0.0);
            Ms.push_back(ws[k].grid().M());
            err.push_back(std::abs(hartree_energy(*ws[k].kernel, g, p) - exact) / exact);
        }
        finish("gaussian_hartree_energy", steps, err, Ms, dts);
    }

    ensure_directory(cfg.out_dir);
    csv.write(out_path(cfg, "convergence.csv"));
    Json report;
    report["params"] = params_json(cfg.model);
    report["levels"] = L;
    report["min_order"] = cfg.convergence.min_order;
    report["ladders"] = ladders;
    report["pass"] = pass;
    write_json(out_path(cfg, "convergence.json"), report);
    return pass ? exit_ok : exit_order_failed;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    try {
        validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        log << "invalid configuration: " << e.what() << "\n";
        return exit_invalid_params;
    }
    try {
        if (cfg.experiment == "exponents") return run_exponents(cfg, log);
        if (cfg.experiment == "ground-state") return run_ground_state(cfg, log);
        if (cfg.experiment == "evolve") return run_evolve(cfg, log);
        if (cfg.experiment == "dichotomy-scan") return run_dichotomy_scan(cfg, log);
        if (cfg.experiment == "morawetz-check") return run_morawetz_check(cfg, log);
        if (cfg.experiment == "convergence") return run_convergence(cfg, log);
    } catch (const DomainError& e) {
        log << "invalid parameters: " << e.what() << "\n";
        return exit_invalid_params;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_runtime_error;
    }
    return exit_invalid_params;
}

}  // namespace hartree::app
