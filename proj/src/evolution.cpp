#include "hartree/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace hartree {

Propagator build_propagator(const RadialGrid& grid) { return Propagator{std::make_shared<SpectralBasis>(grid)}; }

Propagator build_propagator(std::shared_ptr<const SpectralBasis> basis) { return Propagator{std::move(basis)}; }

Field free_evolve(const Propagator& prop, const Field& u, double t) {
    const std::vector<double>& lam = prop.basis->lambda();
    std::vector<Complex> m(lam.size());
    for (std::size_t k = 0; k < lam.size(); ++k) m[k] = std::polar(1.0, lam[k] * lam[k] * t);
    return prop.basis->apply_multiplier(u, m);
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blowup_detected: return "blowup_detected";
        case Termination::boundary_contaminated: return "boundary_contaminated";
        case Termination::nan: return "nan";
    }
    return "unknown";
}

std::vector<double> TrajectoryRecord::series(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] != name) continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[c]);
        return out;
    }
    throw std::out_of_range("no trajectory column named " + name);
}

RealField nonlinear_multiplier(const ModelParams& prm, const RieszKernel& kernel, const Field& u) {
    const double p = prm.p.value();
    RealField V = hartree_potential(kernel, u, p);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double a = std::abs(u[i]);
        V[i] = a > 0 ? V[i] * std::pow(a, p - 2) : 0.0;
    }
    return V;
}

StepState make_state(const ModelParams& prm, const RieszKernel& kernel, const Field& u, bool nonlinear) {
    StepState s{u, RealField(u.size(), 0.0)};
    if (nonlinear) s.multiplier = nonlinear_multiplier(prm, kernel, u);
    return s;
}

namespace {

void phase(Field& u, const RealField& mult, double coeff) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::polar(1.0, coeff * mult[i]);
}

}  // namespace

void strang_step(StepState& st, double dt, const ModelParams& prm, const RieszKernel& kernel, const Propagator& prop,
                 bool nonlinear, const RealField& damping) {
    const double eps = prm.epsilon;
    // |u| is constant under the phase substep, so the multiplier from the end of
    // the previous step is exactly the one needed here.
    if (nonlinear) phase(st.u, st.multiplier, eps * 0.5 * dt);
    st.u = free_evolve(prop, st.u, dt);
    if (!damping.empty())
        for (std::size_t i = 0; i < st.u.size(); ++i) st.u[i] *= damping[i];
    if (nonlinear) {
        st.multiplier = nonlinear_multiplier(prm, kernel, st.u);
        phase(st.u, st.multiplier, eps * 0.5 * dt);
    }
}

double energy(const ModelParams& prm, const RadialGrid& grid, const RieszKernel& kernel, const Field& u) {
    const double p = prm.p.value();
    return mass(grid, laplacian(grid, u)) + prm.epsilon / p * hartree_energy(kernel, u, p);
}

RealField sponge_profile(const RadialGrid& grid, const EvolutionConfig& cfg) {
    RealField sigma(grid.r.size(), 0.0);
    const double rs = (1.0 - cfg.sponge_fraction) * grid.r_max();
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (grid.r[i] <= rs) continue;
        double x = (grid.r[i] - rs) / (grid.r_max() - rs);
        sigma[i] = cfg.sponge_strength * x * x;
    }
    return sigma;
}

TrajectoryRecord evolve(const Field& u0, const ModelParams& prm, const RieszKernel& kernel, const Propagator& prop,
                        const EvolutionConfig& cfg, const std::vector<DiagnosticHook>& hooks) {
    validate(prm);
    if (!(cfg.dt > 0) || !(cfg.t_end > 0)) throw std::invalid_argument("evolution needs dt > 0 and t_end > 0");
    if (cfg.snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be ≥ 1");
    const RadialGrid& grid = prop.grid();
    if (u0.size() != grid.r.size() || kernel.size() != grid.r.size())
        throw std::invalid_argument("initial data, kernel and propagator must share one grid");

    TrajectoryRecord rec;
    rec.columns = {"t", "mass", "energy", "delta_norm"};
    for (const auto& h : hooks) rec.columns.insert(rec.columns.end(), h.names.begin(), h.names.end());

    const double M0 = mass(grid, u0);
    const double D0 = laplacian_norm(grid, u0);
    const double E0 = energy(prm, grid, kernel, u0);
    const double escale = std::max(std::abs(E0), D0 * D0);
    const double wall = cfg.sponge ? 0.98 * grid.r_max() : 0.9 * grid.r_max();
    const RealField sigma = cfg.sponge ? sponge_profile(grid, cfg) : RealField{};

    std::size_t next_snapshot = 0;
    std::vector<double> snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());

    auto record = [&](double t, const Field& u, double E) {
        std::vector<double> row = {t, mass(grid, u), E, laplacian_norm(grid, u)};
        for (const auto& h : hooks) {
            std::vector<double> v = h.eval(t, u);
            if (v.size() != h.names.size()) throw std::logic_error("diagnostic hook returned wrong column count");
            row.insert(row.end(), v.begin(), v.end());
        }
        rec.rows.push_back(std::move(row));
        while (next_snapshot < snap_times.size() && t >= snap_times[next_snapshot] - 1e-12) {
            rec.snapshots.emplace_back(t, u);
            ++next_snapshot;
        }
    };

    StepState st = make_state(prm, kernel, u0, cfg.nonlinear);
    double t = 0, dt = cfg.dt, E_prev = E0;
    RealField damping;
    auto set_damping = [&] {
        damping.clear();
        if (!cfg.sponge) return;
        damping.resize(sigma.size());
        for (std::size_t i = 0; i < sigma.size(); ++i) damping[i] = std::exp(-sigma[i] * dt);
    };
    set_damping();
    record(0.0, st.u, E0);

    auto outer_fraction = [&](const Field& u) {
        if (M0 <= 0) return 0.0;
        double s = 0;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (grid.r[i] > wall) s += grid.w[i] * std::norm(u[i]);
        return s / M0;
    };

    bool stop = false;
    while (!stop && t < cfg.t_end * (1 - 1e-12)) {
        long remaining = std::max<long>(1, std::lround((cfg.t_end - t) / dt));
        long steps = std::min<long>(cfg.snapshot_stride, remaining);
        StepState backup = st;
        long done = 0;
        for (; done < steps; ++done) {
            strang_step(st, dt, prm, kernel, prop, cfg.nonlinear, damping);
            ++rec.steps;
            double dn = laplacian_norm(grid, st.u);
            if (!std::isfinite(dn)) {
                rec.cause = Termination::nan;
                rec.message = "non-finite field";
                stop = true;
            } else if (D0 > 0 && dn > cfg.blowup_factor * D0) {
                rec.cause = Termination::blowup_detected;
                rec.message = "‖Δu‖ exceeded blowup_factor·‖Δu(0)‖";
                stop = true;
            } else if (outer_fraction(st.u) > cfg.boundary_mass_cap) {
                rec.cause = Termination::boundary_contaminated;
                rec.message = "mass near r_max exceeded boundary_mass_cap";
                stop = true;
            }
            if (stop) {
                ++done;
                break;
            }
        }
        double t_new = t + done * dt;
        if (stop) {
            double E = rec.cause == Termination::nan ? std::nan("") : energy(prm, grid, kernel, st.u);
            t = t_new;
            record(t, st.u, E);
            break;
        }
        double E = energy(prm, grid, kernel, st.u);
        double rate = std::abs(E - E_prev) / (escale * (t_new - t));
        // The sponge removes energy by design, so drift only signals step error without it.
        if (cfg.adaptive_dt && cfg.nonlinear && !cfg.sponge && escale > 0 && rate > cfg.energy_drift_cap &&
            0.5 * dt >= cfg.min_dt) {
            st = backup;
            dt *= 0.5;
            ++rec.dt_halvings;
            set_damping();
            continue;
        }
        t = t_new;
        E_prev = E;
        record(t, st.u, E);
    }
    rec.final_state = st.u;
    rec.final_time = t;
    rec.final_dt = dt;
    return rec;
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    for (std::size_t c = 0; c < rec.columns.size(); ++c) os << (c ? "," : "") << rec.columns[c];
    os << "\r\n" << std::setprecision(17);
    for (const auto& row : rec.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << "\r\n";
    }
}

}  // namespace hartree
