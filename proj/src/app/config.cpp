#include "hartree/app/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hartree::app {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    long l = to_long(key, v);
    if (l < INT32_MIN || l > INT32_MAX) throw ConfigError(key + ": integer out of range");
    return static_cast<int>(l);
}

bool to_bool(const std::string& key, const std::string& v) {
    std::string s = v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.starts_with('[')) item = trim(item.substr(1));
        if (item.ends_with(']')) item = trim(item.substr(0, item.size() - 1));
        if (item.empty()) continue;
        out.push_back(to_double(key, item));
    }
    return out;
}

Number to_number(const std::string& key, const std::string& v) {
    try {
        return Number::parse(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"experiment", [](auto& c, auto&, auto& v) { c.experiment = v; }},
        {"output.dir", [](auto& c, auto&, auto& v) { c.out_dir = v; }},
        {"kernel.cache", [](auto& c, auto&, auto& v) { c.kernel_cache = v; }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = static_cast<unsigned>(to_long(k, v)); }},
        {"threads", [](auto& c, auto& k, auto& v) { c.threads = static_cast<unsigned>(to_long(k, v)); }},

        {"model.N", [](auto& c, auto& k, auto& v) { c.model.N = to_int(k, v); }},
        {"model.alpha", [](auto& c, auto& k, auto& v) { c.model.alpha = to_number(k, v); }},
        {"model.p", [](auto& c, auto& k, auto& v) { c.model.p = to_number(k, v); }},
        {"model.epsilon", [](auto& c, auto& k, auto& v) { c.model.epsilon = to_int(k, v); }},
        {"model.allow_p_below_2", [](auto& c, auto& k, auto& v) { c.model.allow_p_below_2 = to_bool(k, v); }},

        {"grid.M", [](auto& c, auto& k, auto& v) { c.grid.M = to_int(k, v); }},
        {"grid.r_max", [](auto& c, auto& k, auto& v) { c.grid.r_max = to_double(k, v); }},
        {"grid.stretch", [](auto& c, auto& k, auto& v) { c.grid.stretch = to_double(k, v); }},
        {"grid.grading",
         [](auto& c, auto& k, auto& v) {
             if (v == "uniform")
                 c.grid.grading = Grading::uniform;
             else if (v == "geometric")
                 c.grid.grading = Grading::geometric;
             else
                 throw ConfigError(k + ": expected uniform or geometric");
         }},

        {"kernel.angular_points", [](auto& c, auto& k, auto& v) { c.kernel.angular_points = to_int(k, v); }},
        {"kernel.near_factor", [](auto& c, auto& k, auto& v) { c.kernel.near_factor = to_int(k, v); }},
        {"kernel.near_band", [](auto& c, auto& k, auto& v) { c.kernel.near_band = to_int(k, v); }},

        {"solver.tol", [](auto& c, auto& k, auto& v) { c.solver.tol = to_double(k, v); }},
        {"solver.max_iter", [](auto& c, auto& k, auto& v) { c.solver.max_iter = to_int(k, v); }},
        {"solver.residual_cert", [](auto& c, auto& k, auto& v) { c.solver.residual_cert = to_double(k, v); }},
        {"solver.pohozaev_cert", [](auto& c, auto& k, auto& v) { c.solver.pohozaev_cert = to_double(k, v); }},

        {"evolve.dt", [](auto& c, auto& k, auto& v) { c.evolve.dt = to_double(k, v); }},
        {"evolve.t_end", [](auto& c, auto& k, auto& v) { c.evolve.t_end = to_double(k, v); }},
        {"evolve.snapshot_stride", [](auto& c, auto& k, auto& v) { c.evolve.snapshot_stride = to_int(k, v); }},
        {"evolve.blowup_factor", [](auto& c, auto& k, auto& v) { c.evolve.blowup_factor = to_double(k, v); }},
        {"evolve.boundary_mass_cap", [](auto& c, auto& k, auto& v) { c.evolve.boundary_mass_cap = to_double(k, v); }},
        {"evolve.sponge", [](auto& c, auto& k, auto& v) { c.evolve.sponge = to_bool(k, v); }},
        {"evolve.sponge_strength", [](auto& c, auto& k, auto& v) { c.evolve.sponge_strength = to_double(k, v); }},
        {"evolve.sponge_fraction", [](auto& c, auto& k, auto& v) { c.evolve.sponge_fraction = to_double(k, v); }},
        {"evolve.adaptive_dt", [](auto& c, auto& k, auto& v) { c.evolve.adaptive_dt = to_bool(k, v); }},
        {"evolve.energy_drift_cap", [](auto& c, auto& k, auto& v) { c.evolve.energy_drift_cap = to_double(k, v); }},
        {"evolve.min_dt", [](auto& c, auto& k, auto& v) { c.evolve.min_dt = to_double(k, v); }},
        {"evolve.nonlinear", [](auto& c, auto& k, auto& v) { c.evolve.nonlinear = to_bool(k, v); }},
        {"evolve.snapshot_times", [](auto& c, auto& k, auto& v) { c.evolve.snapshot_times = to_list(k, v); }},

        {"init.amplitude", [](auto& c, auto& k, auto& v) { c.init.amplitude = to_double(k, v); }},
        {"init.width", [](auto& c, auto& k, auto& v) { c.init.width = to_double(k, v); }},

        {"scan.lambdas", [](auto& c, auto& k, auto& v) { c.scan.lambdas = to_list(k, v); }},
        {"scan.confirm", [](auto& c, auto& k, auto& v) { c.scan.confirm = to_bool(k, v); }},

        {"morawetz.both_signs", [](auto& c, auto& k, auto& v) { c.morawetz.both_signs = to_bool(k, v); }},
        {"morawetz.tolerance_ratio", [](auto& c, auto& k, auto& v) { c.morawetz.tolerance_ratio = to_double(k, v); }},

        {"convergence.levels", [](auto& c, auto& k, auto& v) { c.convergence.levels = to_int(k, v); }},
        {"convergence.min_order", [](auto& c, auto& k, auto& v) { c.convergence.min_order = to_double(k, v); }},

        {"diagnostics.R_report", [](auto& c, auto& k, auto& v) { c.diagnostics.R_report = to_double(k, v); }},
        {"diagnostics.weight",
         [](auto& c, auto& k, auto& v) {
             if (v == "abs_x")
                 c.diagnostics.weight.kind = RadialWeight::Kind::abs_x;
             else if (v == "virial")
                 c.diagnostics.weight.kind = RadialWeight::Kind::f_R;
             else
                 throw ConfigError(k + ": expected abs_x or virial");
         }},
        {"diagnostics.virial_R", [](auto& c, auto& k, auto& v) { c.diagnostics.weight.R = to_double(k, v); }},
    };
    return table;
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    std::string v;
    if (j.is_string())
        v = j.get<std::string>();
    else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) throw ConfigError(prefix + ": arrays must hold numbers");
            v += (i ? "," : "") + j[i].dump();
        }
    } else
        v = j.dump();
    out.emplace_back(prefix, v);
}

}  // namespace

std::vector<std::string> known_keys() {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second(cfg, key, trim(value));
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
    std::string t = trim(text);
    if (t.starts_with('{')) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("invalid JSON config: ") + e.what());
        }
        std::vector<std::pair<std::string, std::string>> kv;
        flatten(j, "", kv);
        for (const auto& [k, v] : kv) set_key(cfg, k, v);
        return cfg;
    }
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        set_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

void validate_config(const ExperimentConfig& c) {
    static const std::vector<std::string> kinds = {"exponents",      "ground-state",    "evolve",
                                                   "dichotomy-scan", "morawetz-check", "convergence"};
    if (std::find(kinds.begin(), kinds.end(), c.experiment) == kinds.end())
        throw ConfigError("unknown experiment '" + c.experiment + "'");
    validate(c.model);
    if (c.experiment == "exponents") return;

    if (c.grid.M < 16) throw ConfigError("grid.M must be at least 16");
    if (!(c.grid.r_max > 0)) throw ConfigError("grid.r_max must be positive");
    if (c.grid.grading == Grading::geometric && !(c.grid.stretch > 0))
        throw ConfigError("grid.stretch must be positive");
    if (!(c.model.alpha.value() > 1)) throw DomainError("the radial kernel supports α > 1 only");
    if (c.kernel.angular_points < 2 || c.kernel.near_factor < 1 || c.kernel.near_band < 0)
        throw ConfigError("kernel quadrature options out of range");
    if (!(c.solver.tol > 0) || c.solver.max_iter < 1) throw ConfigError("solver.tol > 0 and solver.max_iter ≥ 1 required");
    if (!(c.evolve.dt > 0) || !(c.evolve.t_end > 0)) throw ConfigError("evolve.dt and evolve.t_end must be positive");
    if (c.evolve.snapshot_stride < 1) throw ConfigError("evolve.snapshot_stride must be ≥ 1");
    if (!(c.evolve.sponge_fraction > 0 && c.evolve.sponge_fraction < 1))
        throw ConfigError("evolve.sponge_fraction must lie in (0, 1)");
    if (!(c.init.width > 0)) throw ConfigError("init.width must be positive");
    if (!(c.diagnostics.R_report > 0)) throw ConfigError("diagnostics.R_report must be positive");
    if (c.diagnostics.weight.kind == RadialWeight::Kind::f_R && !(c.diagnostics.weight.R > 0))
        throw ConfigError("diagnostics.virial_R must be positive");

    if ((c.experiment == "ground-state" || c.experiment == "dichotomy-scan") && c.model.epsilon != -1)
        throw DomainError(c.experiment + " needs the focusing sign model.epsilon = -1");
    if (c.experiment == "dichotomy-scan" && c.scan.lambdas.empty()) throw ConfigError("scan.lambdas is empty");
    if (c.experiment == "morawetz-check" || c.experiment == "convergence") {
        if (c.diagnostics.weight.kind == RadialWeight::Kind::abs_x && c.model.N < 5)
            throw DomainError("the weight |x| needs N ≥ 5; use diagnostics.weight = virial");
    }
    if (c.experiment == "convergence" && c.convergence.levels < 2)
        throw ConfigError("convergence.levels must be at least 2: a single level has no order");
}

}  // namespace hartree::app
