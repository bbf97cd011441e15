#include "vhj/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vhj/errors.hpp"

namespace vhj {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError("key '" + key + "': not a number: '" + v + "'");
    }
}

long to_long(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> to_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    for (const std::string& tok : split(v, ','))
        if (!tok.empty()) out.push_back(to_double(tok, key));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

// "x" (1D) or "x;y" (2D)
Point to_point(const std::string& v, const std::string& key, int* dim_out = nullptr) {
    std::vector<std::string> parts = split(v, ';');
    if (parts.size() == 1) {
        if (dim_out) *dim_out = 1;
        return {to_double(parts[0], key), 0.0};
    }
    if (parts.size() == 2) {
        if (dim_out) *dim_out = 2;
        return {to_double(parts[0], key), to_double(parts[1], key)};
    }
    throw ConfigError("key '" + key + "': expected 'x' or 'x;y'");
}

// Collects the sub-map under `prefix.` and checks every collected key is
// consumed by the field constructor.
std::map<std::string, std::string> submap(const std::map<std::string, std::string>& kv,
                                          const std::string& prefix) {
    std::map<std::string, std::string> out;
    const std::string p = prefix + ".";
    for (const auto& [k, v] : kv)
        if (k.rfind(p, 0) == 0) out[k.substr(p.size())] = v;
    return out;
}

const std::set<std::string>& field_param_keys() {
    static const std::set<std::string> keys = {"form",  "value", "c0",    "c1",   "cx",  "cy",
                                               "q",     "x0",    "y0",    "amp",  "freq", "axis",
                                               "phase", "cap",   "slope", "t0",   "t1",  "v0",
                                               "v1",    "shift", "k",     "clip_floor"};
    return keys;
}

ScalarField field_from(const std::map<std::string, std::string>& kv, const std::string& prefix) {
    auto params = submap(kv, prefix);
    if (params.empty()) throw ConfigError("missing field definition under '" + prefix + ".*'");
    for (const auto& [k, v] : params)
        if (!field_param_keys().count(k))
            throw ConfigError("unknown key '" + prefix + "." + k + "'");
    return ScalarField::from_params(params, prefix);
}

bool has_prefix(const std::map<std::string, std::string>& kv, const std::string& prefix) {
    const std::string p = prefix + ".";
    for (const auto& [k, v] : kv)
        if (k.rfind(p, 0) == 0) return true;
    return false;
}

Shape parse_outer_shape(const std::map<std::string, std::string>& kv, const std::string& kind_key,
                        const std::string& kind) {
    if (kind == "interval") {
        auto lo = kv.find("domain.min");
        auto hi = kv.find("domain.max");
        if (lo == kv.end() || hi == kv.end())
            throw ConfigError("interval domain requires domain.min and domain.max");
        return Shape::interval(to_double(lo->second, "domain.min"),
                               to_double(hi->second, "domain.max"));
    }
    if (kind == "box") {
        auto lo = kv.find("domain.min");
        auto hi = kv.find("domain.max");
        if (lo == kv.end() || hi == kv.end())
            throw ConfigError("box domain requires domain.min and domain.max (x;y pairs)");
        return Shape::box(to_point(lo->second, "domain.min"), to_point(hi->second, "domain.max"));
    }
    if (kind == "ball") {
        auto c = kv.find("domain.center");
        auto r = kv.find("domain.radius");
        if (c == kv.end() || r == kv.end())
            throw ConfigError("ball domain requires domain.center and domain.radius");
        int dim = 2;
        Point center = to_point(c->second, "domain.center", &dim);
        return Shape::ball(center, to_double(r->second, "domain.radius"), dim);
    }
    throw ConfigError("key '" + kind_key + "': unknown domain kind '" + kind + "'");
}

}  // namespace

std::string mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Stationary: return "stationary";
        case RunMode::Time: return "time";
        case RunMode::StateConstraint: return "state-constraint";
        case RunMode::Metric: return "metric";
        case RunMode::Verify: return "verify";
        case RunMode::Sweep: return "sweep";
    }
    return "?";
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::map<std::string, int> first_line;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "' (first at line " + std::to_string(first_line[key]) + ")");
        kv[key] = value;
        first_line[key] = lineno;
    }
    return parse_config_map(kv);
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ExperimentConfig parse_config_map(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    cfg.raw = kv;

    std::set<std::string> consumed;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        consumed.insert(key);
        return it->second;
    };
    auto consume_prefix = [&](const std::string& prefix) {
        const std::string p = prefix + ".";
        for (const auto& [k, v] : kv)
            if (k.rfind(p, 0) == 0) consumed.insert(k);
    };

    // mode
    auto mode = get("mode");
    if (!mode) throw ConfigError("missing required key 'mode'");
    if (*mode == "stationary")
        cfg.mode = RunMode::Stationary;
    else if (*mode == "time")
        cfg.mode = RunMode::Time;
    else if (*mode == "state-constraint")
        cfg.mode = RunMode::StateConstraint;
    else if (*mode == "metric")
        cfg.mode = RunMode::Metric;
    else if (*mode == "verify")
        cfg.mode = RunMode::Verify;
    else if (*mode == "sweep")
        cfg.mode = RunMode::Sweep;
    else
        throw ConfigError("key 'mode': unknown mode '" + *mode + "'");

    if (auto v = get("seed")) cfg.seed = static_cast<std::uint64_t>(to_long(*v, "seed"));
    if (auto v = get("output.dir")) cfg.output_dir = *v;

    // domain
    auto kind = get("domain.kind");
    if (!kind) throw ConfigError("missing required key 'domain.kind'");
    Domain domain = Domain::interval(-1.0, 1.0);
    if (*kind == "annulus") {
        auto okind = get("domain.outer_kind");
        if (!okind) throw ConfigError("annulus domain requires domain.outer_kind");
        Shape outer = parse_outer_shape(kv, "domain.outer_kind", *okind);
        auto tc = get("domain.target_center");
        if (!tc) throw ConfigError("annulus domain requires domain.target_center");
        double tr = 1.0;
        if (auto v = get("domain.target_radius")) tr = to_double(*v, "domain.target_radius");
        Point center = to_point(*tc, "domain.target_center");
        domain = Domain::annulus(outer, center, tr);
        cfg.metric_center = center;
        cfg.target_radius = tr;
    } else {
        Shape outer = parse_outer_shape(kv, "domain.kind", *kind);
        if (*kind == "interval")
            domain = Domain::interval(outer.lo[0], outer.hi[0]);
        else if (*kind == "box")
            domain = Domain::box(outer.lo, outer.hi);
        else
            domain = Domain::ball(outer.center, outer.radius, outer.dim);
    }
    for (const char* k : {"domain.min", "domain.max", "domain.center", "domain.radius",
                          "domain.target_center", "domain.target_radius", "domain.outer_kind"})
        if (kv.count(k)) consumed.insert(k);

    // grid
    auto res = get("grid.resolution");
    if (!res) throw ConfigError("missing required key 'grid.resolution'");
    cfg.resolution = to_double(*res, "grid.resolution");
    if (!(cfg.resolution >= 8.0))
        throw ConfigError("key 'grid.resolution': must be at least 8 nodes per unit length");

    // problem coefficients
    cfg.problem.domain = domain;
    auto m = get("problem.m");
    if (!m) throw ConfigError("missing required key 'problem.m'");
    cfg.problem.hamiltonian.m = to_double(*m, "problem.m");
    if (!(cfg.problem.hamiltonian.m > 1.0))
        throw ConfigError("key 'problem.m': growth exponent must satisfy m > 1");
    if (auto v = get("problem.delta")) {
        cfg.problem.delta = to_double(*v, "problem.delta");
        if (cfg.problem.delta < 0.0) throw ConfigError("key 'problem.delta': must be >= 0");
    }
    if (has_prefix(kv, "problem.b")) {
        cfg.problem.hamiltonian.b = field_from(kv, "problem.b");
        consume_prefix("problem.b");
    }
    if (has_prefix(kv, "problem.f")) {
        cfg.problem.f = field_from(kv, "problem.f");
        consume_prefix("problem.f");
    }
    if (has_prefix(kv, "problem.drift.x")) {
        cfg.problem.hamiltonian.drift.comp[0] = field_from(kv, "problem.drift.x");
        consume_prefix("problem.drift.x");
    }
    if (has_prefix(kv, "problem.drift.y")) {
        cfg.problem.hamiltonian.drift.comp[1] = field_from(kv, "problem.drift.y");
        consume_prefix("problem.drift.y");
    }
    if (auto sk = get("problem.sigma.kind")) {
        if (*sk == "zero") {
            cfg.problem.diffusion.sigma = SigmaField::zero();
        } else if (*sk == "scalar") {
            cfg.problem.diffusion.sigma = SigmaField::scalar(field_from(kv, "problem.sigma.s"));
            consume_prefix("problem.sigma.s");
        } else if (*sk == "diag") {
            cfg.problem.diffusion.sigma = SigmaField::diagonal(
                field_from(kv, "problem.sigma.s1"), field_from(kv, "problem.sigma.s2"));
            consume_prefix("problem.sigma.s1");
            consume_prefix("problem.sigma.s2");
        } else if (*sk == "full") {
            cfg.problem.diffusion.sigma =
                SigmaField::full(field_from(kv, "problem.sigma.s11"),
                                 field_from(kv, "problem.sigma.s12"),
                                 field_from(kv, "problem.sigma.s22"));
            consume_prefix("problem.sigma.s11");
            consume_prefix("problem.sigma.s12");
            consume_prefix("problem.sigma.s22");
        } else {
            throw ConfigError("key 'problem.sigma.kind': unknown kind '" + *sk + "'");
        }
    }

    // scheme / solve controls
    if (auto v = get("scheme.tol")) {
        cfg.tol = to_double(*v, "scheme.tol");
        if (!(cfg.tol > 0.0)) throw ConfigError("key 'scheme.tol': must be positive");
    }
    if (auto v = get("scheme.budget")) {
        cfg.budget = to_long(*v, "scheme.budget");
        if (cfg.budget <= 0) throw ConfigError("key 'scheme.budget': must be positive");
    }
    if (auto v = get("scheme.dt_safety")) {
        cfg.dt_safety = to_double(*v, "scheme.dt_safety");
        if (!(cfg.dt_safety > 0.0 && cfg.dt_safety <= 1.0))
            throw ConfigError("key 'scheme.dt_safety': must be in (0,1]");
    }
    if (auto v = get("scheme.gradient_bound"))
        cfg.gradient_bound = to_double(*v, "scheme.gradient_bound");
    if (auto v = get("scheme.theta")) cfg.theta_override = to_double(*v, "scheme.theta");
    if (auto v = get("scheme.dt")) cfg.dt_override = to_double(*v, "scheme.dt");
    if (auto v = get("scheme.allow_uncertified"))
        cfg.allow_uncertified = to_bool(*v, "scheme.allow_uncertified");
    if (auto v = get("analysis.eps0")) cfg.eps0 = to_double(*v, "analysis.eps0");

    // stationary
    if (has_prefix(kv, "stationary.dirichlet")) {
        cfg.dirichlet = field_from(kv, "stationary.dirichlet");
        consume_prefix("stationary.dirichlet");
    }
    if (has_prefix(kv, "stationary.init")) {
        cfg.init = field_from(kv, "stationary.init");
        consume_prefix("stationary.init");
    }

    // time
    if (auto v = get("time.T")) {
        cfg.T = to_double(*v, "time.T");
        if (!(cfg.T > 0.0)) throw ConfigError("key 'time.T': must be positive");
    }
    if (auto v = get("time.snapshot_every")) {
        cfg.snapshot_every = static_cast<int>(to_long(*v, "time.snapshot_every"));
        if (cfg.snapshot_every <= 0)
            throw ConfigError("key 'time.snapshot_every': must be positive");
    }
    if (auto v = get("time.lateral")) {
        if (*v == "dirichlet")
            cfg.lateral = LateralMode::Dirichlet;
        else if (*v == "state_constraint")
            cfg.lateral = LateralMode::StateConstraint;
        else
            throw ConfigError("key 'time.lateral': expected dirichlet or state_constraint");
    }
    if (has_prefix(kv, "time.u0")) {
        cfg.u0 = field_from(kv, "time.u0");
        consume_prefix("time.u0");
    }

    // state-constraint
    if (auto v = get("sc.epsilons")) cfg.sc_epsilons = to_double_list(*v, "sc.epsilons");
    if (auto v = get("sc.max_members")) {
        cfg.sc_max_members = static_cast<int>(to_long(*v, "sc.max_members"));
        if (cfg.sc_max_members <= 0) throw ConfigError("key 'sc.max_members': must be positive");
    }

    // metric
    if (auto v = get("metric.mu")) cfg.mu_list = to_double_list(*v, "metric.mu");
    if (auto v = get("metric.epsilons"))
        cfg.metric_epsilons = to_double_list(*v, "metric.epsilons");
    if (auto v = get("metric.max_members"))
        cfg.metric_max_members = static_cast<int>(to_long(*v, "metric.max_members"));

    // verify
    if (auto v = get("verify.checks")) {
        for (const std::string& c : split(*v, ','))
            if (!c.empty()) cfg.verify_checks.push_back(c);
    }
    if (auto v = get("verify.negative_control"))
        cfg.negative_control = to_bool(*v, "verify.negative_control");

    // sweep
    if (auto v = get("sweep.param")) cfg.sweep_param = *v;
    if (auto v = get("sweep.values")) cfg.sweep_values = to_double_list(*v, "sweep.values");
    if (auto v = get("sweep.mode")) cfg.sweep_mode = *v;

    // Every key must be known.
    for (const auto& [k, v] : kv)
        if (!consumed.count(k)) throw ConfigError("unknown key '" + k + "'");

    // Mode-specific requirements.
    if (cfg.mode == RunMode::Metric) {
        if (cfg.problem.domain.kind() != DomainKind::Annulus)
            throw ConfigError("metric mode requires domain.kind = annulus");
        if (cfg.mu_list.empty()) throw ConfigError("metric mode requires metric.mu");
    }
    if (cfg.mode == RunMode::StateConstraint && !(cfg.problem.delta > 0.0))
        throw ConfigError("state-constraint mode requires problem.delta > 0");
    if (cfg.mode == RunMode::Sweep) {
        if (cfg.sweep_param.empty() || cfg.sweep_values.empty() || cfg.sweep_mode.empty())
            throw ConfigError("sweep mode requires sweep.param, sweep.values and sweep.mode");
        if (cfg.sweep_mode == "sweep")
            throw ConfigError("key 'sweep.mode': nested sweeps are not supported");
    }
    return cfg;
}

}  // namespace vhj
