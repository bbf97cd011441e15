#include "vhj/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "vhj/analysis.hpp"
#include "vhj/csv.hpp"
#include "vhj/errors.hpp"
#include "vhj/metric.hpp"

namespace fs = std::filesystem;

namespace vhj {

namespace {

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

struct Emitter {
    fs::path dir;
    RunManifest* manifest;
    std::string file(const std::string& name) {
        manifest->emitted_files.push_back(name);
        return (dir / name).string();
    }
};

GridFunction field_on_grid(const GridPtr& grid, const ScalarField& f) {
    GridFunction u(grid);
    for (int i = 0; i < grid->node_count(); ++i)
        u[i] = f(grid->position(i), grid->dimension());
    return u;
}

// Default a-priori gradient bound: the Lipschitz-constant display evaluated
// with margin 2, plus whatever the initial data already realizes.
double default_gradient_bound(const ProblemSpec& problem, const DiscreteOperator& op,
                              const GridFunction& init) {
    StructuralConstants c = structural_constants(problem, 2.0);
    const double m = problem.hamiltonian.m;
    double sup_f = 0.0;
    for (double r : op.rhs()) sup_f = std::max(sup_f, std::abs(r));
    double sup_u = problem.delta > 0.0 ? (c.lambda1 + sup_f) / problem.delta : init.sup_norm();
    double K = std::pow(std::sqrt(1.0 + c.lambda1) * c.lambda2 / c.a, 2.0 / (m - 1.0)) +
               std::pow((c.M + sup_f + problem.delta * sup_u) / c.a, 1.0 / m);
    double g0 = op.max_abs_gradient(init.values());
    return 2.0 * std::max({K, g0, 1.0});
}

SchemeParams certified_params(const ExperimentConfig& cfg, DiscreteOperator& op,
                              const GridFunction& init) {
    double P = cfg.gradient_bound.value_or(default_gradient_bound(cfg.problem, op, init));
    SchemeParams params;
    if (cfg.theta_override || cfg.dt_override) {
        SchemeParams defaults = make_certified_params(op, P, cfg.dt_safety);
        params.gradient_bound = P;
        params.theta = cfg.theta_override.value_or(defaults.theta);
        params.dt = cfg.dt_override.value_or(defaults.dt);
        Certificate cert = certify_monotonicity(op, params);
        if (!cert.ok && !cfg.allow_uncertified)
            throw CertificateError("certificate failure: " + cert.failure);
    } else {
        params = make_certified_params(op, P, cfg.dt_safety);
    }
    return params;
}

SolveOptions solve_options(const ExperimentConfig& cfg) {
    SolveOptions opts;
    opts.tol = cfg.tol;
    opts.budget = cfg.budget;
    opts.require_certified = !cfg.allow_uncertified;
    return opts;
}

void run_stationary(const ExperimentConfig& cfg, Emitter& em, RunManifest& manifest) {
    GridPtr grid = build_grid(cfg.problem.domain, cfg.resolution);
    DiscreteOperator op(cfg.problem, grid, LateralMode::Dirichlet);

    // Default start: the Dirichlet profile extended inward (keeps the
    // explicit transient inside the certified gradient range).
    GridFunction init(grid, 0.0);
    if (cfg.init)
        init = field_on_grid(grid, *cfg.init);
    else if (cfg.dirichlet)
        init = field_on_grid(grid, *cfg.dirichlet);
    if (cfg.dirichlet) {
        GridFunction g = field_on_grid(grid, *cfg.dirichlet);
        for (int i = 0; i < grid->node_count(); ++i)
            if (grid->is_boundary(i) || grid->is_target(i)) init[i] = g[i];
    }
    PinnedMask pinned = pin_targets_and_boundary(*grid);

    SchemeParams params = certified_params(cfg, op, init);
    auto [u, stats] = solve_stationary(op, params, init, &pinned, solve_options(cfg));
    manifest.pass = stats.converged;

    write_grid_function_csv(u, em.file("solution.csv"));
    write_json(em.file("stats.json"), to_json(stats, /*include_timing=*/false));
    write_json(em.file("constants.json"), to_json(structural_constants(cfg.problem, 2.0)));
}

void run_time(const ExperimentConfig& cfg, Emitter& em, RunManifest& manifest) {
    GridPtr grid = build_grid(cfg.problem.domain, cfg.resolution);
    DiscreteOperator op(cfg.problem, grid, cfg.lateral);

    GridFunction u0(grid, 0.0);
    if (cfg.u0) u0 = field_on_grid(grid, *cfg.u0);
    PinnedMask pinned = cfg.lateral == LateralMode::Dirichlet
                            ? pin_targets_and_boundary(*grid)
                            : pin_targets(*grid);

    SchemeParams params = certified_params(cfg, op, u0);
    Trajectory traj =
        solve_time_dependent(op, params, u0, cfg.T, cfg.snapshot_every, &pinned, solve_options(cfg));

    nlohmann::json times = nlohmann::json::array();
    for (size_t s = 0; s < traj.times.size(); ++s) {
        std::ostringstream name;
        name << "snapshot_" << s << ".csv";
        write_grid_function_csv(traj.snapshots[s], em.file(name.str()));
        times.push_back(traj.times[s]);
    }
    write_json(em.file("trajectory.json"),
               {{"times", times}, {"dt", traj.dt}, {"T", traj.T}});
}

void run_state_constraint(const ExperimentConfig& cfg, Emitter& em, RunManifest& manifest) {
    GridPtr grid = build_grid(cfg.problem.domain, cfg.resolution);
    StateConstraintOptions opts;
    opts.epsilons = cfg.sc_epsilons;
    opts.max_members = cfg.sc_max_members;
    opts.tol = cfg.tol;
    opts.budget = cfg.budget;
    opts.dt_safety = cfg.dt_safety;
    opts.eps0_override = cfg.eps0;

    auto [u, path] = solve_state_constraint(cfg.problem, grid, opts);
    manifest.pass = path.monotone_ok;
    for (const SolveStats& s : path.stats) manifest.pass = manifest.pass && s.converged;

    write_grid_function_csv(u, em.file("solution.csv"));
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < path.epsilons.size(); ++k)
        rows.push_back({path.epsilons[k], path.sup_inner[k], path.fitted_exponent[k]});
    write_table_csv(em.file("eps_path.csv"), {"epsilon", "sup_inner", "fitted_exponent"}, rows);

    const double m = cfg.problem.hamiltonian.m;
    if (m <= 2.0 && !path.solutions.empty()) {
        double band = cfg.eps0.value_or(grid->eps0());
        SandwichReport rep = barrier_sandwich_check(path.solutions.front(), m, band);
        write_json(em.file("sandwich.json"), to_json(rep));
    }
}

void run_metric(const ExperimentConfig& cfg, Emitter& em, RunManifest& manifest) {
    GridPtr grid = build_grid(cfg.problem.domain, cfg.resolution);
    MetricOptions opts;
    opts.tol = cfg.tol;
    opts.budget = cfg.budget;
    opts.max_members = cfg.metric_max_members;
    opts.epsilons = cfg.metric_epsilons;
    opts.dt_safety = cfg.dt_safety;

    nlohmann::json summary = nlohmann::json::array();
    for (size_t k = 0; k < cfg.mu_list.size(); ++k) {
        MetricSolution sol = solve_metric(cfg.problem, cfg.mu_list[k], grid, opts);
        std::ostringstream name;
        name << "metric_mu" << k << ".csv";
        write_grid_function_csv(sol.values, em.file(name.str()));
        summary.push_back({{"mu", sol.mu},
                           {"converged", sol.stats.converged},
                           {"infeasible", sol.infeasible},
                           {"path_members", sol.path.epsilons.size()},
                           {"monotone_ok", sol.path.monotone_ok}});
        manifest.pass = manifest.pass && sol.stats.converged && !sol.infeasible;
    }
    write_json(em.file("metric_summary.json"), summary);

    // Subadditivity over a default collinear triple when the geometry allows
    // placing the probe balls inside the domain.
    const Domain& dom = cfg.problem.domain;
    double r = dom.target().radius;
    double room = dom.outer().inradius();
    if (room > 4.0 * r + 1.0) {
        Point z = dom.target().center;
        double off = std::min(2.0 * r + 0.5, (room - r - 1.0) / 2.0);
        Point x{z[0] + off, z[1]};
        Point y{z[0] + 2.0 * off, z[1]};
        SubadditivityReport rep =
            check_subadditivity(cfg.problem, cfg.mu_list.front(), {{y, x, z}}, grid, opts);
        write_json(em.file("subadditivity.json"), to_json(rep));
        manifest.pass = manifest.pass && rep.pass;
    }
}

// Deterministic bounded-difference random fields for the verify fixtures.
GridFunction random_field(const GridPtr& grid, std::mt19937_64& rng, double slope_scale) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double amp = slope_scale * grid->dx();
    GridFunction u(grid, 0.0);
    for (int i = 0; i < grid->node_count(); ++i) u[i] = amp * uni(rng);
    return u;
}

void run_verify(const ExperimentConfig& cfg, Emitter& em, RunManifest& manifest) {
    std::vector<std::string> checks = cfg.verify_checks;
    if (checks.empty()) checks = {"hypotheses", "convexity", "monotone-update", "comparison"};

    GridPtr grid = build_grid(cfg.problem.domain, cfg.resolution);
    std::mt19937_64 rng(cfg.seed + 1);
    nlohmann::json results = nlohmann::json::array();
    bool all_pass = true;

    for (const std::string& check : checks) {
        nlohmann::json entry;
        entry["check"] = check;
        try {
            if (check == "hypotheses") {
                AuditReport audit = audit_hypotheses(cfg.problem, 2.0);
                entry["pass"] = audit.ok;
                entry["checked"] = audit.checked;
            } else if (check == "convexity") {
                DiscreteOperator op(cfg.problem, grid, LateralMode::Dirichlet);
                SchemeParams params = make_certified_params(op, 4.0);
                op.set_theta(cfg.negative_control ? 0.0 : params.theta);
                bool pass = true;
                std::uniform_real_distribution<double> uni(0.0, 1.0);
                for (int trial = 0; trial < 20; ++trial) {
                    GridFunction u = random_field(grid, rng, 2.0);
                    GridFunction v = random_field(grid, rng, 2.0);
                    double mu_res = -1e300, nu_res = -1e300;
                    for (int i : op.unknowns()) {
                        mu_res = std::max(mu_res, op.residual_at(u.values(), i));
                        nu_res = std::max(nu_res, op.residual_at(v.values(), i));
                    }
                    CheckReport c1 = convex_combination_check(op, u, v, uni(rng), mu_res, nu_res);
                    pass = pass && c1.pass;
                }
                entry["pass"] = pass;
            } else if (check == "monotone-update") {
                DiscreteOperator op(cfg.problem, grid, LateralMode::Dirichlet);
                SchemeParams params = make_certified_params(op, 4.0);
                if (cfg.negative_control) {
                    params.theta = 0.0;  // deliberately broken: loses upwinding
                    params.cfl_certified = false;
                }
                op.set_theta(params.theta);
                bool pass = true;
                std::uniform_real_distribution<double> uni(0.0, 1.0);
                for (int trial = 0; trial < 10; ++trial) {
                    GridFunction u = random_field(grid, rng, 1.5);
                    GridFunction v = u;
                    for (int i = 0; i < v.size(); ++i)
                        v[i] += 0.5 * grid->dx() * uni(rng);
                    GridFunction un = u, vn = v;
                    sweep_once(op, params, un.values());
                    sweep_once(op, params, vn.values());
                    for (int i : op.unknowns())
                        if (un[i] > vn[i] + 1e-13) pass = false;
                }
                entry["pass"] = pass;
            } else if (check == "comparison") {
                if (!(cfg.problem.delta > 0.0))
                    throw InputError("comparison check requires problem.delta > 0");
                DiscreteOperator op(cfg.problem, grid, LateralMode::Dirichlet);
                GridFunction zero(grid, 0.0);
                SchemeParams params = certified_params(cfg, op, zero);
                PinnedMask pinned = pin_targets_and_boundary(*grid);
                SolveOptions sopts = solve_options(cfg);
                auto [ua, sa] = solve_stationary(op, params, zero, &pinned, sopts);
                GridFunction init_b = random_field(grid, rng, 4.0);
                for (int i = 0; i < init_b.size(); ++i) init_b[i] += 0.5;
                for (int i = 0; i < grid->node_count(); ++i)
                    if (pinned[i]) init_b[i] = zero[i];
                auto [ub, sb] = solve_stationary(op, params, init_b, &pinned, sopts);
                double gap = 0.0;
                for (int i = 0; i < ua.size(); ++i)
                    gap = std::max(gap, std::abs(ua[i] - ub[i]));
                double tol = 2.0 * (sa.tol + sb.tol) / cfg.problem.delta;
                entry["pass"] = sa.converged && sb.converged && gap <= tol;
                entry["gap"] = gap;
                entry["tolerance"] = tol;
            } else if (check == "scaling-m") {
                ScalingStudy study =
                    lipschitz_scaling_study_M(cfg.resolution, {8.0, 16.0, 32.0, 64.0, 128.0});
                entry["pass"] = study.pass;
                entry["study"] = to_json(study);
            } else if (check == "scaling-diffusion") {
                ScalingStudy study = lipschitz_scaling_study_diffusion(
                    cfg.resolution, {0.5, 0.7, 1.0, 1.4, 2.0});
                entry["pass"] = study.pass;
                entry["study"] = to_json(study);
            } else {
                throw ConfigError("unknown verify check '" + check + "'");
            }
        } catch (const InputError& e) {
            entry["pass"] = false;
            entry["error"] = e.what();
        }
        all_pass = all_pass && entry["pass"].get<bool>();
        results.push_back(entry);
    }
    write_json(em.file("checks.json"), results);
    manifest.pass = all_pass;
}

void run_sweep(const ExperimentConfig& cfg, Emitter& em, RunManifest& manifest) {
    int workers = 1;
    if (const char* env = std::getenv("VHJ_WORKERS")) workers = std::max(1, std::atoi(env));

    std::vector<ExperimentConfig> members;
    for (size_t k = 0; k < cfg.sweep_values.size(); ++k) {
        std::map<std::string, std::string> kv = cfg.raw;
        kv.erase("sweep.param");
        kv.erase("sweep.values");
        kv.erase("sweep.mode");
        kv["mode"] = cfg.sweep_mode;
        std::ostringstream val;
        val.precision(17);
        val << cfg.sweep_values[k];
        kv[cfg.sweep_param] = val.str();
        std::ostringstream dir;
        dir << cfg.output_dir << "/sweep_" << k;
        kv["output.dir"] = dir.str();
        members.push_back(parse_config_map(kv));
    }

    std::vector<int> codes(members.size(), 0);
    std::vector<std::string> errors(members.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= members.size()) return;
            try {
                codes[k] = run_and_emit(members[k]);
            } catch (const std::exception& e) {
                codes[k] = 1;
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(workers, static_cast<int>(members.size())); ++w)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    nlohmann::json entries = nlohmann::json::array();
    for (size_t k = 0; k < members.size(); ++k) {
        entries.push_back({{"value", cfg.sweep_values[k]},
                           {"exit_code", codes[k]},
                           {"dir", "sweep_" + std::to_string(k)},
                           {"error", errors[k]}});
        manifest.pass = manifest.pass && codes[k] == 0;
    }
    write_json(em.file("sweep_summary.json"), entries);
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
    RunManifest manifest;
    manifest.config_digest = digest_hex(canonical_digest(cfg.raw));
    manifest.tool_version = kToolVersion;
    manifest.mode = mode_name(cfg.mode);
    manifest.pass = true;

    fs::create_directories(cfg.output_dir);
    Emitter em{fs::path(cfg.output_dir), &manifest};

    auto t0 = std::chrono::steady_clock::now();
    switch (cfg.mode) {
        case RunMode::Stationary: run_stationary(cfg, em, manifest); break;
        case RunMode::Time: run_time(cfg, em, manifest); break;
        case RunMode::StateConstraint: run_state_constraint(cfg, em, manifest); break;
        case RunMode::Metric: run_metric(cfg, em, manifest); break;
        case RunMode::Verify: run_verify(cfg, em, manifest); break;
        case RunMode::Sweep: run_sweep(cfg, em, manifest); break;
    }
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return manifest;
}

int run_and_emit(const ExperimentConfig& cfg) {
    RunManifest manifest = run(cfg);
    write_json((fs::path(cfg.output_dir) / "manifest.json").string(), manifest.to_json());
    return manifest.pass ? 0 : 2;
}

std::string summarize_run_directory(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw Error("no manifest.json in " + dir);
    nlohmann::json manifest = nlohmann::json::parse(in);
    std::ostringstream os;
    os << "run: " << dir << "\n"
       << "  mode:    " << manifest.value("mode", "?") << "\n"
       << "  version: " << manifest.value("tool_version", "?") << "\n"
       << "  digest:  " << manifest.value("config_digest", "?") << "\n"
       << "  pass:    " << (manifest.value("pass", false) ? "yes" : "no") << "\n"
       << "  files:\n";
    for (const auto& f : manifest["emitted_files"]) {
        os << "    " << f.get<std::string>();
        fs::path p = fs::path(dir) / f.get<std::string>();
        if (p.extension() == ".json") {
            std::ifstream jf(p);
            if (jf) {
                nlohmann::json j = nlohmann::json::parse(jf, nullptr, false);
                if (!j.is_discarded() && j.is_object() && j.contains("pass"))
                    os << "  [" << (j["pass"].get<bool>() ? "pass" : "FAIL") << "]";
            }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace vhj
