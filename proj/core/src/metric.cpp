#include "vhj/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vhj/errors.hpp"

namespace vhj {

namespace {

std::vector<double> forcing_profile(const Grid& grid, double m, double eps) {
    const double expo = -m / (m - 1.0);
    const double floor = 0.5 * grid.dx();
    std::vector<double> out(grid.node_count(), 0.0);
    if (eps == 0.0) return out;
    for (int i = 0; i < grid.node_count(); ++i) {
        double d = std::max(grid.domain().boundary_distance(grid.position(i)), floor);
        out[i] = eps * std::pow(d, expo);
    }
    return out;
}

// Every free connected component must reach the target; otherwise the
// constraint never anchors the values there.
void check_components_reach_target(const Grid& grid) {
    const int n = grid.node_count();
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0 || grid.is_target(s)) continue;
        int id = ncomp++;
        stack.push_back(s);
        comp[s] = id;
        bool touches = false;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int a = 0; a < grid.dimension(); ++a)
                for (int side = 0; side < 2; ++side) {
                    int j = grid.neighbor(i, a, side);
                    if (j < 0) continue;
                    if (grid.is_target(j)) {
                        touches = true;
                        continue;
                    }
                    if (comp[j] < 0) {
                        comp[j] = id;
                        stack.push_back(j);
                    }
                }
        }
        if (!touches)
            throw GeometryError(
                "metric problem: a free component of the grid does not touch the target ball");
    }
}

struct MemberResult {
    GridFunction solution;
    SolveStats stats;
    bool drained = false;
};

// One forced member, iterated from `init` to the unique discrete fixed point.
// A sinking iterate (drain floor, or persistently positive residual at every
// unknown) marks infeasibility instead of an error. `expect_increase` arms
// the per-sweep monotone-approach assertion of the Perron direction; the
// worst violation is recorded in stats.max_increase_seen.
MemberResult solve_member(DiscreteOperator& op, const SchemeParams& params,
                          const GridFunction& init, const MetricOptions& opts,
                          double divergence_floor, double infeasible_margin,
                          int monotone_direction) {
    MemberResult out{init, {}, false};
    SolveOptions sopts;
    sopts.tol = opts.tol;
    sopts.budget = opts.budget;

    PinnedMask pinned = pin_targets(op.grid());

    // Manual loop so the infeasibility checks can interleave. Residuals are
    // judged against the local data scale; nodes relax at their own
    // certified steps.
    const std::vector<int>& unknowns = op.unknowns();
    std::vector<double>& values = out.solution.values();
    std::vector<double> res(unknowns.size());
    std::vector<double> inv_scale(unknowns.size());
    for (size_t k = 0; k < unknowns.size(); ++k)
        inv_scale[k] = 1.0 / (1.0 + std::abs(op.rhs()[unknowns[k]]));
    std::vector<double> dt(op.grid().node_count(), params.dt);
    if (op.has_local_theta()) {
        const Grid& grid = op.grid();
        const double dx = grid.dx();
        const int dim = grid.dimension();
        double denom_max = 2.0 * dim * op.max_abs_A() / (dx * dx) + dim * op.theta_max() / dx;
        double safety = params.dt * denom_max;
        for (int i = 0; i < grid.node_count(); ++i)
            dt[i] = safety / (2.0 * dim * op.max_abs_A() / (dx * dx) +
                              dim * op.theta_field()[i] / dx);
    }
    double tol = sopts.tol > 0.0 ? sopts.tol : 1e-8;
    out.stats.tol = tol;

    long iter = 0;
    int positive_checks = 0;
    for (;; ++iter) {
        op.residual_unknowns(values, res);
        double sup = 0.0;
        double min_res = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < unknowns.size(); ++k) {
            if (pinned[unknowns[k]]) continue;
            sup = std::max(sup, std::abs(res[k]) * inv_scale[k]);
            min_res = std::min(min_res, res[k]);
        }
        if (!std::isfinite(sup)) {
            out.solution.check_finite("metric sweep");
            throw InstabilityError("metric sweep produced a non-finite residual");
        }
        out.stats.final_residual_sup = sup;
        if (sup <= tol) {
            out.stats.converged = true;
            break;
        }
        if (iter >= sopts.budget) break;
        for (size_t k = 0; k < unknowns.size(); ++k) {
            const int i = unknowns[k];
            if (pinned[i]) continue;
            double step = dt[i] * res[k];
            values[i] -= step;
            if (monotone_direction > 0 && step > 0.0)
                out.stats.max_increase_seen = std::max(out.stats.max_increase_seen, step);
            if (monotone_direction < 0 && step < 0.0)
                out.stats.max_increase_seen = std::max(out.stats.max_increase_seen, -step);
        }
        if ((iter & 1023) == 0) {
            double mn = 0.0;
            for (int i : unknowns) mn = std::min(mn, values[i]);
            if (mn < divergence_floor) {
                out.drained = true;
                break;
            }
            if (iter >= 4096 && min_res >= infeasible_margin) {
                if (++positive_checks >= 3) {
                    out.drained = true;
                    break;
                }
            } else {
                positive_checks = 0;
            }
        }
    }
    out.stats.iterations = iter;
    return out;
}

}  // namespace

MetricSolution solve_metric(const ProblemSpec& problem, double mu, const GridPtr& grid,
                            const MetricOptions& opts) {
    if (grid->domain().kind() != DomainKind::Annulus)
        throw InputError("solve_metric requires an annulus domain (outer region minus target ball)");
    check_components_reach_target(*grid);

    const double m = problem.hamiltonian.m;
    MetricSolution sol;
    sol.mu = mu;
    sol.center = grid->domain().target().center;
    sol.radius = grid->domain().target().radius;
    sol.hbar_bracket = {-1e300, mu};

    ProblemSpec metric_problem = problem;
    metric_problem.delta = 0.0;
    DiscreteOperator op(metric_problem, grid, LateralMode::StateConstraint);

    std::vector<double> base_rhs = op.rhs();  // f
    for (double& r : base_rhs) r += mu;

    Point lo, hi;
    grid->domain().bounding_box(lo, hi);
    const int dim = grid->dimension();
    FieldBounds bbound = problem.hamiltonian.b.bounds_on_box(lo, hi, dim);
    double diam = grid->domain().diameter();

    std::vector<double> epsilons = opts.epsilons;
    if (epsilons.empty() && m <= 2.0) {
        double eps_floor = epsilon_path_floor(op.max_abs_A(), bbound.inf, m);
        double eps = 1.0;
        for (int k = 0; k < opts.max_members && eps >= eps_floor; ++k, eps *= 0.5)
            epsilons.push_back(eps);
        if (eps_floor > 0.0 && (epsilons.empty() || epsilons.back() > eps_floor))
            epsilons.push_back(eps_floor);
    }
    if (epsilons.empty()) epsilons.push_back(0.0);
    double divergence_floor =
        -opts.divergence_floor_scale *
        (1.0 + std::pow(std::abs(mu) + 1.0, 1.0 / m) * diam);

    const double eps0 = grid->eps0();
    std::vector<int> inner = inner_region_nodes(*grid, eps0);
    double cauchy_tol = opts.tol > 0.0 ? opts.tol : 1e-8 * (1.0 + std::abs(mu));
    double infeasible_margin = opts.infeasible_min_residual > 0.0
                                   ? opts.infeasible_min_residual
                                   : 1e-3 * (1.0 + std::abs(mu));

    GridFunction current(grid);  // zero start: the Perron direction

    // One dissipation field for the whole path (members must share the
    // discrete operator so the epsilon-ordering is comparison-protected),
    // sized by the most strongly forced member.
    op.set_rhs(base_rhs);
    if (epsilons.front() > 0.0) op.add_to_rhs(forcing_profile(*grid, m, epsilons.front()));
    std::vector<double> pb = local_gradient_bounds(op, current.values(), opts.gradient_margin);
    SchemeParams params = make_certified_params_local(op, pb, opts.dt_safety);

    bool have_prev = false;
    double prev_tol = 0.0;
    for (size_t k = 0; k < epsilons.size(); ++k) {
        const double eps = epsilons[k];
        op.set_rhs(base_rhs);
        if (eps > 0.0) op.add_to_rhs(forcing_profile(*grid, m, eps));

        double min_rhs = std::numeric_limits<double>::infinity();
        for (int i : op.unknowns()) min_rhs = std::min(min_rhs, op.rhs()[i]);

        // Monotone approach: the first member rises from the zero subsolution
        // (valid when the level is nonnegative), later members descend from
        // the previous, more strongly forced solution.
        int direction = have_prev ? -1 : (min_rhs >= 0.0 ? +1 : 0);
        MemberResult member = solve_member(op, params, current, opts, divergence_floor,
                                           infeasible_margin, direction);
        if (member.drained) {
            sol.infeasible = true;
            sol.stats = member.stats;
            sol.values = std::move(member.solution);
            return sol;
        }
        extrapolate_boundary(op, member.solution.values());

        sol.path.epsilons.push_back(eps);
        sol.path.stats.push_back(member.stats);
        double si = 0.0;
        for (int i : inner) si = std::max(si, std::abs(member.solution[i]));
        sol.path.sup_inner.push_back(si);
        sol.path.fitted_exponent.push_back(0.0);
        sol.path.solutions.push_back(member.solution);

        if (have_prev) {
            double slack = 10.0 * (member.stats.tol + prev_tol) /
                               std::max(1e-12, 1.0) +
                           1e-10 * (1.0 + current.sup_norm());
            double worst = 0.0;
            for (int i : op.unknowns())
                worst = std::max(worst, member.solution[i] - current[i]);
            sol.path.worst_violation = std::max(sol.path.worst_violation, worst);
            if (worst > slack) sol.path.monotone_ok = false;
            double diff = 0.0;
            for (int i : inner) diff = std::max(diff, std::abs(member.solution[i] - current[i]));
            current = std::move(member.solution);
            prev_tol = member.stats.tol;
            sol.stats = sol.path.stats.back();
            if (opts.epsilons.empty() && diff < 10.0 * cauchy_tol) break;
        } else {
            current = std::move(member.solution);
            prev_tol = member.stats.tol;
            sol.stats = sol.path.stats.back();
            have_prev = true;
        }
    }
    sol.values = current;

    // m_mu >= 0 whenever the zero function is admissible (H(0,x) <= mu + f).
    return sol;
}

double m_tilde(const MetricSolution& sol, const Point& y, double radius) {
    const Grid& grid = sol.values.grid();
    double margin = grid.domain().boundary_distance(y);
    if (margin < radius - 1e-12)
        throw GeometryError("m_tilde: probe ball exits the domain");
    const int dim = grid.dimension();
    double sup = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < grid.node_count(); ++i) {
        if (dist2(grid.position(i), y, dim) <= radius + 1e-12) {
            sup = std::max(sup, sol.values[i]);
            found = true;
        }
    }
    if (!found) throw SamplingError("m_tilde: no nodes inside the probe ball");
    return sup;
}

SubadditivityReport check_subadditivity(const ProblemSpec& problem, double mu,
                                        const std::vector<std::array<Point, 3>>& triples,
                                        const GridPtr& grid, const MetricOptions& opts) {
    // Solutions per distinct target center (x and z roles).
    const Shape& outer = grid->domain().outer();
    const double target_radius =
        grid->domain().kind() == DomainKind::Annulus ? grid->domain().target().radius : 1.0;
    std::map<std::pair<double, double>, MetricSolution> cache;
    auto solve_at = [&](const Point& c) -> const MetricSolution& {
        auto key = std::make_pair(c[0], c[1]);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Domain dom = Domain::annulus(outer, c, target_radius);
        GridPtr g = build_grid(dom, grid->resolution());
        MetricSolution s = solve_metric(problem, mu, g, opts);
        return cache.emplace(key, std::move(s)).first->second;
    };

    SubadditivityReport rep;
    double L = 0.0;
    for (const auto& t : triples) {
        const Point &y = t[0], &x = t[1], &z = t[2];
        const MetricSolution& sol_z = solve_at(z);
        const MetricSolution& sol_x = solve_at(x);
        DiscreteOperator opz(problem, sol_z.values.grid_ptr(), LateralMode::StateConstraint);
        L = std::max({L, opz.max_abs_gradient(sol_z.values.values())});

        TripleRow row;
        row.y = y;
        row.x = x;
        row.z = z;
        row.lhs = m_tilde(sol_z, y);
        row.rhs = m_tilde(sol_x, y) + m_tilde(sol_z, x);
        rep.rows.push_back(row);
    }
    rep.allowance = 10.0 * grid->dx() * std::max(L, 1.0);
    for (auto& row : rep.rows) {
        row.slack = row.rhs - row.lhs + rep.allowance;
        row.pass = row.slack >= 0.0;
        rep.worst_slack = std::min(rep.worst_slack, row.rhs - row.lhs);
        if (!row.pass) {
            rep.pass = false;
            std::ostringstream os;
            os << "subadditivity violated for triple y=(" << row.y[0] << "," << row.y[1]
               << ") x=(" << row.x[0] << "," << row.x[1] << ") z=(" << row.z[0] << "," << row.z[1]
               << "): m~(y,z)=" << row.lhs << " > " << row.rhs << " + " << rep.allowance;
            throw Error(os.str());
        }
    }
    return rep;
}

ConcavityReport check_concavity_in_mu(const ProblemSpec& problem, double mu1, double mu2,
                                      const GridPtr& grid, const MetricOptions& opts) {
    ConcavityReport rep;
    rep.mu_lo = mu1;
    rep.mu_hi = mu2;
    rep.mu_mid = 0.5 * (mu1 + mu2);
    MetricSolution lo = solve_metric(problem, mu1, grid, opts);
    MetricSolution hi = solve_metric(problem, mu2, grid, opts);
    MetricSolution mid = solve_metric(problem, rep.mu_mid, grid, opts);
    rep.tol = 10.0 * (lo.stats.tol + hi.stats.tol + mid.stats.tol) + 1e-10;
    for (int i = 0; i < grid->node_count(); ++i) {
        if (grid->is_boundary(i)) continue;  // extrapolated values are reports, not solutions
        double gap = 0.5 * (lo.values[i] + hi.values[i]) - mid.values[i];
        rep.worst_violation = std::max(rep.worst_violation, gap);
    }
    rep.pass = rep.worst_violation <= rep.tol;
    return rep;
}

DomainMonotonicityReport check_domain_monotonicity(const ProblemSpec& problem_U,
                                                   const ProblemSpec& problem_V, double mu,
                                                   double resolution, const MetricOptions& opts) {
    GridPtr gU = build_grid(problem_U.domain, resolution);
    GridPtr gV = build_grid(problem_V.domain, resolution);
    MetricSolution sU = solve_metric(problem_U, mu, gU, opts);
    MetricSolution sV = solve_metric(problem_V, mu, gV, opts);

    DomainMonotonicityReport rep;
    rep.tol = 10.0 * (sU.stats.tol + sV.stats.tol) + 1e-10;
    for (int j = 0; j < gV->node_count(); ++j) {
        if (!gV->is_interior(j)) continue;
        int i = gU->node_near(gV->position(j));
        if (i < 0) continue;
        if (dist2(gU->position(i), gV->position(j), gU->dimension()) > 0.25 * gU->dx()) continue;
        ++rep.compared_nodes;
        rep.worst_violation = std::max(rep.worst_violation, sU.values[i] - sV.values[j]);
    }
    if (rep.compared_nodes == 0) throw SamplingError("domain monotonicity: no comparable nodes");
    rep.pass = rep.worst_violation <= rep.tol;
    return rep;
}

std::array<double, 2> estimate_hbar_star(const ProblemSpec& problem, const GridPtr& grid,
                                         std::array<double, 2> bracket, double target_width,
                                         const MetricOptions& opts) {
    // Probes only need feasibility, not boundary-layer fidelity: a single
    // weakly forced member keeps the certificate mild and the probe fast.
    MetricOptions probe = opts;
    if (probe.epsilons.empty() && problem.hamiltonian.m <= 2.0) probe.epsilons = {1e-3};
    auto feasible = [&](double mu) {
        MetricSolution s = solve_metric(problem, mu, grid, probe);
        return !s.infeasible && s.stats.converged;
    };
    bool lo_ok = feasible(bracket[0]);
    bool hi_ok = feasible(bracket[1]);
    if (lo_ok == hi_ok)
        throw InputError(lo_ok ? "estimate_hbar_star: both bracket ends feasible"
                               : "estimate_hbar_star: both bracket ends infeasible");
    while (bracket[1] - bracket[0] > target_width) {
        double mid = 0.5 * (bracket[0] + bracket[1]);
        if (feasible(mid))
            bracket[1] = mid;
        else
            bracket[0] = mid;
    }
    return bracket;
}

OscillationReport check_oscillation_bound(const MetricSolution& sol, const ProblemSpec& problem,
                                          const std::vector<Point>& probes) {
    const Grid& grid = sol.values.grid();
    const int dim = grid.dimension();
    const double m = problem.hamiltonian.m;
    OscillationReport rep;
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (const Point& p : probes) {
        double vmin = std::numeric_limits<double>::infinity();
        double vmax = -vmin;
        for (int i = 0; i < grid.node_count(); ++i) {
            if (grid.is_boundary(i)) continue;
            if (dist2(grid.position(i), p, dim) <= 1.0 + 1e-12) {
                vmin = std::min(vmin, sol.values[i]);
                vmax = std::max(vmax, sol.values[i]);
            }
        }
        if (!(vmax >= vmin)) throw SamplingError("oscillation probe ball contains no nodes");
        double osc = vmax - vmin;
        StructuralConstants c5 = structural_constants_centered(problem, p, 5.0);
        double expr = std::pow(std::sqrt(1.0 + c5.lambda1) * c5.lambda2 / c5.a, 2.0 / (m - 1.0)) +
                      std::pow((c5.M + std::abs(sol.mu)) / c5.a, 1.0 / m);
        rep.osc.push_back(osc);
        rep.expr.push_back(expr);
        double C = osc / expr;
        cmin = std::min(cmin, C);
        cmax = std::max(cmax, C);
    }
    rep.fitted_C = cmax;
    rep.stability_ratio = cmin > 0.0 ? cmax / cmin : (cmax == 0.0 ? 1.0 : 1e300);
    rep.pass = rep.stability_ratio <= 5.0;
    return rep;
}

}  // namespace vhj
