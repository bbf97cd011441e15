#include "vhj/state_constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vhj/errors.hpp"

namespace vhj {

namespace {

// eps * d_U^{-m/(m-1)} at every node (distance floored at dx/2 so the values
// stored at on-boundary nodes stay finite; those nodes are never unknowns).
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

}  // namespace

std::vector<int> inner_region_nodes(const Grid& grid, double eps0) {
    std::vector<int> nodes;
    for (int i = 0; i < grid.node_count(); ++i)
        if (grid.is_interior(i) && grid.domain().boundary_distance(grid.position(i)) >= eps0)
            nodes.push_back(i);
    return nodes;
}

std::vector<double> local_gradient_bounds(const DiscreteOperator& op,
                                          const std::vector<double>& init_values, double margin) {
    const Grid& grid = op.grid();
    const double m = op.problem().hamiltonian.m;
    const double inv_dx = 1.0 / grid.dx();
    Point lo, hi;
    grid.domain().bounding_box(lo, hi);
    double a_inf = std::max(1e-12, op.problem().hamiltonian.b
                                       .bounds_on_box(lo, hi, grid.dimension())
                                       .inf);
    double lam = lambda_dp_on_grid(op);

    std::vector<double> pb(grid.node_count(), 1.0);
    for (int i = 0; i < grid.node_count(); ++i) {
        double local_rhs = std::abs(op.rhs()[i]);
        double p_init = 0.0;
        for (int a = 0; a < grid.dimension(); ++a)
            for (int side = 0; side < 2; ++side) {
                int j = grid.neighbor(i, a, side);
                if (j < 0) continue;
                local_rhs = std::max(local_rhs, std::abs(op.rhs()[j]));
                p_init = std::max(p_init, std::abs(init_values[j] - init_values[i]) * inv_dx);
            }
        double p_analytic = std::pow((local_rhs + lam + 1.0) / a_inf, 1.0 / m);
        pb[i] = margin * std::max({p_analytic, p_init, 1.0});
    }
    return pb;
}

double epsilon_path_floor(double maxA, double inf_b, double m) {
    if (maxA <= 0.0 || !(m > 1.0) || m > 2.0) return 0.0;
    double b = std::max(1e-12, inf_b);
    if (m == 2.0) return maxA * maxA / b;
    double g = (2.0 - m) / (m - 1.0);
    double K = std::pow(maxA * (g + 1.0) / (b * std::pow(g, m - 1.0)), 1.0 / (m - 1.0));
    return b * std::pow(K * g, m);
}

bool is_discrete_subsolution(const DiscreteOperator& op, const std::vector<double>& values,
                             double slack, bool require_target_sign) {
    for (int i : op.unknowns())
        if (op.residual_at(values, i) > slack) return false;
    if (require_target_sign) {
        const Grid& grid = op.grid();
        for (int i = 0; i < grid.node_count(); ++i)
            if (grid.is_target(i) && values[i] > slack) return false;
    }
    return true;
}

std::pair<GridFunction, EpsilonPath> solve_state_constraint(const ProblemSpec& problem,
                                                            const GridPtr& grid,
                                                            const StateConstraintOptions& opts) {
    const double m = problem.hamiltonian.m;
    if (!(problem.delta > 0.0))
        throw InputError("solve_state_constraint requires delta > 0 (Thm-4.2 regime)");
    if (!(m > 1.0)) throw InputError("growth exponent must satisfy m > 1");

    DiscreteOperator op(problem, grid, LateralMode::StateConstraint);
    Point blo, bhi;
    grid->domain().bounding_box(blo, bhi);
    double Rdom = std::max(norm2(blo, grid->dimension()), norm2(bhi, grid->dimension()));
    StructuralConstants sc = structural_constants(problem, std::max(2.0, Rdom));

    std::vector<double> base_rhs = op.rhs();  // f at nodes

    std::vector<double> epsilons = opts.epsilons;
    const bool subquadratic = m <= 2.0;
    if (epsilons.empty() && subquadratic) {
        double binf = problem.hamiltonian.b
                          .bounds_on_box(blo, bhi, grid->dimension())
                          .inf;
        double eps_floor = epsilon_path_floor(op.max_abs_A(), binf, m);
        double eps = 1.0;
        for (int k = 0; k < opts.max_members && eps >= eps_floor; ++k, eps *= 0.5)
            epsilons.push_back(eps);
        if (eps_floor > 0.0 && (epsilons.empty() || epsilons.back() > eps_floor))
            epsilons.push_back(std::max(eps_floor, 1e-300));
    }
    if (epsilons.empty()) epsilons.push_back(0.0);  // m > 2: direct, unforced

    const double eps0 = opts.eps0_override.value_or(grid->eps0());
    std::vector<int> inner = inner_region_nodes(*grid, eps0);

    EpsilonPath path;
    GridFunction u(grid);
    Point lo, hi;
    grid->domain().bounding_box(lo, hi);
    FieldBounds fbound = problem.f.bounds_on_box(lo, hi, grid->dimension());

    double cauchy_ref_tol = 1e-8 * (1.0 + std::max(std::abs(fbound.inf), std::abs(fbound.sup)));
    if (opts.tol > 0.0) cauchy_ref_tol = opts.tol;

    // One dissipation field for the whole path, sized by the most strongly
    // forced member: members must share the discrete operator or the
    // epsilon-ordering is not protected by comparison.
    GridFunction start(grid);
    double c0 = -(sc.lambda1 + std::max(0.0, -fbound.inf)) / problem.delta;
    for (int i = 0; i < grid->node_count(); ++i) start[i] = std::min(0.0, c0);
    op.set_rhs(base_rhs);
    if (epsilons.front() > 0.0) op.add_to_rhs(forcing_profile(*grid, m, epsilons.front()));
    std::vector<double> pb = local_gradient_bounds(op, start.values(), opts.gradient_margin);
    SchemeParams params = make_certified_params_local(op, pb, opts.dt_safety);

    GridFunction prev(grid);
    bool have_prev = false;
    double prev_tol = 0.0;
    std::vector<double> prev_scale;
    for (size_t k = 0; k < epsilons.size(); ++k) {
        const double eps = epsilons[k];
        op.set_rhs(base_rhs);
        if (eps > 0.0) op.add_to_rhs(forcing_profile(*grid, m, eps));
        std::vector<double> scale(grid->node_count(), 1.0);
        for (int i = 0; i < grid->node_count(); ++i) scale[i] = 1.0 + std::abs(op.rhs()[i]);

        SolveOptions sopts;
        sopts.tol = opts.tol > 0.0 ? opts.tol : -1.0;
        sopts.budget = opts.budget;

        const GridFunction& init = have_prev ? prev : start;
        auto [sol, stats] = solve_stationary(op, params, init, nullptr, sopts);
        extrapolate_boundary(op, sol.values());

        path.epsilons.push_back(eps);
        path.stats.push_back(stats);
        double si = 0.0;
        for (int i : inner) si = std::max(si, std::abs(sol[i]));
        path.sup_inner.push_back(si);
        if (m < 2.0 && eps > 0.0) {
            SandwichReport fit = barrier_sandwich_check(sol, m, eps0);
            path.fitted_exponent.push_back(fit.no_blowup ? 0.0 : fit.fitted_exponent);
        } else {
            path.fitted_exponent.push_back(0.0);
        }

        if (have_prev) {
            // Step-5 ordering: smaller eps lies below, up to solver slack.
            double slack =
                10.0 * (stats.tol + prev_tol) / problem.delta + 1e-12 * (1.0 + prev.sup_norm());
            double worst = 0.0;
            for (int i : op.unknowns()) worst = std::max(worst, sol[i] - prev[i]);
            path.worst_violation = std::max(path.worst_violation, worst);
            if (worst > slack) path.monotone_ok = false;

            // Cauchy stopping rule on the inner region.
            double diff = 0.0;
            for (int i : inner) diff = std::max(diff, std::abs(sol[i] - prev[i]));
            path.solutions.push_back(sol);
            u = sol;
            prev = std::move(sol);
            prev_tol = stats.tol;
            if (opts.epsilons.empty() && diff < 10.0 * cauchy_ref_tol) break;
        } else {
            path.solutions.push_back(sol);
            u = sol;
            prev = std::move(sol);
            prev_tol = stats.tol;
            have_prev = true;
        }
    }
    return {u, path};
}

SandwichReport barrier_sandwich_check(const GridFunction& u, double m, double band_depth,
                                      std::optional<double> expected_exponent,
                                      double exponent_tol) {
    const Grid& grid = u.grid();
    if (!(m > 1.0 && m <= 2.0))
        throw InputError("barrier_sandwich_check covers 1 < m <= 2");

    struct BandNode {
        double d;
        double val;
    };
    std::vector<BandNode> band;
    for (int i = 0; i < grid.node_count(); ++i) {
        if (!grid.is_interior(i)) continue;
        double d = grid.domain().boundary_distance(grid.position(i));
        if (d < band_depth) band.push_back({d, u[i]});
    }
    if (band.size() < 8)
        throw SamplingError("barrier_sandwich_check: band empty at this resolution");

    SandwichReport rep;
    rep.band_nodes = static_cast<int>(band.size());
    rep.tolerance = exponent_tol;

    // Model regressor: zeta-profile (without the deep clip; the band is the
    // blow-up region).
    auto model = [&](double d) {
        return m == 2.0 ? 1.0 - std::log(d) : std::pow(d, (m - 2.0) / (m - 1.0));
    };

    // Linear LS of u ~ coeff * model(d) + C0.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(band.size());
    for (const auto& bn : band) {
        double z = model(bn.d);
        sx += z;
        sy += bn.val;
        sxx += z * z;
        sxy += z * bn.val;
    }
    double coeff = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double offset = (sy - coeff * sx) / n;
    rep.log_coefficient = coeff;
    rep.offset = offset;

    // Bounded-solution regime: the barrier component is negligible against
    // the value scale.
    double vmin = band.front().val, vmax = band.front().val;
    double zmin = model(band.front().d), zmax = zmin;
    for (const auto& bn : band) {
        vmin = std::min(vmin, bn.val);
        vmax = std::max(vmax, bn.val);
        zmin = std::min(zmin, model(bn.d));
        zmax = std::max(zmax, model(bn.d));
    }
    double scale = 1.0 + std::max(std::abs(vmin), std::abs(vmax));
    if (std::abs(coeff) * (zmax - zmin) < 1e-3 * scale) {
        rep.no_blowup = true;
        rep.fitted_exponent = 0.0;
    } else if (m < 2.0) {
        // Empirical exponent after removing the fitted offset.
        double tx = 0, ty = 0, txx = 0, txy = 0;
        double cnt = 0;
        for (const auto& bn : band) {
            double w = bn.val - offset;
            if (!(w > 0.0)) continue;
            double lx = std::log(bn.d), ly = std::log(w);
            tx += lx;
            ty += ly;
            txx += lx * lx;
            txy += lx * ly;
            cnt += 1.0;
        }
        if (cnt < 8) throw SamplingError("barrier_sandwich_check: too few positive band values");
        rep.fitted_exponent = (cnt * txy - tx * ty) / (cnt * txx - tx * tx);
    }

    // Envelope constants against the (clipped) barrier zeta.
    double C_upper = 0.0;
    for (const auto& bn : band) {
        double z = zeta_of_distance(std::max(bn.d, 0.5 * grid.dx()), m);
        C_upper = std::max(C_upper, bn.val / z);
    }
    C_upper = std::max(C_upper, 0.0);
    double c_lower = std::numeric_limits<double>::infinity();
    for (const auto& bn : band) {
        double z = zeta_of_distance(std::max(bn.d, 0.5 * grid.dx()), m);
        c_lower = std::min(c_lower, (bn.val + C_upper) / z);
    }
    rep.C_upper = C_upper;
    rep.c_lower = std::isfinite(c_lower) ? c_lower : 0.0;

    if (expected_exponent && !rep.no_blowup && m < 2.0) {
        rep.expected = *expected_exponent;
        rep.pass = std::abs(rep.fitted_exponent - rep.expected) <= exponent_tol;
    }
    return rep;
}

}  // namespace vhj
