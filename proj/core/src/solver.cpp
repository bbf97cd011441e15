#include "vhj/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "vhj/errors.hpp"

namespace vhj {

namespace {

double auto_tolerance(double requested) { return requested > 0.0 ? requested : 1e-8; }

// Nodewise relaxation steps: with a local dissipation field each node runs at
// its own certified pseudo-time step (the fixed point does not depend on the
// step; the boundary layer's stiff nodes must not throttle the interior).
// The caller's dt safety factor is inherited from params.dt.
std::vector<double> relaxation_steps(const DiscreteOperator& op, const SchemeParams& params) {
    const Grid& grid = op.grid();
    std::vector<double> dt(grid.node_count(), params.dt);
    if (!op.has_local_theta()) return dt;
    const double dx = grid.dx();
    const int dim = grid.dimension();
    double denom_max = 2.0 * dim * op.max_abs_A() / (dx * dx) +
                       dim * op.theta_max() / dx + std::max(0.0, op.delta());
    const double safety = params.dt * denom_max;  // <= 1 by the certificate
    for (int i = 0; i < grid.node_count(); ++i) {
        double denom = 2.0 * dim * op.max_abs_A() / (dx * dx) +
                       dim * op.theta_field()[i] / dx + std::max(0.0, op.delta());
        dt[i] = safety / denom;
    }
    return dt;
}

void throw_if_nonfinite(const DiscreteOperator& op, const std::vector<double>& values) {
    for (int i : op.unknowns()) {
        if (!std::isfinite(values[i])) {
            const Point& x = op.grid().position(i);
            throw InstabilityError("instability: non-finite value at node " + std::to_string(i) +
                                   " (x=" + std::to_string(x[0]) +
                                   (op.grid().dimension() == 2 ? "," + std::to_string(x[1]) : "") +
                                   ")");
        }
    }
}

}  // namespace

double sweep_once(const DiscreteOperator& op, const SchemeParams& params,
                  std::vector<double>& values, const PinnedMask* pinned) {
    const std::vector<int>& unknowns = op.unknowns();
    std::vector<double> res(unknowns.size());
    op.residual_unknowns(values, res);
    double sup = 0.0;
    for (size_t k = 0; k < unknowns.size(); ++k) {
        const int i = unknowns[k];
        if (pinned && (*pinned)[i]) continue;
        sup = std::max(sup, std::abs(res[k]));
        values[i] -= params.dt * res[k];
    }
    return sup;
}

double absolute_tolerance(const DiscreteOperator& op, double tol_base) {
    double scale = 1.0;
    for (int i : op.unknowns()) scale = std::max(scale, 1.0 + std::abs(op.rhs()[i]));
    return tol_base * scale;
}

std::pair<GridFunction, SolveStats> solve_stationary(DiscreteOperator& op, SchemeParams params,
                                                     const GridFunction& init,
                                                     const PinnedMask* pinned,
                                                     const SolveOptions& opts) {
    const std::vector<int>& unknowns = op.unknowns();
    SolveStats stats;
    stats.tol = auto_tolerance(opts.tol);

    bool any_pinned = false;
    if (pinned)
        for (char c : *pinned)
            if (c) {
                any_pinned = true;
                break;
            }
    if (op.delta() <= 0.0 && !any_pinned)
        throw InputError(
            "delta = 0 stationary solve without a pinned target set is refused "
            "(nothing anchors the iteration)");

    if (opts.require_certified && !params.cfl_certified)
        throw CertificateError(
            "solve_stationary: scheme parameters are not certified (run certify_monotonicity)");
    if (!op.has_local_theta()) op.set_theta(params.theta);
    std::vector<double> dt = relaxation_steps(op, params);

    std::vector<double> inv_scale(unknowns.size());
    for (size_t k = 0; k < unknowns.size(); ++k)
        inv_scale[k] = 1.0 / (1.0 + std::abs(op.rhs()[unknowns[k]]));

    GridFunction u = init;
    std::vector<double>& values = u.values();
    std::vector<double> res(unknowns.size());
    std::vector<double> prev;

    auto t0 = std::chrono::steady_clock::now();
    long iter = 0;
    for (;; ++iter) {
        op.residual_unknowns(values, res);
        double sup = 0.0;
        for (size_t k = 0; k < unknowns.size(); ++k) {
            if (pinned && (*pinned)[unknowns[k]]) continue;
            sup = std::max(sup, std::abs(res[k]) * inv_scale[k]);
        }
        if (!std::isfinite(sup)) throw_if_nonfinite(op, values);
        stats.final_residual_sup = sup;
        if (sup <= stats.tol) {
            stats.converged = true;
            break;
        }
        if (iter >= opts.budget) break;

        if (opts.assert_monotone_decrease) prev = values;
        for (size_t k = 0; k < unknowns.size(); ++k) {
            const int i = unknowns[k];
            if (pinned && (*pinned)[i]) continue;
            values[i] -= dt[i] * res[k];
        }
        if (opts.assert_monotone_decrease) {
            double worst = 0.0;
            for (int i : unknowns) worst = std::max(worst, values[i] - prev[i]);
            stats.max_increase_seen = std::max(stats.max_increase_seen, worst);
        }
        if (opts.gradient_check_stride > 0 && iter % opts.gradient_check_stride == 0) {
            double g = op.max_abs_gradient(values);
            stats.max_gradient_seen = std::max(stats.max_gradient_seen, g);
            if (g > params.gradient_bound) stats.gradient_bound_exceeded = true;
        }
    }
    stats.iterations = iter;
    stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    u.check_finite("solve_stationary result");
    return {std::move(u), stats};
}

Trajectory solve_time_dependent(DiscreteOperator& op, SchemeParams params, const GridFunction& u0,
                                double T, int snapshot_every, const PinnedMask* pinned,
                                const SolveOptions& opts) {
    if (!(T > 0.0)) throw InputError("solve_time_dependent requires T > 0");
    if (opts.require_certified && !params.cfl_certified)
        throw CertificateError("solve_time_dependent: scheme parameters are not certified");
    op.set_delta(0.0);  // the march carries the time derivative instead
    if (!op.has_local_theta()) op.set_theta(params.theta);

    long n_steps = std::max<long>(1, static_cast<long>(std::ceil(T / params.dt)));
    double dt = T / static_cast<double>(n_steps);
    if (snapshot_every <= 0) snapshot_every = static_cast<int>(n_steps);

    Trajectory traj;
    traj.dt = dt;
    traj.T = T;
    GridFunction u = u0;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(u);

    const std::vector<int>& unknowns = op.unknowns();
    std::vector<double> res(unknowns.size());
    for (long step = 1; step <= n_steps; ++step) {
        op.residual_unknowns(u.values(), res);
        double sup = 0.0;
        for (size_t k = 0; k < unknowns.size(); ++k) {
            const int i = unknowns[k];
            if (pinned && (*pinned)[i]) continue;
            sup = std::max(sup, std::abs(res[k]));
            u.values()[i] -= dt * res[k];
        }
        if (!std::isfinite(sup)) throw_if_nonfinite(op, u.values());
        if (step % snapshot_every == 0 || step == n_steps) {
            traj.times.push_back(step * dt);
            traj.snapshots.push_back(u);
        }
    }
    return traj;
}

void extrapolate_boundary(const DiscreteOperator& op, std::vector<double>& values) {
    const Grid& grid = op.grid();
    for (int i = 0; i < grid.node_count(); ++i) {
        if (!grid.is_boundary(i)) continue;
        double acc = 0.0;
        int count = 0;
        double fallback = 0.0;
        int fallback_count = 0;
        for (int a = 0; a < grid.dimension(); ++a)
            for (int side = 0; side < 2; ++side) {
                int j1 = grid.neighbor(i, a, side);
                if (j1 < 0) continue;
                if (grid.is_interior(j1) || grid.is_target(j1)) {
                    int j2 = grid.neighbor(j1, a, side);
                    if (j2 >= 0 && (grid.is_interior(j2) || grid.is_target(j2))) {
                        acc += 2.0 * values[j1] - values[j2];
                        ++count;
                    } else {
                        fallback += values[j1];
                        ++fallback_count;
                    }
                }
            }
        if (count > 0)
            values[i] = acc / count;
        else if (fallback_count > 0)
            values[i] = fallback / fallback_count;
    }
}

OrderFit fit_order(const std::vector<std::array<double, 2>>& h_err) {
    if (h_err.size() < 2) throw InputError("fit_order needs at least two (h, err) points");
    OrderFit fit;
    fit.points = h_err;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h_err.size());
    for (const auto& p : h_err) {
        if (!(p[0] > 0.0) || !(p[1] > 0.0))
            throw InputError("fit_order requires positive h and err");
        double lx = std::log(p[0]), ly = std::log(p[1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.order * sx) / n;
    // Errors should shrink with h; flag otherwise but still report the slope.
    for (size_t i = 1; i < h_err.size(); ++i) {
        bool h_smaller = h_err[i][0] < h_err[i - 1][0];
        bool e_smaller = h_err[i][1] < h_err[i - 1][1];
        if (h_smaller != e_smaller) fit.monotone = false;
    }
    return fit;
}

OrderFit richardson_order(const std::vector<double>& resolutions,
                          const std::function<double(double)>& error_at_resolution) {
    if (resolutions.size() < 3) throw InputError("richardson_order needs at least 3 resolutions");
    std::vector<std::array<double, 2>> pts;
    for (double r : resolutions) pts.push_back({1.0 / r, error_at_resolution(r)});
    return fit_order(pts);
}

PinnedMask pin_targets(const Grid& grid) {
    PinnedMask mask(grid.node_count(), 0);
    for (int i = 0; i < grid.node_count(); ++i)
        if (grid.is_target(i)) mask[i] = 1;
    return mask;
}

PinnedMask pin_targets_and_boundary(const Grid& grid) {
    PinnedMask mask(grid.node_count(), 0);
    for (int i = 0; i < grid.node_count(); ++i)
        if (grid.is_target(i) || grid.is_boundary(i)) mask[i] = 1;
    return mask;
}

}  // namespace vhj
