#pragma once

#include <array>
#include <functional>
#include <vector>

#include "vhj/scheme.hpp"

namespace vhj {

// Residuals are judged nodewise against the local data scale: converged
// means |res_i| <= tol * (1 + |rhs_i|) at every unknown. Forced problems
// carry right sides spanning many orders of magnitude between the boundary
// layer and the interior; a uniform absolute tolerance would either
// over-resolve the layer or leave the interior sloppy.
struct SolveStats {
    long iterations = 0;
    double final_residual_sup = 0.0;  // worst |res_i| / (1 + |rhs_i|)
    bool converged = false;
    double wall_time_s = 0.0;
    double tol = 0.0;  // the relative tolerance used
    double max_gradient_seen = 0.0;
    bool gradient_bound_exceeded = false;
    // Largest nodewise step against the armed monotonicity direction
    // (should stay at rounding level).
    double max_increase_seen = 0.0;
};

struct SolveOptions {
    double tol = -1.0;  // relative; < 0: 1e-8
    long budget = 1000000;
    bool require_certified = true;       // refuse uncertified params
    bool assert_monotone_decrease = false;
    int gradient_check_stride = 64;
};

// Largest absolute residual the relative criterion admits anywhere; the
// sup-norm value error of a converged delta > 0 solve is bounded by
// absolute_tolerance / delta.
double absolute_tolerance(const DiscreteOperator& op, double tol_base);

// Nodes held fixed during the iteration (Dirichlet data, metric targets).
using PinnedMask = std::vector<char>;

// One Jacobi sweep u <- u - dt * residual(u) on the unknowns, skipping pinned
// nodes. Returns the sup-norm of the residual it applied.
double sweep_once(const DiscreteOperator& op, const SchemeParams& params,
                  std::vector<double>& values, const PinnedMask* pinned = nullptr);

// Pseudo-time fixed point for the stationary equation. Residual sup-norm is
// the convergence metric. delta > 0 contracts; delta = 0 is accepted only
// when the pinned set is nonempty (metric mode). The explicit update is
// certified for iterates whose difference quotients stay under
// params.gradient_bound; initial data that jumps against pinned values by
// O(1) leaves that regime and can blow up (reported as InstabilityError
// naming the node).
std::pair<GridFunction, SolveStats> solve_stationary(DiscreteOperator& op, SchemeParams params,
                                                     const GridFunction& init,
                                                     const PinnedMask* pinned,
                                                     const SolveOptions& opts);

struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> snapshots;
    double dt = 0.0;
    double T = 0.0;
};

// Explicit march of u_t - tr(A D^2 u) + H(Du,x) = f (no zeroth-order term).
// Lateral data: pinned nodes hold their initial values.
Trajectory solve_time_dependent(DiscreteOperator& op, SchemeParams params, const GridFunction& u0,
                                double T, int snapshot_every, const PinnedMask* pinned,
                                const SolveOptions& opts);

// After a state-constraint solve, boundary nodes carry values induced by
// one-sided linear extrapolation from the interior (reported, never solved).
void extrapolate_boundary(const DiscreteOperator& op, std::vector<double>& values);

// Least-squares slope of log(err) against log(h). Non-monotone errors are
// reported, not fatal.
struct OrderFit {
    double order = 0.0;
    double intercept = 0.0;
    bool monotone = true;
    std::vector<std::array<double, 2>> points;  // (h, err)
};
OrderFit fit_order(const std::vector<std::array<double, 2>>& h_err);

// Refinement study driver: solve(resolution) returns the sup error at that
// resolution.
OrderFit richardson_order(const std::vector<double>& resolutions,
                          const std::function<double(double)>& error_at_resolution);

// Default pinned mask helpers.
PinnedMask pin_targets(const Grid& grid);
PinnedMask pin_targets_and_boundary(const Grid& grid);

}  // namespace vhj
