#pragma once

#include <optional>

#include "vhj/solver.hpp"

namespace vhj {

// Solutions of the forced problems along a decreasing epsilon sequence.
// Solutions are nonincreasing in the path index (decreasing epsilon) up to
// solver tolerance; a violation beyond the slack flags a scheme defect.
struct EpsilonPath {
    std::vector<double> epsilons;
    std::vector<GridFunction> solutions;
    std::vector<double> sup_inner;         // sup |u| on the inner region U_{eps0}
    std::vector<double> fitted_exponent;   // boundary-growth exponent per member (m < 2)
    std::vector<SolveStats> stats;
    bool monotone_ok = true;
    double worst_violation = 0.0;          // max nodewise increase between members
};

struct StateConstraintOptions {
    // Explicit epsilon sequence. Empty: for 1 < m <= 2 a geometric path
    // 1, 1/2, 1/4, ... is generated and stopped by the Cauchy rule below (or
    // max_members); for m > 2 the problem is solved directly with no forcing.
    std::vector<double> epsilons;
    int max_members = 48;
    // Stop when successive solutions differ by less than 10*tol on U_{eps0}.
    double tol = -1.0;  // < 0: auto per member
    long budget = 1000000;
    double gradient_margin = 1.5;
    double dt_safety = 1.0;
    std::optional<double> eps0_override;  // inner-region depth
};

// Maximal subsolution of the state-constraint problem
//   delta u - tr(A D^2 u) + H(Du,x) = f   (state constrained on dU)
// via the epsilon-forced path f + eps * d_U^{-m/(m-1)} for 1 < m <= 2
// (direct solve for m > 2). Interior nodes are the unknowns; boundary nodes
// are excluded from the unknown set and reported by one-sided extrapolation.
// The first member is approached monotonically from below starting at the
// constant subsolution -(Lambda_1 + sup f_-)/delta; later members warm-start
// from the previous solution and decrease.
std::pair<GridFunction, EpsilonPath> solve_state_constraint(const ProblemSpec& problem,
                                                            const GridPtr& grid,
                                                            const StateConstraintOptions& opts);

// Least-squares fit of u against the barrier model on the band of interior
// nodes with d_U < band_depth:
//   1 < m < 2 : u ~ c * d^e + C0, exponent e fitted after removing C0
//   m = 2     : u ~ k * (1 - log d) + C0
// Reports envelope constants (c_lower, C_upper) with
// c_lower * zeta - C_upper <= u <= C_upper * zeta on the band.
struct SandwichReport {
    double fitted_exponent = 0.0;  // m < 2 only
    double log_coefficient = 0.0;  // m = 2: k; m < 2: c
    double offset = 0.0;           // C0
    double c_lower = 0.0;
    double C_upper = 0.0;
    int band_nodes = 0;
    bool no_blowup = false;
    bool pass = true;
    double expected = 0.0;
    double tolerance = 0.0;
};

SandwichReport barrier_sandwich_check(const GridFunction& u, double m, double band_depth,
                                      std::optional<double> expected_exponent = std::nullopt,
                                      double exponent_tol = 0.15);

// Nodes of the inner region U_{eps0} (interior nodes with d_U >= eps0).
std::vector<int> inner_region_nodes(const Grid& grid, double eps0);

// Nodewise gradient bound for a forced solve: coercivity envelope of the rhs
// over the node's stencil neighborhood, combined with the slopes the initial
// iterate already realizes. Feeds the per-node dissipation field.
std::vector<double> local_gradient_bounds(const DiscreteOperator& op,
                                          const std::vector<double>& init_values, double margin);

// Mesh-coupled floor for the epsilon path when diffusion is present. The
// one-sided cells next to dU drop their diffusion term, so the forcing must
// stand in for it; below this level the discrete blow-up layer decouples
// from the diffusion that drives it in the continuum.
//   1 < m < 2: eps = b (K g)^m, K = (A(g+1)/(b g^{m-1}))^{1/(m-1)}, g = (2-m)/(m-1)
//   m = 2:     eps = A^2 / b
double epsilon_path_floor(double maxA, double inf_b, double m);

// True when `values` is a discrete subsolution: residual <= slack at every
// unknown (and <= 0 constraint on targets when require_target_sign is set).
bool is_discrete_subsolution(const DiscreteOperator& op, const std::vector<double>& values,
                             double slack, bool require_target_sign = false);

}  // namespace vhj
