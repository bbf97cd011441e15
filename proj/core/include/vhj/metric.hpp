#pragma once

#include <array>
#include <optional>

#include "vhj/state_constraints.hpp"

namespace vhj {

// Maximal subsolution of -tr(A D^2 u) + H(Du,x) = mu vanishing on the closed
// unit-scale target ball, with state constraints on dU.
struct MetricSolution {
    double mu = 0.0;
    Point center{0.0, 0.0};
    double radius = 1.0;
    GridFunction values;
    SolveStats stats;
    EpsilonPath path;
    bool infeasible = false;  // iteration drained: mu likely below Hbar_*
    std::array<double, 2> hbar_bracket{-1e300, 1e300};
};

struct MetricOptions {
    double tol = -1.0;
    long budget = 2000000;
    int max_members = 48;
    double gradient_margin = 1.5;
    double dt_safety = 1.0;
    std::vector<double> epsilons;  // override for the forced path (m <= 2)
    // Infeasible mu (below Hbar_*) shows up as an iterate that keeps sinking:
    // either the values drain below -scale*(1 + |mu|^{1/m} diam), or the
    // residual stays uniformly positive (>= margin at every unknown) across
    // consecutive checkpoints once transients have passed.
    double divergence_floor_scale = 50.0;
    double infeasible_min_residual = -1.0;  // < 0: auto 1e-3 (1 + |mu|)
};

// problem.domain must be an annulus; problem.delta is ignored (the metric
// problem has no zeroth-order term). f acts as a spatially varying addition
// to the level mu.
MetricSolution solve_metric(const ProblemSpec& problem, double mu, const GridPtr& grid,
                            const MetricOptions& opts = {});

// sup of nodal values over the closed ball B_radius(y); ties at the radius
// are included. Throws GeometryError when the ball exits the domain.
double m_tilde(const MetricSolution& sol, const Point& y, double radius = 1.0);

struct TripleRow {
    Point y, x, z;
    double lhs = 0.0;   // m~(y,z)
    double rhs = 0.0;   // m~(y,x) + m~(x,z)
    double slack = 0.0; // rhs - lhs + allowance
    bool pass = true;
};

struct SubadditivityReport {
    bool pass = true;
    double worst_slack = 0.0;  // most negative rhs - lhs (before allowance)
    double allowance = 0.0;    // 10 * dx * L
    std::vector<TripleRow> rows;
};

// For each (y,x,z): m~(y,z) <= m~(y,x) + m~(x,z) + 10*dx*L, L the measured
// Lipschitz bound of the two solutions involved.
SubadditivityReport check_subadditivity(const ProblemSpec& problem, double mu,
                                        const std::vector<std::array<Point, 3>>& triples,
                                        const GridPtr& grid, const MetricOptions& opts = {});

struct ConcavityReport {
    bool pass = true;
    double worst_violation = 0.0;
    double tol = 0.0;
    double mu_lo = 0.0, mu_mid = 0.0, mu_hi = 0.0;
};

// Midpoint concavity in the level: m_{(mu1+mu2)/2} >= (m_{mu1}+m_{mu2})/2 - tol
// nodewise on the free nodes.
ConcavityReport check_concavity_in_mu(const ProblemSpec& problem, double mu1, double mu2,
                                      const GridPtr& grid, const MetricOptions& opts = {});

struct DomainMonotonicityReport {
    bool pass = true;
    double worst_violation = 0.0;
    double tol = 0.0;
    int compared_nodes = 0;
};

// V inside U with the same target: m^U <= m^V + tol on V's free nodes.
DomainMonotonicityReport check_domain_monotonicity(const ProblemSpec& problem_U,
                                                   const ProblemSpec& problem_V, double mu,
                                                   double resolution,
                                                   const MetricOptions& opts = {});

// Bisection on mu: feasible iff solve_metric converges with a bounded inner
// sup. Throws InputError when both bracket ends are (in)feasible.
std::array<double, 2> estimate_hbar_star(const ProblemSpec& problem, const GridPtr& grid,
                                         std::array<double, 2> bracket, double target_width,
                                         const MetricOptions& opts = {});

struct OscillationReport {
    bool pass = true;
    double fitted_C = 0.0;       // max osc/expr across probes
    double stability_ratio = 1.0;  // max/min fitted C
    std::vector<double> osc;
    std::vector<double> expr;
};

// osc over unit probe balls against the structural-constant expression with
// local constants on B_5(probe); asserts the fitted constant is stable
// (max/min <= 5) across probes.
OscillationReport check_oscillation_bound(const MetricSolution& sol, const ProblemSpec& problem,
                                          const std::vector<Point>& probes);

}  // namespace vhj
