#pragma once

#include <string>
#include <vector>

#include "vhj/coefficients.hpp"
#include "vhj/grid.hpp"

namespace vhj {

// Numerical dissipation and pseudo-time step, with the two monotonicity
// conditions that make the explicit update order-preserving:
//   theta >= Lambda_1^dp (2P+1)^{m-1}   (dominates the p-Lipschitz bound of H)
//   dt <= 1 / (2 d maxA/dx^2 + d theta/dx + delta)
// P is an a-priori bound on the one-sided difference quotients the run will
// encounter.
struct SchemeParams {
    double theta = 0.0;
    double dt = 0.0;
    double gradient_bound = 1.0;  // P
    bool cfl_certified = false;
};

struct Certificate {
    bool ok = false;
    std::string failure;             // names the failing node and bound
    double theta_required = 0.0;
    double dt_bound = 0.0;
    std::vector<std::string> notes;
};

// Lax-Friedrichs numerical Hamiltonian
//   Hhat(p-, p+, x) = H((p- + p+)/2, x) - (theta/2) sum_axes (p+_a - p-_a).
// Consistent (Hhat(p,p,x) = H(p,x)); monotone in each one-sided slope once
// theta dominates |dH/dp|. Chosen over Godunov because it is jointly convex
// in (p-, p+), which makes the discrete convex-combination and extrapolation
// identities exact.
double lf_hamiltonian(const HamiltonianSpec& spec, const double p_minus[2], const double p_plus[2],
                      const Point& x, double theta, int dim);

// How lateral boundary nodes participate in a solve:
//   Dirichlet       -- boundary nodes carry pinned data and feed neighboring
//                      stencils.
//   StateConstraint -- boundary nodes are excluded from the unknown set and
//                      from neighboring stencils; interior nodes adjacent to
//                      them fall back to one-sided differences (interior-only
//                      stencils).
enum class LateralMode { Dirichlet, StateConstraint };

// Discrete operator  delta*u - tr(A D^2 u) + Hhat(D-u, D+u, x) - rhs  with all
// coefficients frozen onto the grid at construction. Evaluation at a node
// reads only the given iterate, so Jacobi sweeps parallelize trivially.
class DiscreteOperator {
  public:
    DiscreteOperator(const ProblemSpec& problem, GridPtr grid, LateralMode mode);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    LateralMode mode() const { return mode_; }
    double delta() const { return delta_; }
    void set_delta(double d) { delta_ = d; }

    // Dissipation is per node (forced problems need it large only inside the
    // boundary layer; a uniform theta sized for the layer smears the interior
    // profile). set_theta installs a uniform value; set_local_theta derives
    // theta_i = lambda_dp (2 P_i + 1)^{m-1} from a nodewise gradient bound
    // and returns the max.
    double theta_max() const { return theta_max_; }
    bool has_local_theta() const { return has_local_theta_; }
    void set_theta(double t);
    double set_local_theta(const std::vector<double>& p_bound, double lambda_dp);
    const std::vector<double>& theta_field() const { return theta_; }
    const std::vector<double>& p_bound_field() const { return p_bound_; }

    // rhs defaults to f at the nodes; solvers overwrite it for forced or
    // level-set problems.
    const std::vector<double>& rhs() const { return rhs_; }
    void set_rhs(std::vector<double> rhs);
    void add_to_rhs(const std::vector<double>& extra);

    // Unknowns are the interior nodes.
    const std::vector<int>& unknowns() const { return unknowns_; }

    double residual_at(const std::vector<double>& u, int node) const;
    // Residual at every unknown, in the order of unknowns().
    void residual_unknowns(const std::vector<double>& u, std::vector<double>& out) const;
    double sup_residual_unknowns(const std::vector<double>& u) const;

    // Largest realized one-sided difference quotient over unknown stencils;
    // used to monitor the gradient-bound certificate during a run.
    double max_abs_gradient(const std::vector<double>& u) const;

    // Coefficient maxima the CFL bound needs.
    double max_abs_A() const { return maxA_; }
    bool cross_dominance_ok(std::string* why = nullptr) const;

    const ProblemSpec& problem() const { return problem_; }

  private:
    ProblemSpec problem_;
    GridPtr grid_;
    LateralMode mode_;
    int dim_;
    double dx_, inv_dx_, inv_dx2_;
    double delta_ = 0.0;
    std::vector<double> theta_;
    std::vector<double> p_bound_;
    double theta_max_ = 0.0;
    bool has_local_theta_ = false;
    double m_ = 2.0;

    std::vector<double> rhs_;
    std::vector<double> b_;       // coercivity weight at nodes
    std::vector<double> vx_, vy_; // drift at nodes
    std::vector<double> a11_, a22_, a12_;
    bool has_diffusion_ = false;
    bool has_drift_ = false;
    // Mode-effective stencil: per node, [xm, xp, ym, yp], -1 when the side is
    // unavailable for differencing.
    std::vector<int> stencil_;
    std::vector<int> diag_;      // NE, SW, SE, NW (-1 when unavailable)
    std::vector<int> unknowns_;
    double maxA_ = 0.0;
};

// Checks the two SchemeParams invariants (plus, in 2D, diagonal dominance of
// A for the sign-split cross stencil) against the certified coefficient
// bounds; on success marks params.cfl_certified.
Certificate certify_monotonicity(const DiscreteOperator& op, SchemeParams& params);

// Smallest certified parameter set for a given gradient bound.
SchemeParams make_certified_params(const DiscreteOperator& op, double gradient_bound,
                                   double dt_safety = 1.0);

// Installs a nodewise dissipation field derived from a nodewise gradient
// bound and returns certified parameters (params.theta carries the max).
SchemeParams make_certified_params_local(DiscreteOperator& op, const std::vector<double>& p_bound,
                                         double dt_safety = 1.0);

// The certified p-Lipschitz constant of H on the grid's bounding box.
double lambda_dp_on_grid(const DiscreteOperator& op);

// |p|^m from |p|^2, with fast paths for the common exponents.
double pow_m_from_sq(double p_sq, double m);

}  // namespace vhj
