#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vhj/fields.hpp"
#include "vhj/geometry.hpp"

namespace vhj {

// Convex power-law Hamiltonian H(p,x) = b(x)|p|^m + v(x).p with growth
// exponent m > 1, coercivity weight b bounded away from zero, and an optional
// Lipschitz drift v. Convexity in p is automatic for this family.
struct HamiltonianSpec {
    double m = 2.0;
    ScalarField b = ScalarField::constant(1.0);
    VectorField drift;  // zero by default

    bool has_drift() const { return !drift.is_zero(); }
};

struct DiffusionSpec {
    SigmaField sigma;
    bool is_zero() const { return sigma.is_zero(); }
};

// Full coefficient bundle for  delta*u - tr(A(x) D^2 u) + H(Du,x) = f.
struct ProblemSpec {
    HamiltonianSpec hamiltonian;
    DiffusionSpec diffusion;
    ScalarField f = ScalarField::constant(0.0);
    double delta = 0.0;
    Domain domain = Domain::interval(-1.0, 1.0);

    int dimension() const { return domain.dimension(); }
};

// H(p,x) for the power-law family.
double eval_H(const HamiltonianSpec& spec, const double p[2], const Point& x, int dim);

// Certified structural constants on the ball B_R about the origin. The paper
// convention 0 < a_R <= 1 <= M_R, Lambda_1 applies to H - f; lambda1_dp is the
// p-Lipschitz constant alone (no f contribution) and is what the scheme's
// dissipation certificate uses. Lambda_2 is always evaluated on B_2.
struct StructuralConstants {
    double a = 1.0;        // coercivity weight (inf of b, clamped to <= 1)
    double M = 1.0;        // additive slack (drift deficit, f, x-Lipschitz parts)
    double lambda1 = 1.0;  // growth + x-Lipschitz constant for H - f
    double lambda1_dp = 1.0;  // p-Lipschitz constant: |H(p,x)-H(q,x)| <= L1dp(|p|+|q|+1)^{m-1}|p-q|
    double lambda2 = 0.0;  // sup |sigma| and Lip(sigma) on B_2
};

StructuralConstants structural_constants(const ProblemSpec& problem, double R);

// Constants of the problem shifted to `center` (the ball B_R about that
// point); Lambda_2 is evaluated on B_2(center).
StructuralConstants structural_constants_centered(const ProblemSpec& problem, const Point& center,
                                                  double R);

// Dense-sampling audit of the structural inequalities; throws
// HypothesisViolation naming the failed inequality. samples_per_unit defaults
// to the certification density of 1000 points per unit length per axis (in 2D
// the lattice is thinned to keep the budget comparable).
struct AuditReport {
    bool ok = true;
    std::vector<std::string> checked;
};
AuditReport audit_hypotheses(const ProblemSpec& problem, double R,
                             double samples_per_unit = 1000.0);

// Legendre-Fenchel transform L(q,x) = sup_p (p.q - H(p,x)).
// Closed form (drift-free): L = c_m b^{-1/(m-1)} |q|^{m/(m-1)},
// c_m = (m-1) m^{-m/(m-1)}.
double legendre_transform(const HamiltonianSpec& spec, const double q[2], const Point& x, int dim);

// Numeric sup over |p| <= search_radius with a certified bracket; throws
// AccuracyError if the bracket cannot be tightened to tol.
double legendre_transform_numeric(const HamiltonianSpec& spec, const double q[2], const Point& x,
                                  int dim, double search_radius, double tol);

// Deterministic (A == 0, b == 1, v == 0) metric oracle: the maximal
// subsolution of |Du|^m = mu vanishing on the closed ball. Minimizing
// T -> mu*T + T*L(dist/T) over T > 0 collapses to mu^{1/m} * dist(x, ball).
double hopf_lax_metric_oracle(double m, double mu, const Point& x, const Point& ball_center,
                              double ball_radius, int dim);

}  // namespace vhj
