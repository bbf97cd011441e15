#include "vhj/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vhj/errors.hpp"

namespace vhj {

double eval_H(const HamiltonianSpec& spec, const double p[2], const Point& x, int dim) {
    double p2 = p[0] * p[0];
    if (dim == 2) p2 += p[1] * p[1];
    double pnorm = std::sqrt(p2);
    double v = spec.b(x, dim) * std::pow(pnorm, spec.m);
    if (spec.has_drift()) {
        double d[2];
        spec.drift.eval(x, dim, d);
        v += d[0] * p[0];
        if (dim == 2) v += d[1] * p[1];
    }
    return v;
}

namespace {

// Bounding box of B_R about a center (constants are certified on the ball's
// bounding box; valid since envelopes only widen on larger sets).
void ball_box(const Point& c, double R, int dim, Point& lo, Point& hi) {
    lo = {c[0] - R, dim == 2 ? c[1] - R : 0.0};
    hi = {c[0] + R, dim == 2 ? c[1] + R : 0.0};
}

struct DriftBounds {
    double sup = 0.0;  // sup |v|
    double lip = 0.0;  // Lip(v)
};

DriftBounds drift_bounds(const VectorField& v, const Point& lo, const Point& hi, int dim) {
    DriftBounds out;
    if (v.is_zero()) return out;
    double s2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        FieldBounds b = v.comp[a].bounds_on_box(lo, hi, dim);
        double amax = std::max(std::abs(b.inf), std::abs(b.sup));
        s2 += amax * amax;
        out.lip += b.lip;
    }
    out.sup = std::sqrt(s2);
    return out;
}

}  // namespace

StructuralConstants structural_constants_centered(const ProblemSpec& problem, const Point& center,
                                                  double R) {
    if (!(R > 0.0)) throw InputError("structural_constants requires R > 0");
    const int dim = problem.dimension();
    const double m = problem.hamiltonian.m;
    Point lo, hi;
    ball_box(center, R, dim, lo, hi);

    FieldBounds bb = problem.hamiltonian.b.bounds_on_box(lo, hi, dim);
    if (!(bb.inf > 0.0))
        throw HypothesisViolation(
            "coercivity fails: inf b <= 0 on B_" + std::to_string(R) +
            " (violates a_R |p|^m - M_R <= H)");
    DriftBounds vb = drift_bounds(problem.hamiltonian.drift, lo, hi, dim);
    FieldBounds fb = problem.f.bounds_on_box(lo, hi, dim);

    StructuralConstants c;
    c.a = std::min(1.0, bb.inf);

    // Additive slack for the lower bound a|p|^m - M <= H - f. With a = inf b
    // the power term never dips below a|p|^m; the drift can, by at most
    // max_s (|v| s - (b-a) s^m) when b > a, and by an unbounded amount only
    // if b == a and v != 0, in which case we charge the deficit at |p| <= 1
    // plus the growth surplus (b-a)|p|^m with b - a = 0 handled by widening a.
    double deficit = 0.0;
    if (vb.sup > 0.0) {
        double gap = bb.inf - 0.95 * bb.inf;  // shrink a slightly so the deficit is finite
        c.a = std::min(1.0, 0.95 * bb.inf);
        gap = bb.inf - c.a;
        double s_star = std::pow(vb.sup / (m * gap), 1.0 / (m - 1.0));
        deficit = (1.0 - 1.0 / m) * vb.sup * s_star;
    }
    c.M = std::max({1.0, deficit + std::max(0.0, fb.sup), vb.lip + fb.lip});

    // p-Lipschitz constant: | |p|^m - |q|^m | <= max(1, m 2^{1-m}) (|p|+|q|+1)^{m-1} |p-q|.
    double cm = std::max(1.0, m * std::pow(2.0, 1.0 - m));
    double bsup = std::max(std::abs(bb.inf), std::abs(bb.sup));
    c.lambda1_dp = std::max(1.0, cm * bsup + vb.sup);

    // Growth and x-Lipschitz constant for H - f.
    c.lambda1 = std::max({1.0, c.lambda1_dp, bsup + vb.sup + std::max(0.0, -fb.inf),
                          bb.lip + vb.lip});

    Point lo2, hi2;
    ball_box(center, 2.0, dim, lo2, hi2);
    FieldBounds sb = problem.diffusion.sigma.sigma_bounds(lo2, hi2, dim);
    c.lambda2 = std::max(sb.sup, sb.lip);
    return c;
}

StructuralConstants structural_constants(const ProblemSpec& problem, double R) {
    return structural_constants_centered(problem, Point{0.0, 0.0}, R);
}

AuditReport audit_hypotheses(const ProblemSpec& problem, double R, double samples_per_unit) {
    const int dim = problem.dimension();
    const double m = problem.hamiltonian.m;
    StructuralConstants c = structural_constants(problem, R);
    AuditReport report;

    // Sample lattice over the bounding box of B_R, thinned in 2D.
    double per_unit = dim == 2 ? std::min(samples_per_unit, 60.0) : samples_per_unit;
    int n = std::max(3, static_cast<int>(2.0 * R * per_unit));
    double h = 2.0 * R / n;
    std::vector<Point> pts;
    if (dim == 1) {
        for (int i = 0; i <= n; ++i) pts.push_back({-R + i * h, 0.0});
    } else {
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                Point x{-R + i * h, -R + j * h};
                if (norm2(x, 2) <= R) pts.push_back(x);
            }
    }

    auto fail = [&](const std::string& ineq, const Point& x) {
        std::ostringstream os;
        os << "hypothesis violated: " << ineq << " at x=(" << x[0];
        if (dim == 2) os << "," << x[1];
        os << ")";
        throw HypothesisViolation(os.str());
    };

    const double slack = 1e-9;
    const double probes[] = {0.0, 0.3, 1.0, 3.0, 10.0};
    for (const Point& x : pts) {
        double bx = problem.hamiltonian.b(x, dim);
        if (!(bx > 0.0)) fail("b(x) > 0 (coercivity, e.g. b <= 0)", x);
        double fx = problem.f(x, dim);
        double vx[2] = {0.0, 0.0};
        problem.hamiltonian.drift.eval(x, dim, vx);
        for (double s : probes) {
            // lower / upper envelope of H - f on a probe direction
            double hmin = bx * std::pow(s, m) - std::sqrt(vx[0] * vx[0] + vx[1] * vx[1]) * s - fx;
            double hmax = bx * std::pow(s, m) + std::sqrt(vx[0] * vx[0] + vx[1] * vx[1]) * s - fx;
            if (hmin + slack < c.a * std::pow(s, m) - c.M)
                fail("a_R |p|^m - M_R <= H(p,x)", x);
            if (hmax > c.lambda1 * (std::pow(s, m) + 1.0) + slack)
                fail("H(p,x) <= Lambda_1(|p|^m + 1)", x);
        }
    }
    report.checked.push_back("a_R |p|^m - M_R <= H <= Lambda_1(|p|^m+1) on sample lattice");

    // x-Lipschitz inequality on adjacent sample pairs at probe gradients.
    for (size_t k = 1; k < pts.size(); ++k) {
        const Point &x = pts[k - 1], &y = pts[k];
        double dxy = dist2(x, y, dim);
        if (dxy <= 0.0 || dxy > 2.0 * h) continue;
        for (double s : probes) {
            double p[2] = {s, 0.0};
            double hx = eval_H(problem.hamiltonian, p, x, dim) - problem.f(x, dim);
            double hy = eval_H(problem.hamiltonian, p, y, dim) - problem.f(y, dim);
            if (std::abs(hx - hy) > (c.lambda1 * std::pow(s, m) + c.M) * dxy + slack)
                fail("|H(p,x) - H(p,y)| <= (Lambda_1 |p|^m + M_R)|x-y|", x);
        }
    }
    report.checked.push_back("x-Lipschitz bound on adjacent sample pairs");

    // sigma bounds on B_2.
    if (!problem.diffusion.is_zero()) {
        Point lo2{-2.0, dim == 2 ? -2.0 : 0.0}, hi2{2.0, dim == 2 ? 2.0 : 0.0};
        int ns = dim == 1 ? 400 : 80;
        double hs = 4.0 / ns;
        double prev_s[2][2];
        bool have_prev = false;
        Point prev_x{0.0, 0.0};
        for (int j = 0; j <= (dim == 2 ? ns : 0); ++j)
            for (int i = 0; i <= ns; ++i) {
                Point x{lo2[0] + i * hs, dim == 2 ? lo2[1] + j * hs : 0.0};
                double s[2][2];
                problem.diffusion.sigma.eval_sigma(x, dim, s);
                double frob = 0.0;
                for (int r = 0; r < dim; ++r)
                    for (int cc = 0; cc < dim; ++cc) frob += s[r][cc] * s[r][cc];
                frob = std::sqrt(frob);
                if (frob > c.lambda2 + slack) fail("|sigma(x)| <= Lambda_2 on B_2", x);
                if (have_prev) {
                    double dd = dist2(prev_x, x, dim);
                    if (dd > 0.0 && dd < 2.0 * hs) {
                        double diff = 0.0;
                        for (int r = 0; r < dim; ++r)
                            for (int cc = 0; cc < dim; ++cc)
                                diff += (s[r][cc] - prev_s[r][cc]) * (s[r][cc] - prev_s[r][cc]);
                        if (std::sqrt(diff) > c.lambda2 * dd + slack)
                            fail("|sigma(x)-sigma(y)| <= Lambda_2|x-y| on B_2", x);
                    }
                }
                for (int r = 0; r < 2; ++r)
                    for (int cc = 0; cc < 2; ++cc) prev_s[r][cc] = s[r][cc];
                prev_x = x;
                have_prev = true;
                // A(x) must be symmetric nonnegative definite
                double A[2][2];
                problem.diffusion.sigma.eval_A(x, dim, A);
                if (dim == 1) {
                    if (A[0][0] < -slack) fail("A(x) >= 0", x);
                } else {
                    double tr = A[0][0] + A[1][1];
                    double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
                    if (tr < -slack || det < -slack) fail("A(x) >= 0 (eigenvalue test)", x);
                }
            }
        report.checked.push_back("sigma bound/Lipschitz and A >= 0 on B_2 sample lattice");
    }

    // Convexity of p -> H(p,x) on random segments (deterministic probe set).
    {
        unsigned long long state = 0x9e3779b97f4a7c15ull;
        auto next = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return (state >> 11) * (1.0 / 9007199254740992.0);
        };
        for (int trial = 0; trial < 100; ++trial) {
            Point x{(2.0 * next() - 1.0) * R, dim == 2 ? (2.0 * next() - 1.0) * R : 0.0};
            double p1[2] = {10.0 * (2.0 * next() - 1.0), dim == 2 ? 10.0 * (2.0 * next() - 1.0) : 0.0};
            double p2[2] = {10.0 * (2.0 * next() - 1.0), dim == 2 ? 10.0 * (2.0 * next() - 1.0) : 0.0};
            double lam = next();
            double pm[2] = {lam * p1[0] + (1 - lam) * p2[0], lam * p1[1] + (1 - lam) * p2[1]};
            double lhs = eval_H(problem.hamiltonian, pm, x, dim);
            double rhs = lam * eval_H(problem.hamiltonian, p1, x, dim) +
                         (1 - lam) * eval_H(problem.hamiltonian, p2, x, dim);
            if (lhs > rhs + 1e-12 * (1.0 + std::abs(rhs)))
                fail("p -> H(p,x) is convex", x);
        }
        report.checked.push_back("convexity of p -> H(p,x) on 100 random segments");
    }
    return report;
}

double legendre_transform(const HamiltonianSpec& spec, const double q[2], const Point& x,
                          int dim) {
    if (spec.has_drift())
        throw InputError(
            "closed-form Legendre transform requires a drift-free power law; "
            "use legendre_transform_numeric");
    const double m = spec.m;
    double qn = std::sqrt(q[0] * q[0] + (dim == 2 ? q[1] * q[1] : 0.0));
    if (qn == 0.0) return 0.0;
    double cm = (m - 1.0) * std::pow(m, -m / (m - 1.0));
    double bx = spec.b(x, dim);
    return cm * std::pow(bx, -1.0 / (m - 1.0)) * std::pow(qn, m / (m - 1.0));
}

double legendre_transform_numeric(const HamiltonianSpec& spec, const double q[2], const Point& x,
                                  int dim, double search_radius, double tol) {
    // Coarse lattice sweep followed by local refinement. The certificate uses
    // the Lipschitz modulus of p -> p.q - H(p,x) on the search box: one grid
    // cell can hide at most modulus * cell diagonal.
    const double m = spec.m;
    double qn = std::sqrt(q[0] * q[0] + (dim == 2 ? q[1] * q[1] : 0.0));
    double best = 0.0;
    double bestp[2] = {0.0, 0.0};
    int n = 200;
    double h = 2.0 * search_radius / n;
    auto value = [&](double px, double py) {
        double p[2] = {px, py};
        double dot = p[0] * q[0] + (dim == 2 ? p[1] * q[1] : 0.0);
        return dot - eval_H(spec, p, x, dim);
    };
    for (int j = 0; j <= (dim == 2 ? n : 0); ++j)
        for (int i = 0; i <= n; ++i) {
            double px = -search_radius + i * h;
            double py = dim == 2 ? -search_radius + j * h : 0.0;
            double v = value(px, py);
            if (v > best) {
                best = v;
                bestp[0] = px;
                bestp[1] = py;
            }
        }
    // Local refinement by coordinate shrink.
    double cell = h;
    for (int round = 0; round < 60 && cell > 1e-14; ++round) {
        bool improved = false;
        for (int a = 0; a < dim; ++a)
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                double p[2] = {bestp[0], bestp[1]};
                p[a] += sgn * cell;
                double v = value(p[0], p[1]);
                if (v > best) {
                    best = v;
                    bestp[0] = p[0];
                    bestp[1] = p[1];
                    improved = true;
                }
            }
        if (!improved) cell *= 0.5;
    }
    // The objective p -> p.q - H(p,x) is concave (H convex), so the refined
    // lattice maximizer is the global one provided it is interior; the value
    // is then within modulus * final cell of the true sup.
    double bsupB = spec.b(x, dim);
    double modulus = qn + m * std::max(0.01, bsupB) * std::pow(search_radius, m - 1.0) + 10.0;
    double edge = std::max(std::abs(bestp[0]), std::abs(bestp[1]));
    if (edge > 0.95 * search_radius)
        throw AccuracyError("legendre_transform_numeric: maximizer at search boundary; enlarge box");
    if (modulus * cell > tol)
        throw AccuracyError("legendre_transform_numeric: bracket wider than requested tolerance");
    return best;
}

double hopf_lax_metric_oracle(double m, double mu, const Point& x, const Point& ball_center,
                              double ball_radius, int dim) {
    if (!(mu > 0.0)) throw InputError("hopf_lax_metric_oracle requires mu > 0");
    double d = std::max(0.0, dist2(x, ball_center, dim) - ball_radius);
    if (d == 0.0) return 0.0;
    return std::pow(mu, 1.0 / m) * d;
}

}  // namespace vhj
