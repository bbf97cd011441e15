#include <doctest.h>

#include <cmath>
#include <random>

#include "vhj/analysis.hpp"
#include "vhj/state_constraints.hpp"

using namespace vhj;

namespace {

GridPtr unit_grid(double res = 200.0) { return build_grid(Domain::interval(-1.0, 1.0), res); }

GridFunction sampled(const GridPtr& g, double (*f)(double)) {
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i) u[i] = f(g->position(i)[0]);
    return u;
}

}  // namespace

TEST_CASE("lipschitz measurement on model profiles") {
    GridPtr g = unit_grid();
    // constants measure zero
    GridFunction c(g, 3.0);
    CHECK(measure_lipschitz(c, Subregion::box1d(-0.9, 0.9)).constant == doctest::Approx(0.0));
    // the eikonal cone has slope one
    GridFunction cone = sampled(g, +[](double x) { return std::abs(x) - 1.0; });
    RegularityFit f2 = measure_lipschitz(cone, Subregion::box1d(-0.9, 0.9));
    CHECK(f2.constant == doctest::Approx(1.0).epsilon(0.01));
    // cos(pi x) on a half-width window stays under pi
    GridFunction wave = sampled(g, +[](double x) { return std::cos(M_PI * x); });
    RegularityFit f3 = measure_lipschitz(wave, Subregion::box1d(-0.5, 0.5));
    CHECK(f3.constant <= M_PI + 0.01);
    CHECK(f3.constant >= 0.9 * M_PI);
}

TEST_CASE("holder exponent recovery on synthetic profiles") {
    GridPtr g = build_grid(Domain::interval(-1.0, 1.0), 400.0);
    // interior-seated cone |x|^gamma, lattice-aligned singularity
    {
        GridFunction u(g, 0.0);
        for (int i = 0; i < g->node_count(); ++i)
            u[i] = std::pow(std::abs(g->position(i)[0]), 0.5);
        RegularityFit fit = measure_holder(u, Subregion::box1d(-0.9, 0.9), 3.0);
        CHECK(fit.applicable);
        CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.06));
    }
    {
        GridFunction u(g, 0.0);
        for (int i = 0; i < g->node_count(); ++i)
            u[i] = std::pow(std::abs(g->position(i)[0]), 2.0 / 3.0);
        RegularityFit fit = measure_holder(u, Subregion::box1d(-0.9, 0.9), 4.0);
        CHECK(fit.exponent == doctest::Approx(2.0 / 3.0).epsilon(0.06));
    }
    // boundary-seated profile K - 2 sqrt(d): the anchor model removes the
    // one-cell offset bias
    {
        GridFunction u(g, 0.0);
        for (int i = 0; i < g->node_count(); ++i) {
            double d = g->domain().boundary_distance(g->position(i));
            u[i] = 5.0 - 2.0 * std::sqrt(std::max(d, 0.0));
        }
        RegularityFit fit = measure_holder(u, Subregion::box1d(-1.0, -0.6), 3.0);
        CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.08));
    }
    // flat data: not applicable
    {
        GridFunction u(g, 1.0);
        RegularityFit fit = measure_holder(u, Subregion::box1d(-0.9, 0.9), 3.0);
        CHECK(!fit.applicable);
    }
    // insufficient distance span
    {
        GridFunction u(g, 0.0);
        CHECK_THROWS_AS(measure_holder(u, Subregion::box1d(-0.02, 0.02), 3.0), SamplingError);
    }
}

TEST_CASE("boundary profile fit recovers the exponent") {
    GridPtr g = build_grid(Domain::interval(-1.0, 1.0), 300.0);
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i) {
        double d = g->domain().boundary_distance(g->position(i));
        u[i] = 4.0 - 1.7 * std::pow(std::max(d, 0.0), 2.0 / 3.0);
    }
    CHECK(fit_boundary_profile_exponent(u, 0.4) == doctest::Approx(2.0 / 3.0).epsilon(0.03));
}

namespace {

ProblemSpec check_problem() {
    ProblemSpec p;
    p.domain = Domain::interval(-1.0, 1.0);
    p.delta = 1.0;
    p.hamiltonian.m = 2.0;
    p.hamiltonian.b = ScalarField::constant(1.0);
    return p;
}

GridFunction noise(const GridPtr& g, std::mt19937_64& rng, double amp) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i) u[i] = amp * uni(rng);
    return u;
}

}  // namespace

TEST_CASE("convexity lemma checks: identities pass, broken inputs fail") {
    ProblemSpec p = check_problem();
    GridPtr g = build_grid(p.domain, 64.0);
    DiscreteOperator op(p, g, LateralMode::Dirichlet);
    op.set_theta(6.0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        GridFunction u = noise(g, rng, 0.05);
        GridFunction v = noise(g, rng, 0.05);
        double mu = -1e300, nu = -1e300;
        for (int i : op.unknowns()) {
            mu = std::max(mu, op.residual_at(u.values(), i));
            nu = std::max(nu, op.residual_at(v.values(), i));
        }
        double lam = uni(rng);
        CHECK(convex_combination_check(op, u, v, lam, mu, nu).pass);
        CHECK(convex_combination_check(op, u, v, 0.0, mu, nu).pass);  // reduces to v's level
        CHECK(convex_combination_check(op, u, v, 1.0, mu, nu).pass);  // reduces to u's level

        // supersolution level of v from below
        double nu_lo = 1e300;
        for (int i : op.unknowns()) nu_lo = std::min(nu_lo, op.residual_at(v.values(), i));
        CHECK(extrapolation_check(op, u, v, 2.0 * uni(rng), mu, nu_lo).pass);
        CHECK(extrapolation_check(op, u, v, 0.0, mu, nu_lo).pass);
    }

    // negative control: claiming a tighter level than the data supports must
    // be rejected as a broken input
    GridFunction u = noise(g, rng, 0.1);
    GridFunction v = noise(g, rng, 0.1);
    CHECK_THROWS_AS(convex_combination_check(op, u, v, 0.5, -100.0, -100.0), InputError);
    CHECK_THROWS_AS(extrapolation_check(op, u, v, 1.0, -100.0, 100.0), InputError);
}

TEST_CASE("lambda = 1 extrapolation of the exact solution is the identity") {
    ProblemSpec p = check_problem();
    GridPtr g = build_grid(p.domain, 64.0);
    DiscreteOperator op(p, g, LateralMode::Dirichlet);
    op.set_theta(6.0);
    GridFunction v(g, 0.0);  // exact solution of the zero-data problem
    CHECK(extrapolation_check(op, v, v, 1.0, 0.0, 0.0).pass);
}

TEST_CASE("comparison check: pass, delta-shift slack, and input policing") {
    ProblemSpec p = check_problem();
    p.f = ScalarField::constant(1.0);
    GridPtr g = build_grid(p.domain, 64.0);
    DiscreteOperator op(p, g, LateralMode::Dirichlet);
    op.set_theta(6.0);

    GridFunction v(g, 1.0);   // exact solution u == f/delta
    GridFunction u(g, 0.0);   // v - 1 is still a subsolution (delta-shift)
    PinnedMask pinned = pin_targets_and_boundary(*g);
    CheckReport rep = comparison_check(op, u, v, &pinned, 1e-9);
    CHECK(rep.pass);

    // swapped roles violate the residual preconditions
    GridFunction w(g, 2.0);  // residual = delta*2 - 1 = 1 > 0: not a subsolution
    CHECK_THROWS_AS(comparison_check(op, w, v, &pinned, 1e-9), InputError);
}

TEST_CASE("time comparison: ordered data passes, a flipped pair fails") {
    ProblemSpec p = check_problem();
    p.delta = 0.0;
    GridPtr g = build_grid(p.domain, 50.0);
    PinnedMask pinned = pin_targets_and_boundary(*g);
    SolveOptions opts;
    DiscreteOperator op1(p, g, LateralMode::Dirichlet);
    SchemeParams params = make_certified_params(op1, 3.0);

    std::mt19937_64 rng(23);
    GridFunction u0 = noise(g, rng, 0.2);
    GridFunction v0 = u0;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < v0.size(); ++i) v0[i] += 0.3 * uni(rng);

    DiscreteOperator op2(p, g, LateralMode::Dirichlet);
    Trajectory tu = solve_time_dependent(op1, params, u0, 0.1, 4, &pinned, opts);
    Trajectory tv = solve_time_dependent(op2, params, v0, 0.1, 4, &pinned, opts);
    CHECK(time_comparison_check(tu, tv, 1e-10).pass);
    CheckReport flipped = time_comparison_check(tv, tu, 1e-10);
    CHECK(!flipped.pass);
}

TEST_CASE("time-lipschitz: cone decay scales like T0^{1/m}") {
    // u0 = A(1-|x|)_+ under u_t + |Du|^2 = 0 descends at rate A^2 = T0 and
    // keeps spatial slope A = T0^{1/2} early on.
    ProblemSpec p = check_problem();
    p.delta = 0.0;
    p.domain = Domain::interval(-2.0, 2.0);
    GridPtr g = build_grid(p.domain, 100.0);
    PinnedMask pinned = pin_targets_and_boundary(*g);
    SolveOptions opts;

    auto run_cone = [&](double A) {
        DiscreteOperator op(p, g, LateralMode::Dirichlet);
        SchemeParams params = make_certified_params(op, 1.5 * A + 1.0);
        GridFunction u0(g, 0.0);
        for (int i = 0; i < g->node_count(); ++i)
            u0[i] = A * std::max(0.0, 1.0 - std::abs(g->position(i)[0]));
        return solve_time_dependent(op, params, u0, 0.05, 8, &pinned, opts);
    };
    Trajectory t1 = run_cone(1.0);
    Trajectory t2 = run_cone(2.0);

    TimeLipschitzReport r1 = time_lipschitz_check(t1, 1.0, Subregion::box1d(-1.5, 1.5), 1e-6);
    TimeLipschitzReport r2 = time_lipschitz_check(t2, 4.0, Subregion::box1d(-1.5, 1.5), 1e-6);
    CHECK(r1.precondition.pass);
    CHECK(r2.precondition.pass);
    // quadrupled T0 doubles the spatial constant (exponent 1/m = 1/2)
    CHECK(r2.max_spatial_lipschitz / r1.max_spatial_lipschitz ==
          doctest::Approx(std::pow(4.0, 0.5)).epsilon(0.1));

    // the precondition must catch a violating trajectory
    TimeLipschitzReport bad = time_lipschitz_check(t2, 0.5, Subregion::box1d(-1.5, 1.5), 1e-6);
    CHECK(!bad.precondition.pass);
    CHECK(bad.precondition.details.find("node") != std::string::npos);
}

TEST_CASE("per-snapshot holder stays near (m-2)/(m-1) on a forced march") {
    // Stationary profile of the forced m = 3 problem marched in time: the
    // drift is smooth, so every snapshot keeps the boundary exponent 1/2.
    ProblemSpec p;
    p.domain = Domain::interval(-1.0, 1.0);
    p.delta = 1.0;
    p.hamiltonian.m = 3.0;
    p.hamiltonian.b = ScalarField::constant(1.0);
    GridPtr g = build_grid(p.domain, 200.0);
    StateConstraintOptions sc_opts;
    sc_opts.epsilons = {1.0};
    auto [u0, path] = solve_state_constraint(p, g, sc_opts);
    REQUIRE(path.stats.front().converged);

    ProblemSpec pt = p;
    pt.delta = 0.0;
    DiscreteOperator op(pt, g, LateralMode::StateConstraint);
    std::vector<double> rhs = op.rhs();
    for (int i = 0; i < g->node_count(); ++i) {
        double d = std::max(g->domain().boundary_distance(g->position(i)), 0.5 * g->dx());
        rhs[i] += std::pow(d, -1.5);
    }
    op.set_rhs(rhs);
    double P = 1.5 * op.max_abs_gradient(u0.values());
    SchemeParams params = make_certified_params(op, P);
    SolveOptions opts;
    Trajectory traj = solve_time_dependent(op, params, u0, 0.01, 4, nullptr, opts);

    for (const GridFunction& snap : traj.snapshots) {
        double expo = fit_boundary_profile_exponent(snap, 0.3);
        CHECK(expo == doctest::Approx(0.5).epsilon(0.2));
    }
}

TEST_CASE("scaling fit: slopes and dominance classification") {
    std::vector<ScalingRow> rows;
    for (double s : {1.0, 2.0, 4.0, 8.0})
        rows.push_back({s, 3.0 * s * s, 10.0 * s, 1.0});
    ScalingStudy study = scaling_fit(rows, 2.0, 0.5, 0.5, 0.25);
    CHECK(study.dominant == "diffusion");
    CHECK(study.pass);
    CHECK(study.slope == doctest::Approx(2.0));

    // neither branch 3x ahead: inconclusive, reported but not passed
    std::vector<ScalingRow> tied;
    for (double s : {1.0, 2.0, 4.0}) tied.push_back({s, s, 1.0, 1.0});
    ScalingStudy study2 = scaling_fit(tied, 2.0, 0.5, 0.5, 0.25);
    CHECK(study2.dominant == "inconclusive");
    CHECK(!study2.pass);
}

TEST_CASE("checks are deterministic for fixed seeds") {
    GridPtr g = unit_grid(100.0);
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i)
        u[i] = std::sin(3.0 * g->position(i)[0]);
    RegularityFit a = measure_lipschitz(u, Subregion::box1d(-0.8, 0.8), 42);
    RegularityFit b = measure_lipschitz(u, Subregion::box1d(-0.8, 0.8), 42);
    CHECK(a.constant == b.constant);
    CHECK(a.pairs_sampled == b.pairs_sampled);
}
