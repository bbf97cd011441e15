#include <doctest.h>

#include <cmath>

#include "vhj/state_constraints.hpp"

using namespace vhj;

namespace {

ProblemSpec forced_fixture(double m) {
    ProblemSpec p;
    p.domain = Domain::interval(-1.0, 1.0);
    p.delta = 1.0;
    p.hamiltonian.m = m;
    p.hamiltonian.b = ScalarField::constant(1.0);
    p.f = ScalarField::constant(0.0);
    return p;
}

}  // namespace

TEST_CASE("forced path: lower bound, ordering, boundary growth at m = 1.5") {
    ProblemSpec p = forced_fixture(1.5);
    GridPtr g = build_grid(p.domain, 200.0);
    StateConstraintOptions opts;
    opts.epsilons = {1.0, 0.5, 0.25};
    auto [u, path] = solve_state_constraint(p, g, opts);
    REQUIRE(path.solutions.size() == 3);
    for (const SolveStats& s : path.stats) CHECK(s.converged);

    // Step-1 lower bound: u >= -Lambda_1/delta - tol everywhere.
    StructuralConstants c = structural_constants(p, 2.0);
    for (int i = 0; i < g->node_count(); ++i)
        CHECK(u[i] >= -c.lambda1 / p.delta - 1e-6);

    // Step-5 ordering: smaller eps lies below (u^{1/4} <= u^{1/2} <= u^{1}).
    CHECK(path.monotone_ok);
    for (int i : inner_region_nodes(*g, 0.0)) {
        CHECK(path.solutions[2][i] <= path.solutions[1][i] + 1e-6);
        CHECK(path.solutions[1][i] <= path.solutions[0][i] + 1e-6);
    }

    // Boundary growth of the eps = 1 member: exponent (m-2)/(m-1) = -1.
    SandwichReport fit = barrier_sandwich_check(path.solutions[0], 1.5, 0.12, -1.0, 0.15);
    CHECK(!fit.no_blowup);
    CHECK(fit.pass);
    CHECK(fit.fitted_exponent == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("m = 2 forced member follows the 1 - log d model") {
    ProblemSpec p = forced_fixture(2.0);
    GridPtr g = build_grid(p.domain, 200.0);
    StateConstraintOptions opts;
    opts.epsilons = {1.0};
    auto [u, path] = solve_state_constraint(p, g, opts);
    REQUIRE(path.stats.front().converged);
    // |u'|^2 ~ eps d^{-2} gives log-coefficient sqrt(eps) = 1.
    SandwichReport fit = barrier_sandwich_check(u, 2.0, 0.1);
    CHECK(!fit.no_blowup);
    CHECK(fit.log_coefficient == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("sandwich self-test on the synthetic barrier 3 zeta - 5") {
    GridPtr g = build_grid(Domain::interval(-1.0, 1.0), 200.0);
    GridFunction d = distance_to_boundary(g);
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i)
        u[i] = 3.0 * std::pow(std::max(d[i], 0.5 * g->dx()), -1.0) - 5.0;
    SandwichReport rep = barrier_sandwich_check(u, 1.5, 0.2, -1.0, 0.02);
    CHECK(rep.pass);
    CHECK(rep.fitted_exponent == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(rep.log_coefficient == doctest::Approx(3.0).epsilon(0.02));
    CHECK(rep.offset == doctest::Approx(-5.0).epsilon(0.05));
    CHECK(rep.c_lower <= 3.0 + 0.05);
    CHECK(rep.C_upper >= 3.0 - 0.05);
}

TEST_CASE("bounded solutions report the no-blow-up regime") {
    GridPtr g = build_grid(Domain::interval(-1.0, 1.0), 100.0);
    GridFunction u(g, 2.0);  // flat
    SandwichReport rep = barrier_sandwich_check(u, 1.5, 0.2);
    CHECK(rep.no_blowup);
    CHECK(rep.fitted_exponent == doctest::Approx(0.0));
}

TEST_CASE("band empty at coarse resolution raises a resolution error") {
    GridPtr g = build_grid(Domain::interval(-1.0, 1.0), 10.0);
    GridFunction u(g, 0.0);
    CHECK_THROWS_AS(barrier_sandwich_check(u, 1.5, 0.01), SamplingError);
}

TEST_CASE("maximality: admissible discrete subsolutions sit below the solve") {
    ProblemSpec p = forced_fixture(1.5);
    GridPtr g = build_grid(p.domain, 150.0);
    StateConstraintOptions opts;
    opts.epsilons = {1.0};
    auto [u, path] = solve_state_constraint(p, g, opts);
    REQUIRE(path.stats.front().converged);
    double tol = path.stats.front().tol;

    // Rebuild the forced operator for residual checks.
    DiscreteOperator op(p, g, LateralMode::StateConstraint);
    std::vector<double> rhs = op.rhs();
    for (int i = 0; i < g->node_count(); ++i) {
        double d = std::max(g->domain().boundary_distance(g->position(i)), 0.5 * g->dx());
        rhs[i] += std::pow(d, -3.0);  // m/(m-1) = 3 at m = 1.5
    }
    op.set_rhs(rhs);

    StructuralConstants c = structural_constants(p, 2.0);

    // fixture 1: the constant -Lambda_1/delta
    GridFunction w1(g, -c.lambda1 / p.delta);
    CHECK(is_discrete_subsolution(op, w1.values(), 1e-9));
    for (int i : op.unknowns()) CHECK(w1[i] <= u[i] + 2.0 * tol);

    // fixture 2: the scaled barrier k zeta - M/delta
    GridFunction zeta = barrier_zeta(g, 1.5);
    GridFunction w2(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i)
        w2[i] = 0.5 * zeta[i] - c.lambda1 / p.delta;
    CHECK(is_discrete_subsolution(op, w2.values(), 1e-9));
    for (int i : op.unknowns()) CHECK(w2[i] <= u[i] + 2.0 * tol);
}

TEST_CASE("diffusion-driven blow-up obeys the Remark-4.5 scaling") {
    // sup over the inner half <= M/delta + C (Lambda_2^2/a)^{1/(m-1)} with a
    // single C across exact coefficient rescalings.
    auto inner_sup = [](double bval, double sigv) {
        ProblemSpec p;
        p.domain = Domain::interval(-2.0, 2.0);
        p.delta = 1.0;
        p.hamiltonian.m = 1.5;
        p.hamiltonian.b = ScalarField::constant(bval);
        p.diffusion.sigma = SigmaField::scalar(ScalarField::constant(sigv));
        GridPtr g = build_grid(p.domain, 60.0);
        StateConstraintOptions opts;
        opts.max_members = 14;
        auto [u, path] = solve_state_constraint(p, g, opts);
        double sup = 0.0;
        for (int i = 0; i < g->node_count(); ++i)
            if (std::abs(g->position(i)[0]) <= 1.0) sup = std::max(sup, u[i]);
        StructuralConstants c = structural_constants(p, 2.0);
        double branch = std::pow(c.lambda2 * c.lambda2 / c.a, 1.0 / (p.hamiltonian.m - 1.0));
        return (sup - c.M / p.delta) / branch;
    };
    double c_base = inner_sup(1.0, 1.0);
    double c_bscaled = inner_sup(0.5, 1.0);
    double c_sscaled = inner_sup(1.0, 0.7);
    CHECK(c_bscaled / c_base == doctest::Approx(1.0).epsilon(0.2));
    CHECK(c_sscaled / c_base == doctest::Approx(1.0).epsilon(0.2));
}
