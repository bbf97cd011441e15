#include <benchmark/benchmark.h>

#include <cmath>

#include "vhj/metric.hpp"
#include "vhj/solver.hpp"

using namespace vhj;

namespace {

ProblemSpec bench_problem(int dim) {
    ProblemSpec p;
    p.delta = 1.0;
    p.hamiltonian.m = 2.0;
    p.hamiltonian.b = ScalarField::constant(1.0);
    p.diffusion.sigma = SigmaField::scalar(ScalarField::constant(0.3));
    p.domain = dim == 1 ? Domain::interval(-1.0, 1.0) : Domain::box({-1.0, -1.0}, {1.0, 1.0});
    return p;
}

}  // namespace

static void ResidualSweep1D(benchmark::State& state) {
    ProblemSpec p = bench_problem(1);
    GridPtr g = build_grid(p.domain, static_cast<double>(state.range(0)));
    DiscreteOperator op(p, g, LateralMode::Dirichlet);
    op.set_theta(5.0);
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i) u[i] = std::sin(3.0 * g->position(i)[0]);
    std::vector<double> res;
    for (auto _ : state) {
        op.residual_unknowns(u.values(), res);
        benchmark::DoNotOptimize(res.data());
    }
    state.SetItemsProcessed(state.iterations() * op.unknowns().size());
}
BENCHMARK(ResidualSweep1D)->Arg(100)->Arg(400)->Arg(1600);

static void ResidualSweep2D(benchmark::State& state) {
    ProblemSpec p = bench_problem(2);
    GridPtr g = build_grid(p.domain, static_cast<double>(state.range(0)));
    DiscreteOperator op(p, g, LateralMode::Dirichlet);
    op.set_theta(5.0);
    GridFunction u(g, 0.0);
    for (int i = 0; i < g->node_count(); ++i)
        u[i] = std::sin(3.0 * g->position(i)[0]) * std::cos(2.0 * g->position(i)[1]);
    std::vector<double> res;
    for (auto _ : state) {
        op.residual_unknowns(u.values(), res);
        benchmark::DoNotOptimize(res.data());
    }
    state.SetItemsProcessed(state.iterations() * op.unknowns().size());
}
BENCHMARK(ResidualSweep2D)->Arg(16)->Arg(32)->Arg(64);

static void StationarySolve(benchmark::State& state) {
    ProblemSpec p = bench_problem(1);
    p.f = ScalarField::constant(1.0);
    GridPtr g = build_grid(p.domain, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        DiscreteOperator op(p, g, LateralMode::Dirichlet);
        SchemeParams params = make_certified_params(op, 2.0);
        GridFunction init(g, 1.0);
        PinnedMask pinned = pin_targets_and_boundary(*g);
        SolveOptions opts;
        opts.tol = 1e-6;
        auto result = solve_stationary(op, params, init, &pinned, opts);
        benchmark::DoNotOptimize(result.first.values().data());
    }
}
BENCHMARK(StationarySolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void MetricSolve1D(benchmark::State& state) {
    ProblemSpec p;
    p.domain = Domain::annulus(Shape::interval(-3.0, 3.0), {0.0, 0.0}, 1.0);
    p.delta = 0.0;
    p.hamiltonian.m = 2.0;
    p.hamiltonian.b = ScalarField::constant(1.0);
    GridPtr g = build_grid(p.domain, static_cast<double>(state.range(0)));
    MetricOptions opts;
    opts.max_members = 8;
    for (auto _ : state) {
        MetricSolution sol = solve_metric(p, 1.0, g, opts);
        benchmark::DoNotOptimize(sol.values.values().data());
    }
}
BENCHMARK(MetricSolve1D)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void DistanceFieldBuild(benchmark::State& state) {
    Domain dom = Domain::annulus(Shape::ball({0.0, 0.0}, 3.0), {0.0, 0.0}, 1.0);
    for (auto _ : state) {
        GridPtr g = build_grid(dom, static_cast<double>(state.range(0)));
        GridFunction d = distance_to_boundary(g);
        benchmark::DoNotOptimize(d.values().data());
    }
}
BENCHMARK(DistanceFieldBuild)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
