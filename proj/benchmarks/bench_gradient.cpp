#include <benchmark/benchmark.h>

#include "wavefocus/focusing.hpp"

using namespace wavefocus;

namespace {

ControlProblem bench_problem(int side) {
    GridMaze maze = empty_maze(side, side);
    const double s0 = 2.0 * maze.h1(), st = 1.5 * maze.h1();
    PhysicalParams params(1.0, 1.0, 0.5);
    ScalarField mu0 = default_initial_density(maze, s0);
    ScalarField target = default_target(maze, st);
    return ControlProblem(std::move(maze), params, 0.0, 0.6, std::move(mu0),
                          std::move(target));
}

}  // namespace

// One optimizer iteration: shared eigensolve plus metric and gradient.
static void MetricAndGradient(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const ControlProblem problem = bench_problem(side);
    const ScalarField V = quadratic_init(problem.maze, 1.0);
    for (auto _ : state) {
        auto eval = detail::eval_metric_and_gradient(V.v, problem, 15, 1e-10);
        benchmark::DoNotOptimize(eval.gradient.data());
    }
    state.SetComplexityN(problem.maze.n_free());
}
BENCHMARK(MetricAndGradient)->Arg(15)->Arg(25)->Arg(35)->Arg(51)->Unit(benchmark::kSecond)->Complexity();

// Metric alone (truncated eigensolve path).
static void MetricOnly(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const ControlProblem problem = bench_problem(side);
    const ScalarField V = quadratic_init(problem.maze, 1.0);
    for (auto _ : state) {
        const double f = focusing_metric(V, problem, 15);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(MetricOnly)->Arg(25)->Arg(51)->Unit(benchmark::kSecond);
