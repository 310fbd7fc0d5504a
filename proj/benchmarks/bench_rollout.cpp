#include <benchmark/benchmark.h>

#include "wavefocus/control.hpp"
#include "wavefocus/rollout.hpp"

using namespace wavefocus;

namespace {

struct Fixture {
    ControlProblem problem;
    ControlSolution solution;

    static Fixture make(int interior) {
        const int n = interior + 2;
        std::vector<std::uint8_t> wall(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) {
            wall[static_cast<std::size_t>(i)] = 1;
            wall[static_cast<std::size_t>((n - 1) * n + i)] = 1;
            wall[static_cast<std::size_t>(i * n)] = 1;
            wall[static_cast<std::size_t>(i * n + n - 1)] = 1;
        }
        GridMaze maze(n, n, {-1.0, 1.0, -1.0, 1.0}, std::move(wall), n + 1,
                      (n - 1) * n - 2);
        PhysicalParams params(1.0, 1.0, 0.5);
        ScalarField mu0 = default_initial_density(maze, 2.0 * maze.h1());
        ScalarField target = default_target(maze, 1.5 * maze.h1());
        ControlProblem problem(maze, params, 0.0, 1.0, mu0, target);
        ControlSolution sol = eigenstate_solution(
            problem, {Eigen::VectorXd::Zero(maze.n_free()), 0.0}, 1, 0, 3);
        problem.initial_density.v = sol.snapshots.front().mu.v;
        problem.initial_density.v /= problem.initial_density.v.sum();
        return {std::move(problem), std::move(sol)};
    }
};

}  // namespace

// Path throughput of the ensemble simulator (items = paths).
static void SimulatePaths(benchmark::State& state) {
    static Fixture fx = Fixture::make(21);
    RolloutConfig cfg;
    cfg.n_paths = static_cast<int>(state.range(0));
    cfg.dt = 1e-3;
    cfg.seed = 1;
    for (auto _ : state) {
        RolloutEnsemble ens = simulate(fx.solution, fx.problem, cfg);
        benchmark::DoNotOptimize(ens.survivors);
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(SimulatePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
