#include <benchmark/benchmark.h>

#include "wavefocus/focusing.hpp"
#include "wavefocus/hamiltonian.hpp"
#include "wavefocus/spectral.hpp"

using namespace wavefocus;

// Full dense eigensolve of the maze Hamiltonian, the optimizer's per-
// iteration cost. The range covers smoke grids up to the 51x51 scale.
static void EigensolveFull(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const GridMaze maze = empty_maze(side, side);
    const PhysicalParams params(1.0, 1.0, 0.5);
    const ScalarField V = quadratic_init(maze, 1.0);
    const HamiltonianMatrix H = build_hamiltonian(V, maze, params);
    for (auto _ : state) {
        SpectralSolution sol = eigensolve(H);
        benchmark::DoNotOptimize(sol.energies.data());
    }
    state.SetComplexityN(maze.n_free());
}
BENCHMARK(EigensolveFull)->Arg(15)->Arg(25)->Arg(35)->Arg(51)->Unit(benchmark::kSecond)->Complexity();

static void HamiltonianAssembly(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const GridMaze maze = empty_maze(side, side);
    const PhysicalParams params(1.0, 1.0, 0.5);
    const ScalarField V = quadratic_init(maze, 1.0);
    for (auto _ : state) {
        HamiltonianMatrix H = build_hamiltonian(V, maze, params);
        benchmark::DoNotOptimize(H.m.valuePtr());
    }
}
BENCHMARK(HamiltonianAssembly)->Arg(51)->Unit(benchmark::kMillisecond);
