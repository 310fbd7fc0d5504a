#include "wavefocus/hamiltonian.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace wavefocus {

namespace {

using Triplet = Eigen::Triplet<double>;

// Shared stencil walk: diag(i) += 2*w_axis, offdiag(i,j) -= w_axis for each
// free neighbor pair. An axis with a single grid cell carries no dynamics
// and is skipped entirely (1D problems are ny == 1 grids).
void assemble_stencil(const GridMaze& maze, double w1, double w2,
                      std::vector<Triplet>& out) {
    const std::array<double, 2> w = {maze.nx() > 1 ? w1 : 0.0, maze.ny() > 1 ? w2 : 0.0};
    for (int i = 0; i < maze.n_free(); ++i) {
        out.emplace_back(i, i, 2.0 * (w[0] + w[1]));
        for (int axis = 0; axis < 2; ++axis) {
            if (w[axis] == 0.0) continue;
            const int nb = maze.free_neighbor(i, axis, +1);
            if (nb >= 0) {
                out.emplace_back(i, nb, -w[axis]);
                out.emplace_back(nb, i, -w[axis]);
            }
        }
    }
}

}  // namespace

Eigen::SparseMatrix<double> build_laplacian(const GridMaze& maze) {
    if (maze.n_free() == 0) throw std::invalid_argument("build_laplacian: maze has no free cells");
    // -Delta assembled, then negated: Delta has -2/h^2 on the diagonal.
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(maze.n_free()) * 5);
    assemble_stencil(maze, 1.0 / (maze.h1() * maze.h1()), 1.0 / (maze.h2() * maze.h2()), trips);
    Eigen::SparseMatrix<double> neg(maze.n_free(), maze.n_free());
    neg.setFromTriplets(trips.begin(), trips.end());
    return -neg;
}

HamiltonianMatrix build_hamiltonian(const ScalarField& V, const GridMaze& maze,
                                    const PhysicalParams& params) {
    if (V.v.size() != maze.n_free())
        throw std::invalid_argument("build_hamiltonian: potential size does not match maze");
    if (params.has_drift())
        throw std::invalid_argument(
            "build_hamiltonian: nonzero drift is not supported by the spectral solver");

    const double nu = params.nu();
    const double k1 = 0.5 * params.hbar() * nu / (maze.h1() * maze.h1());
    const double k2 = 0.5 * params.hbar() * nu / (maze.h2() * maze.h2());

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(maze.n_free()) * 5);
    assemble_stencil(maze, k1, k2, trips);
    for (int i = 0; i < maze.n_free(); ++i) trips.emplace_back(i, i, V.v(i));

    HamiltonianMatrix H;
    H.m.resize(maze.n_free(), maze.n_free());
    H.m.setFromTriplets(trips.begin(), trips.end());
    H.hbar = params.hbar();
    H.nu = nu;
    H.potential = V.v;
    return H;
}

}  // namespace wavefocus
