#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wavefocus/fields.hpp"
#include "wavefocus/maze.hpp"
#include "wavefocus/problem.hpp"

namespace wavefocus {

/**
 * Discretized Hamiltonian H = -(hbar/2) (nu_11 d^2/dx1^2 + nu_22 d^2/dx2^2)
 * + diag(V) over the free cells, with Dirichlet zeros at walls and outside
 * the grid. Assembled symmetrically: the same off-diagonal coefficient is
 * written to (i, j) and (j, i), so H == H^T holds bitwise.
 */
struct HamiltonianMatrix {
    Eigen::SparseMatrix<double> m;
    double hbar = 1.0;
    double nu = 1.0;
    Eigen::VectorXd potential;

    int size() const { return static_cast<int>(m.rows()); }
};

/**
 * Five-point discrete Laplacian on free cells (Dirichlet walls). Negative
 * definite; a single isolated cell at h = 1 yields the 1x1 matrix [-4].
 */
Eigen::SparseMatrix<double> build_laplacian(const GridMaze& maze);

/**
 * Builds H for potential V. Throws std::invalid_argument if the problem
 * carries a nonzero drift (the spectral solver requires b == 0) or if V is
 * not defined on the maze's free cells.
 */
HamiltonianMatrix build_hamiltonian(const ScalarField& V, const GridMaze& maze,
                                    const PhysicalParams& params);

}  // namespace wavefocus
