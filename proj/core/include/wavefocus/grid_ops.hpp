#pragma once

#include <array>

#include <Eigen/Core>

#include "wavefocus/fields.hpp"
#include "wavefocus/maze.hpp"

namespace wavefocus {

/**
 * Finite-difference operators on free-cell fields.
 *
 * Two boundary treatments are used throughout the library:
 *
 *  - Dirichlet: values on walls and outside the grid are zero. This matches
 *    the Hamiltonian discretization and is the right treatment for
 *    wavefunctions, which genuinely vanish there.
 *
 *  - Available-neighbor: log-domain fields (R = log|psi|) diverge at walls,
 *    so derivatives fall back to one-sided differences using only free
 *    neighbors. A cell with no free neighbor on an axis gets derivative 0.
 */

/// Central-difference gradient with Dirichlet zeros, per axis, complex input.
std::array<Eigen::VectorXcd, 2> grad_dirichlet(const GridMaze& maze,
                                               const Eigen::VectorXcd& f);
std::array<Eigen::VectorXd, 2> grad_dirichlet(const GridMaze& maze,
                                              const Eigen::VectorXd& f);

/// Gradient using only free neighbors: central where both exist, one-sided
/// where one exists, zero where none.
std::array<Eigen::VectorXd, 2> grad_available(const GridMaze& maze,
                                              const Eigen::VectorXd& f);

/// Second derivative sum (Laplacian) using only free neighbors; a missing
/// neighbor value is replaced by the cell's own value.
Eigen::VectorXd laplace_available(const GridMaze& maze, const Eigen::VectorXd& f);

/// Laplacian with Dirichlet zeros (the stencil underlying the Hamiltonian).
Eigen::VectorXd laplace_dirichlet(const GridMaze& maze, const Eigen::VectorXd& f);

}  // namespace wavefocus
