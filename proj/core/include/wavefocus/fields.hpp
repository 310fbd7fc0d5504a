#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "wavefocus/maze.hpp"

namespace wavefocus {

/// Real-valued function on the free cells of a GridMaze.
struct ScalarField {
    Eigen::VectorXd v;
    double t = 0.0;
};

/// Complex-valued function on the free cells (wavefunctions).
struct ComplexField {
    Eigen::VectorXcd v;
    double t = 0.0;
};

/// One real value per axis per free cell (gradients, actions, currents).
struct VectorField {
    Eigen::VectorXd x1, x2;
    double t = 0.0;
};

/// Per-free-cell reliability flags (1 = trustworthy). Cells where the
/// wavefunction amplitude is at numerical noise level get 0 and every field
/// derived from a log or a ratio there should be ignored.
using Mask = std::vector<std::uint8_t>;

Mask all_reliable(const GridMaze& maze);
Mask mask_and(const Mask& a, const Mask& b);

/// Embeds free-cell values into the full ny x nx grid; wall cells are 0.
Eigen::MatrixXd embed_grid(const GridMaze& maze, const Eigen::VectorXd& free_values);

/// Gaussian bump of width sigma (state units) centered on a cell, restricted
/// to free cells. No normalization.
Eigen::VectorXd gaussian_on_free(const GridMaze& maze, int center_cell, double sigma);

}  // namespace wavefocus
