#include "wavefocus/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace wavefocus {

Mask all_reliable(const GridMaze& maze) {
    return Mask(static_cast<std::size_t>(maze.n_free()), 1);
}

Mask mask_and(const Mask& a, const Mask& b) {
    if (a.size() != b.size()) throw std::invalid_argument("mask_and: size mismatch");
    Mask out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

Eigen::MatrixXd embed_grid(const GridMaze& maze, const Eigen::VectorXd& free_values) {
    if (free_values.size() != maze.n_free())
        throw std::invalid_argument("embed_grid: field size does not match maze free cells");
    Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(maze.ny(), maze.nx());
    for (int i = 0; i < maze.n_free(); ++i) {
        const int c = maze.free_cell(i);
        grid(maze.cell_iy(c), maze.cell_ix(c)) = free_values(i);
    }
    return grid;
}

Eigen::VectorXd gaussian_on_free(const GridMaze& maze, int center_cell, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_on_free: sigma must be positive");
    const Eigen::Vector2d c = maze.position(center_cell);
    Eigen::VectorXd out(maze.n_free());
    for (int i = 0; i < maze.n_free(); ++i) {
        const double d2 = (maze.position(maze.free_cell(i)) - c).squaredNorm();
        out(i) = std::exp(-d2 / (2.0 * sigma * sigma));
    }
    return out;
}

}  // namespace wavefocus
