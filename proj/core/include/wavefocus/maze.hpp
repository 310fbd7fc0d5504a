#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wavefocus {

/**
 * Rectangular grid world with hard walls.
 *
 * Cells are grid nodes: cell (ix, iy) sits at physical position
 * (x1_min + ix*h1, x2_min + iy*h2), with iy = 0 being the first row of the
 * ASCII rendering. Wall cells are removed from the degrees of freedom
 * entirely; every field in this library is stored on the free cells only and
 * is identically zero on walls when embedded back into the full grid.
 *
 * Immutable after construction; safe to share across threads.
 */
class GridMaze {
public:
    GridMaze(int nx, int ny, std::array<double, 4> extent,
             std::vector<std::uint8_t> wall, int start_cell, int goal_cell);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int n_cells() const { return nx_ * ny_; }
    int n_free() const { return static_cast<int>(free_cells_.size()); }

    const std::array<double, 4>& extent() const { return extent_; }
    double h1() const { return h1_; }
    double h2() const { return h2_; }

    int start_cell() const { return start_cell_; }
    int goal_cell() const { return goal_cell_; }

    int cell(int ix, int iy) const { return iy * nx_ + ix; }
    int cell_ix(int c) const { return c % nx_; }
    int cell_iy(int c) const { return c / nx_; }
    bool is_wall(int c) const { return wall_[static_cast<std::size_t>(c)] != 0; }
    bool is_free(int c) const { return !is_wall(c); }

    /// Index of a cell within the free-cell vector, or -1 for walls.
    int free_index(int c) const { return free_index_[static_cast<std::size_t>(c)]; }
    /// Full-grid cell id of the i-th free cell.
    int free_cell(int i) const { return free_cells_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& free_cells() const { return free_cells_; }

    double x1(int ix) const { return extent_[0] + ix * h1_; }
    double x2(int iy) const { return extent_[2] + iy * h2_; }
    Eigen::Vector2d position(int c) const { return {x1(cell_ix(c)), x2(cell_iy(c))}; }

    /// Cell containing a physical point (nearest node), or -1 outside the extent.
    int cell_at(double p1, double p2) const;

    /// Free-cell index of the neighbor across axis `axis` (+1/-1 step), or -1
    /// if that neighbor is a wall or lies outside the grid.
    int free_neighbor(int free_i, int axis, int step) const;

private:
    int nx_, ny_;
    std::array<double, 4> extent_;
    double h1_, h2_;
    std::vector<std::uint8_t> wall_;
    int start_cell_, goal_cell_;
    std::vector<int> free_index_;
    std::vector<int> free_cells_;
};

/**
 * Parses an ASCII maze: '#' wall, '.' free, 'S' start (exactly one),
 * 'G' goal (exactly one). Rows must all have the same width. Throws
 * std::invalid_argument on malformed input or if start and goal are not
 * connected through free cells (4-neighbor).
 */
GridMaze parse_maze(const std::string& text,
                    std::array<double, 4> extent = {-1.0, 1.0, -1.0, 1.0});

/// Inverse of parse_maze for valid mazes.
std::string render_maze(const GridMaze& maze);

/// Maze with no interior walls and start/goal in opposite corners.
GridMaze empty_maze(int nx, int ny,
                    std::array<double, 4> extent = {-1.0, 1.0, -1.0, 1.0});

}  // namespace wavefocus
