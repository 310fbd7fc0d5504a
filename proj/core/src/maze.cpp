#include "wavefocus/maze.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace wavefocus {

namespace {

void check_connected(int nx, int ny, const std::vector<std::uint8_t>& wall,
                     int start, int goal) {
    std::vector<std::uint8_t> seen(wall.size(), 0);
    std::deque<int> frontier{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!frontier.empty()) {
        const int c = frontier.front();
        frontier.pop_front();
        if (c == goal) return;
        const int ix = c % nx, iy = c / nx;
        const std::array<int, 4> steps = {ix > 0 ? c - 1 : -1, ix < nx - 1 ? c + 1 : -1,
                                          iy > 0 ? c - nx : -1, iy < ny - 1 ? c + nx : -1};
        for (int nb : steps) {
            if (nb < 0 || seen[static_cast<std::size_t>(nb)] || wall[static_cast<std::size_t>(nb)]) continue;
            seen[static_cast<std::size_t>(nb)] = 1;
            frontier.push_back(nb);
        }
    }
    throw std::invalid_argument("maze: start and goal are not connected through free cells");
}

}  // namespace

GridMaze::GridMaze(int nx, int ny, std::array<double, 4> extent,
                   std::vector<std::uint8_t> wall, int start_cell, int goal_cell)
    : nx_(nx), ny_(ny), extent_(extent), wall_(std::move(wall)),
      start_cell_(start_cell), goal_cell_(goal_cell) {
    if (nx_ < 1 || ny_ < 1) throw std::invalid_argument("maze: grid must be at least 1x1");
    if (wall_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_))
        throw std::invalid_argument("maze: wall mask size does not match grid");
    h1_ = nx_ > 1 ? (extent_[1] - extent_[0]) / (nx_ - 1) : (extent_[1] - extent_[0]);
    h2_ = ny_ > 1 ? (extent_[3] - extent_[2]) / (ny_ - 1) : (extent_[3] - extent_[2]);
    if (!(h1_ > 0.0) || !(h2_ > 0.0))
        throw std::invalid_argument("maze: extent must have positive size per axis");
    if (start_cell_ < 0 || start_cell_ >= n_cells() || is_wall(start_cell_))
        throw std::invalid_argument("maze: start cell must be a free cell");
    if (goal_cell_ < 0 || goal_cell_ >= n_cells() || is_wall(goal_cell_))
        throw std::invalid_argument("maze: goal cell must be a free cell");

    free_index_.assign(wall_.size(), -1);
    free_cells_.reserve(wall_.size());
    for (int c = 0; c < n_cells(); ++c) {
        if (!wall_[static_cast<std::size_t>(c)]) {
            free_index_[static_cast<std::size_t>(c)] = static_cast<int>(free_cells_.size());
            free_cells_.push_back(c);
        }
    }
    if (free_cells_.empty()) throw std::invalid_argument("maze: no free cells");
    check_connected(nx_, ny_, wall_, start_cell_, goal_cell_);
}

int GridMaze::cell_at(double p1, double p2) const {
    if (p1 < extent_[0] || p1 > extent_[1] || p2 < extent_[2] || p2 > extent_[3]) return -1;
    int ix = static_cast<int>(std::lround((p1 - extent_[0]) / h1_));
    int iy = static_cast<int>(std::lround((p2 - extent_[2]) / h2_));
    ix = std::min(std::max(ix, 0), nx_ - 1);
    iy = std::min(std::max(iy, 0), ny_ - 1);
    return cell(ix, iy);
}

int GridMaze::free_neighbor(int free_i, int axis, int step) const {
    const int c = free_cell(free_i);
    const int ix = cell_ix(c), iy = cell_iy(c);
    if (axis == 0) {
        const int jx = ix + step;
        if (jx < 0 || jx >= nx_) return -1;
        return free_index(cell(jx, iy));
    }
    const int jy = iy + step;
    if (jy < 0 || jy >= ny_) return -1;
    return free_index(cell(ix, jy));
}

GridMaze parse_maze(const std::string& text, std::array<double, 4> extent) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (rows.empty()) throw std::invalid_argument("parse_maze: empty input");
    const int ny = static_cast<int>(rows.size());
    const int nx = static_cast<int>(rows.front().size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != nx)
            throw std::invalid_argument("parse_maze: rows have unequal width");

    std::vector<std::uint8_t> wall(static_cast<std::size_t>(nx) * ny, 0);
    int start = -1, goal = -1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const char ch = rows[static_cast<std::size_t>(iy)][static_cast<std::size_t>(ix)];
            const int c = iy * nx + ix;
            switch (ch) {
                case '#': wall[static_cast<std::size_t>(c)] = 1; break;
                case '.': break;
                case 'S':
                    if (start >= 0) throw std::invalid_argument("parse_maze: more than one start cell");
                    start = c;
                    break;
                case 'G':
                    if (goal >= 0) throw std::invalid_argument("parse_maze: more than one goal cell");
                    goal = c;
                    break;
                default:
                    throw std::invalid_argument(std::string("parse_maze: unexpected character '") + ch + "'");
            }
        }
    }
    if (start < 0) throw std::invalid_argument("parse_maze: missing start cell 'S'");
    if (goal < 0) throw std::invalid_argument("parse_maze: missing goal cell 'G'");
    return GridMaze(nx, ny, extent, std::move(wall), start, goal);
}

std::string render_maze(const GridMaze& maze) {
    std::string out;
    out.reserve(static_cast<std::size_t>(maze.n_cells() + maze.ny()));
    for (int iy = 0; iy < maze.ny(); ++iy) {
        for (int ix = 0; ix < maze.nx(); ++ix) {
            const int c = maze.cell(ix, iy);
            char ch = maze.is_wall(c) ? '#' : '.';
            if (c == maze.start_cell()) ch = 'S';
            if (c == maze.goal_cell()) ch = 'G';
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

GridMaze empty_maze(int nx, int ny, std::array<double, 4> extent) {
    std::vector<std::uint8_t> wall(static_cast<std::size_t>(nx) * ny, 0);
    return GridMaze(nx, ny, extent, std::move(wall), 0, nx * ny - 1);
}

}  // namespace wavefocus
