#include "wavefocus/grid_ops.hpp"

namespace wavefocus {

namespace {

template <typename Vec>
std::array<Vec, 2> grad_dirichlet_impl(const GridMaze& maze, const Vec& f) {
    std::array<Vec, 2> g{Vec::Zero(maze.n_free()), Vec::Zero(maze.n_free())};
    const std::array<double, 2> h = {maze.h1(), maze.h2()};
    for (int axis = 0; axis < 2; ++axis) {
        for (int i = 0; i < maze.n_free(); ++i) {
            const int up = maze.free_neighbor(i, axis, +1);
            const int dn = maze.free_neighbor(i, axis, -1);
            const auto fu = up >= 0 ? f(up) : typename Vec::Scalar(0);
            const auto fd = dn >= 0 ? f(dn) : typename Vec::Scalar(0);
            g[axis](i) = (fu - fd) / (2.0 * h[axis]);
        }
    }
    return g;
}

}  // namespace

std::array<Eigen::VectorXcd, 2> grad_dirichlet(const GridMaze& maze,
                                               const Eigen::VectorXcd& f) {
    return grad_dirichlet_impl(maze, f);
}

std::array<Eigen::VectorXd, 2> grad_dirichlet(const GridMaze& maze,
                                              const Eigen::VectorXd& f) {
    return grad_dirichlet_impl(maze, f);
}

std::array<Eigen::VectorXd, 2> grad_available(const GridMaze& maze,
                                              const Eigen::VectorXd& f) {
    std::array<Eigen::VectorXd, 2> g{Eigen::VectorXd::Zero(maze.n_free()),
                                     Eigen::VectorXd::Zero(maze.n_free())};
    const std::array<double, 2> h = {maze.h1(), maze.h2()};
    for (int axis = 0; axis < 2; ++axis) {
        for (int i = 0; i < maze.n_free(); ++i) {
            const int up = maze.free_neighbor(i, axis, +1);
            const int dn = maze.free_neighbor(i, axis, -1);
            if (up >= 0 && dn >= 0) {
                g[axis](i) = (f(up) - f(dn)) / (2.0 * h[axis]);
            } else if (up >= 0) {
                g[axis](i) = (f(up) - f(i)) / h[axis];
            } else if (dn >= 0) {
                g[axis](i) = (f(i) - f(dn)) / h[axis];
            }
        }
    }
    return g;
}

Eigen::VectorXd laplace_available(const GridMaze& maze, const Eigen::VectorXd& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(maze.n_free());
    const std::array<double, 2> h2 = {maze.h1() * maze.h1(), maze.h2() * maze.h2()};
    for (int axis = 0; axis < 2; ++axis) {
        for (int i = 0; i < maze.n_free(); ++i) {
            const int up = maze.free_neighbor(i, axis, +1);
            const int dn = maze.free_neighbor(i, axis, -1);
            const double fu = up >= 0 ? f(up) : f(i);
            const double fd = dn >= 0 ? f(dn) : f(i);
            out(i) += (fu - 2.0 * f(i) + fd) / h2[axis];
        }
    }
    return out;
}

Eigen::VectorXd laplace_dirichlet(const GridMaze& maze, const Eigen::VectorXd& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(maze.n_free());
    const std::array<double, 2> h2 = {maze.h1() * maze.h1(), maze.h2() * maze.h2()};
    for (int axis = 0; axis < 2; ++axis) {
        for (int i = 0; i < maze.n_free(); ++i) {
            const int up = maze.free_neighbor(i, axis, +1);
            const int dn = maze.free_neighbor(i, axis, -1);
            const double fu = up >= 0 ? f(up) : 0.0;
            const double fd = dn >= 0 ? f(dn) : 0.0;
            out(i) += (fu - 2.0 * f(i) + fd) / h2[axis];
        }
    }
    return out;
}

}  // namespace wavefocus
