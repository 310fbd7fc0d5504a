#include "wavefocus/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace wavefocus {

PhysicalParams::PhysicalParams(double hbar, double lambda, double mass, DriftFn drift)
    : hbar_(hbar), lambda_(lambda), mass_(mass), drift_(std::move(drift)) {
    if (!(hbar_ > 0.0)) throw std::invalid_argument("PhysicalParams: hbar must be positive");
    if (!(lambda_ > 0.0)) throw std::invalid_argument("PhysicalParams: lambda must be positive");
    if (!(mass_ > 0.0)) throw std::invalid_argument("PhysicalParams: mass must be positive");
}

ControlProblem::ControlProblem(GridMaze maze_, PhysicalParams params_, double t0_,
                               double tf_, ScalarField initial_density_,
                               ScalarField target_, std::optional<ScalarField> final_cost_)
    : maze(std::move(maze_)), params(std::move(params_)), t0(t0_), tf(tf_),
      initial_density(std::move(initial_density_)), target(std::move(target_)),
      final_cost(std::move(final_cost_)) {
    if (!(t0 < tf)) throw std::invalid_argument("ControlProblem: t0 must be less than tf");
    if (initial_density.v.size() != maze.n_free() || target.v.size() != maze.n_free())
        throw std::invalid_argument("ControlProblem: field sizes do not match maze");
    if (initial_density.v.minCoeff() < 0.0)
        throw std::invalid_argument("ControlProblem: initial density must be nonnegative");
    if (std::abs(initial_density.v.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("ControlProblem: initial density must have unit mass");
    if (std::abs(target.v.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("ControlProblem: target must have unit L2 norm");
    if (final_cost && final_cost->v.size() != maze.n_free())
        throw std::invalid_argument("ControlProblem: final cost size does not match maze");
}

ScalarField default_initial_density(const GridMaze& maze, double sigma0) {
    Eigen::VectorXd g = gaussian_on_free(maze, maze.start_cell(), sigma0);
    const double mass = g.sum();
    if (!(mass > 0.0))
        throw std::invalid_argument("default_initial_density: density underflows to zero");
    return {g / mass, 0.0};
}

ScalarField default_target(const GridMaze& maze, double sigma_t) {
    Eigen::VectorXd g = gaussian_on_free(maze, maze.goal_cell(), sigma_t);
    const double norm = g.norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("default_target: target underflows to zero");
    return {g / norm, 0.0};
}

}  // namespace wavefocus
