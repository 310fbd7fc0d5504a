#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "wavefocus/fields.hpp"
#include "wavefocus/maze.hpp"

namespace wavefocus {

/**
 * Physical and cost parameters of the controlled diffusion.
 *
 * The noise covariance is tied to the control cost weights: with control
 * projection C = I and scalar mass weight m, nu = (lambda/m) * I exactly.
 * The constructor takes (hbar, lambda, mass) and derives nu, so the relation
 * cannot drift. An optional dynamical drift b(t, x) is carried for problem
 * definition completeness; the spectral solver only accepts b == 0.
 */
class PhysicalParams {
public:
    using DriftFn = std::function<Eigen::Vector2d(double t, const Eigen::Vector2d& x)>;

    PhysicalParams(double hbar, double lambda, double mass, DriftFn drift = nullptr);

    double hbar() const { return hbar_; }
    double lambda() const { return lambda_; }
    double mass() const { return mass_; }

    /// nu = lambda * C m^-1 C^T, diagonal and isotropic here.
    double nu() const { return lambda_ / mass_; }
    Eigen::Matrix2d noise_cov() const { return nu() * Eigen::Matrix2d::Identity(); }
    Eigen::Matrix2d control_proj() const { return Eigen::Matrix2d::Identity(); }

    bool has_drift() const { return static_cast<bool>(drift_); }
    Eigen::Vector2d drift(double t, const Eigen::Vector2d& x) const {
        return drift_ ? drift_(t, x) : Eigen::Vector2d::Zero();
    }

private:
    double hbar_, lambda_, mass_;
    DriftFn drift_;
};

/**
 * A finite-horizon control problem on a maze: physics, horizon, the initial
 * state density (unit cell mass) and the asserted real final wavefront
 * (unit L2 norm). An optional terminal state cost q_f is carried for the
 * Monte Carlo cost estimator only.
 */
struct ControlProblem {
    GridMaze maze;
    PhysicalParams params;
    double t0 = 0.0;
    double tf = 1.0;
    ScalarField initial_density;
    ScalarField target;
    std::optional<ScalarField> final_cost;

    ControlProblem(GridMaze maze_, PhysicalParams params_, double t0_, double tf_,
                   ScalarField initial_density_, ScalarField target_,
                   std::optional<ScalarField> final_cost_ = std::nullopt);
};

/// Gaussian density of width sigma0 (state units) at the start cell,
/// zero on walls, normalized to unit total cell mass.
ScalarField default_initial_density(const GridMaze& maze, double sigma0);

/// Gaussian peak of width sigma_t (state units) at the goal cell,
/// zero on walls, normalized to unit L2 norm.
ScalarField default_target(const GridMaze& maze, double sigma_t);

}  // namespace wavefocus
