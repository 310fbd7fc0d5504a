#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wavefocus/control.hpp"
#include "wavefocus/fields.hpp"
#include "wavefocus/problem.hpp"

namespace wavefocus {

/// How paths absorbed by a wall enter the expected-cost estimate.
enum class TerminationCostPolicy {
    exclude,  // report survivors-only cost plus the termination rate
    penalty,  // charge a flat penalty and keep the path in the mean
};

struct RolloutConfig {
    int n_paths = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 0;
    double goal_radius = 0.15;
    TerminationCostPolicy termination_policy = TerminationCostPolicy::exclude;
    double termination_penalty = 0.0;
    bool record_paths = false;  // full trajectories are large; off by default
    double noise_scale = 1.0;   // multiplies nu; 0 gives deterministic paths
    bool zero_control = false;  // ignore the action fields (baseline runs)
};

/// One simulated path's summary. Positions are recorded only when requested.
struct PathSummary {
    Eigen::Vector2d start = Eigen::Vector2d::Zero();
    Eigen::Vector2d final = Eigen::Vector2d::Zero();
    bool terminated = false;
    double termination_time = 0.0;
    double action_cost = 0.0;  // trapezoid integral of 0.5 a^T m^-1 a
    double state_cost = 0.0;   // trapezoid integral of q along the path
};

/**
 * Ensemble of controlled SDE rollouts. Per-path cost integrals are
 * accumulated during simulation; cellwise histograms (final-time and
 * time-averaged over all steps) are accumulated streaming so large ensembles
 * do not require storing trajectories. Identical seeds give bit-identical
 * ensembles; each path draws from its own counter-derived RNG stream, so the
 * result does not depend on execution order.
 */
struct RolloutEnsemble {
    RolloutConfig config;
    double t0 = 0.0, tf = 0.0;
    std::vector<PathSummary> paths;
    std::vector<std::vector<Eigen::Vector2d>> trajectories;  // empty unless recorded
    Eigen::VectorXd final_histogram;     // free-cell masses of surviving paths at tf
    Eigen::VectorXd time_avg_histogram;  // free-cell masses over all recorded steps
    std::array<Eigen::VectorXd, 3> third_histogram;  // same, split by time thirds
    int survivors = 0;

    double survivor_fraction() const {
        return paths.empty() ? 0.0 : static_cast<double>(survivors) / paths.size();
    }
};

/**
 * Euler-Maruyama simulation of dx = u dt + dXi with u the solution's applied
 * control drift (nearest snapshot in time, bilinear in space with zero-order
 * extrapolation at wall faces) and noise covariance nu I. Initial positions
 * are drawn from the problem's initial density (cell mass, uniform jitter
 * within the cell). A path terminates when its position enters a wall cell
 * or leaves the extent.
 *
 * If `running_cost` holds one field per solution snapshot, the per-path
 * state-cost integral is accumulated alongside the action cost.
 */
RolloutEnsemble simulate(const ControlSolution& solution, const ControlProblem& problem,
                         const RolloutConfig& config,
                         const std::vector<ScalarField>* running_cost = nullptr);

/// Same dynamics with the control switched off (pure diffusion baseline).
RolloutEnsemble simulate_uncontrolled(const ControlSolution& solution,
                                      const ControlProblem& problem, RolloutConfig config);

struct CostEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int n_used = 0;
    double termination_fraction = 0.0;
    bool defined = false;  // false when every path terminated under `exclude`
};

/// Monte Carlo mean and standard error of the accumulated cost, adding the
/// terminal cost q_f at each surviving path's final position.
CostEstimate estimate_expected_cost(const RolloutEnsemble& ensemble,
                                    const ControlSolution& solution,
                                    const std::optional<ScalarField>& final_cost);

struct FocusingReport {
    double survivor_fraction = 0.0;
    double goal_fraction = 0.0;      // survivors ending within goal_radius of the goal
    double tv_final = 0.0;           // TV(final histogram, |psi(tf)|^2), both normalized
    Eigen::VectorXd final_histogram; // normalized
};

/// Endpoint statistics of an ensemble against the solution's final density.
FocusingReport focusing_report(const RolloutEnsemble& ensemble, const GridMaze& maze,
                               double radius, const Eigen::VectorXd& final_density);

/// Total variation distance between two nonnegative cell-mass vectors,
/// each normalized to unit mass first.
double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace wavefocus
