#pragma once

#include <vector>

#include <Eigen/Core>

#include "wavefocus/fields.hpp"
#include "wavefocus/problem.hpp"
#include "wavefocus/spectral.hpp"

namespace wavefocus {

/// Amplitude floor regularizing log |psi| at nodal cells.
inline constexpr double kAmplitudeFloor = 1e-30;
/// Cells with |psi|^2 below this are flagged unreliable.
inline constexpr double kReliableDensity = 1e-12;

/// Fields derived from the wavefunction at one time.
struct ControlSnapshot {
    double t = 0.0;
    ComplexField psi;
    ScalarField R;        // log-amplitude, R = log|psi| (floored)
    VectorField grad_S;   // phase cost gradient, -lambda Im(grad psi / psi)
    ScalarField mu;       // state density |psi|^2
    VectorField action;   // applied control drift C a*
    VectorField current;  // probability current e^{2R} grad S
    Mask reliable;
};

/**
 * Full control solution: the spectral data that generated it (so fields can
 * be re-evaluated at any time) plus a uniform sequence of snapshots.
 * Immutable after extraction.
 */
struct ControlSolution {
    GridMaze maze;
    PhysicalParams params;
    double t0 = 0.0, tf = 0.0;
    ScalarField potential;
    SpectralSolution basis;   // truncated basis used for propagation
    Eigen::VectorXcd coeff;
    double captured_norm = 0.0;
    std::vector<ControlSnapshot> snapshots;

    ComplexField psi_at(double t) const;

    ControlSolution(GridMaze maze_, PhysicalParams params_)
        : maze(std::move(maze_)), params(std::move(params_)) {}
};

/// Propagates the problem under potential V with k modes and derives all
/// per-snapshot fields at n_snap uniformly spaced times in [t0, tf].
ControlSolution extract_solution(const ControlProblem& problem, const ScalarField& V,
                                 int k, int n_snap);

/// Solution whose state is exactly the `mode`-th eigenstate of H(V)
/// (coefficients are a unit vector), for stationary-state diagnostics.
ControlSolution eigenstate_solution(const ControlProblem& problem, const ScalarField& V,
                                    int k, int mode, int n_snap);

/// R = 0.5 log(|psi|^2 + floor); the floor keeps nodal cells finite.
ScalarField extract_R(const ComplexField& psi);

/// 1 where |psi|^2 >= kReliableDensity.
Mask reliability_mask(const ComplexField& psi);

/**
 * grad S = -lambda Im(grad psi / psi), with a central-difference gradient and
 * Dirichlet zeros. Works directly on the complex field, so no phase
 * unwrapping is ever needed. Zero (and unreliable) where the amplitude is at
 * noise level.
 */
VectorField grad_S(const ComplexField& psi, const GridMaze& maze, double lambda);

/**
 * Applied control drift C a* = nu grad R - m^-1 grad S. This is the forward
 * drift whose Fokker-Planck flow reproduces mu = |psi|^2: the osmotic part
 * nu grad R balances diffusion and the phase part transports the density.
 * Equal to nu grad(log z) for the desirability z.
 */
VectorField optimal_action(const ComplexField& psi, const GridMaze& maze,
                           const PhysicalParams& params);

/// Curvature cost -(lambda^2/2m) [Lap R + |grad R|^2] (scalar mass weight).
ScalarField bohm_potential(const ScalarField& R, const GridMaze& maze,
                           const PhysicalParams& params);

/// j = e^{2R} grad S, computed cellwise.
VectorField probability_current(const ComplexField& psi, const GridMaze& maze,
                                double lambda);

/// Independent route for the same current: lambda Im(psi conj(grad psi)).
VectorField probability_current_conjugate(const ComplexField& psi, const GridMaze& maze,
                                          double lambda);

struct CostToGo {
    ScalarField J;     // -lambda R + S (S from the principal phase branch)
    ScalarField z;     // exp(R - S/lambda) = exp(-J/lambda)
    ScalarField zhat;  // exp(R + S/lambda); z*zhat = exp(2R) = mu
};
CostToGo cost_to_go(const ComplexField& psi, double lambda);

/// dS/dt per cell at time t, from the phase of the propagated state at three
/// closely spaced times (spacing 1e-3 * horizon), branch-matched to the
/// midpoint phase and differenced centrally.
ScalarField phase_time_derivative(const ControlSolution& sol, double t);

/// Per-snapshot state costs recovered from the solution.
struct StateCost {
    std::vector<ScalarField> q_tilde;  // effective cost including curvature
    std::vector<ScalarField> q;        // original cost, q = q_tilde - Bohm
};

/**
 * Inverts the potential-cost relation V = q_tilde - 2 dS/dt - nu (grad S)^2
 * - 2 b . grad S (b = 0 here) for q_tilde at every snapshot, then removes the
 * Bohm potential to obtain q. Requires at least 3 snapshots.
 */
StateCost recover_state_cost(const ControlSolution& sol);

/**
 * The state cost under which the desirability form of the dynamics balances
 * exactly: q_tilde = -dS/dt + (nu / 2 lambda) |grad S|^2. With this cost the
 * combined residual below vanishes analytically for true solutions.
 */
std::vector<ScalarField> desirability_state_cost(const ControlSolution& sol);

/**
 * Residual diagnostics for one snapshot, RMS over reliable cells:
 *  - phase_rms: dS/dt + b.grad S - (1/2m)|grad S|^2 + (nu/2) Lap S + q_tilde
 *  - transport_rms: dR/dt + (b - m^-1 grad S) . grad R
 *  - combined_rms: -(1/lambda) * phase + transport (must vanish on solutions
 *    when q_tilde is the desirability-consistent cost)
 *  - continuity_rms: d mu/dt + div(mu u) - (nu/2) Lap mu, the Fokker-Planck
 *    balance of the applied drift u (vanishes when the simulated ensemble
 *    reproduces mu)
 */
struct HjbResidualReport {
    double t = 0.0;
    double phase_rms = 0.0;
    double transport_rms = 0.0;
    double combined_rms = 0.0;
    double continuity_rms = 0.0;
    int n_reliable = 0;
    // Per-free-cell residual fields (zero on unreliable cells).
    Eigen::VectorXd phase, transport, combined, continuity;
};

std::vector<HjbResidualReport> hjb_residual(const ControlSolution& sol,
                                            const std::vector<ScalarField>& q_tilde);

}  // namespace wavefocus
