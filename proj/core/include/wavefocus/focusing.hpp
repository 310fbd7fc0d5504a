#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wavefocus/fields.hpp"
#include "wavefocus/problem.hpp"
#include "wavefocus/spectral.hpp"

namespace wavefocus {

/**
 * Settings for the potential optimization. The stopping rule formalizes
 * "keep going until the learning curve flattens": stop once the relative
 * decrease of the metric over the trailing `window` iterations falls below
 * `rel_tol`, or at `max_iters`.
 */
struct FocusingConfig {
    double learning_rate = 0.02;
    int max_iters = 5000;
    int window = 20;
    double rel_tol = 1e-4;
    int k = 15;                   // eigenmodes kept in the propagated state
    double degeneracy_gap = 1e-8; // abort threshold for eigenvalue gaps
    int checkpoint_interval = 0;  // 0 = no checkpoints
};

/// Per-iteration metric values, gradient norms, and wall-clock stamps.
struct LearningCurve {
    std::vector<double> metric;
    std::vector<double> grad_norm;
    std::vector<double> seconds;
};

enum class StopReason { converged, max_iters, aborted_non_finite };

struct OptimizeResult {
    ScalarField potential;   // best-seen potential
    double metric = 0.0;     // metric at that potential
    LearningCurve curve;
    StopReason reason = StopReason::max_iters;
    int iters = 0;
};

/// Raised by the gradient when two eigenvalues needed in the perturbation
/// sum are closer than the configured gap; carries the offending pair.
class DegenerateSpectrumError : public std::runtime_error {
public:
    DegenerateSpectrumError(int n, int m, double gap);
    int mode_a, mode_b;
    double gap;
};

/**
 * Squared deviation between the real part of the propagated wavefunction at
 * the final time and the asserted target, summed over free cells without
 * cell-area weights (so the value scales with grid resolution).
 *
 * The initial wavefunction is sqrt of the initial density with zero phase;
 * propagation keeps the k lowest modes of H(V).
 */
double focusing_metric(const ScalarField& V, const ControlProblem& problem, int k);

/**
 * Analytic d(metric)/dV per free cell, obtained by first-order perturbation
 * of the eigendecomposition (dE_n/dV_j = phi_n(j)^2 and the standard
 * off-diagonal eigenvector response) chained through the truncated spectral
 * propagator. Requires the full spectrum internally. Throws
 * DegenerateSpectrumError when a gap involving a kept mode is below
 * `degeneracy_gap`.
 */
ScalarField metric_gradient(const ScalarField& V, const ControlProblem& problem, int k,
                            double degeneracy_gap = 1e-8);

/// V0(x) = scale * |x - x_start|^2 on free cells (state units).
ScalarField quadratic_init(const GridMaze& maze, double scale);

using CheckpointFn =
    std::function<void(int iter, const ScalarField& V, double metric)>;

/**
 * Plain gradient descent V <- V - eta * grad F. Returns the best-seen
 * potential. Aborts (reason = aborted_non_finite) if the metric or gradient
 * stops being finite, returning the last good state. Deterministic: identical
 * inputs produce bit-identical curves.
 */
OptimizeResult optimize(const ScalarField& V0, const ControlProblem& problem,
                        const FocusingConfig& cfg, const CheckpointFn& on_checkpoint = nullptr);

namespace detail {

/// One shared eigensolve per optimizer iteration: metric and gradient
/// computed from the same full spectrum.
struct MetricEval {
    double metric;
    Eigen::VectorXd gradient;
    double captured_norm;
};
MetricEval eval_metric_and_gradient(const Eigen::VectorXd& V, const ControlProblem& problem,
                                    int k, double degeneracy_gap);

}  // namespace detail

}  // namespace wavefocus
