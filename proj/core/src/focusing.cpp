#include "wavefocus/focusing.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "wavefocus/hamiltonian.hpp"

namespace wavefocus {

namespace {

Eigen::VectorXd initial_wavefront(const ControlProblem& problem) {
    // Zero initial phase: psi0 = sqrt(mu0), real and nonnegative.
    return problem.initial_density.v.cwiseSqrt();
}

void check_gaps(const Eigen::VectorXd& E, int k, double gap) {
    // Energies are sorted, so the closest partner of any kept mode is a
    // neighbor in the sorted order.
    const int n = static_cast<int>(E.size());
    for (int i = 0; i < std::min(k, n); ++i) {
        if (i + 1 < n && E(i + 1) - E(i) < gap)
            throw DegenerateSpectrumError(i, i + 1, E(i + 1) - E(i));
        if (i > 0 && E(i) - E(i - 1) < gap)
            throw DegenerateSpectrumError(i - 1, i, E(i) - E(i - 1));
    }
}

}  // namespace

DegenerateSpectrumError::DegenerateSpectrumError(int n, int m, double g)
    : std::runtime_error("metric_gradient: eigenvalues " + std::to_string(n) + " and " +
                         std::to_string(m) + " are separated by only " + std::to_string(g) +
                         "; raise degeneracy_gap or perturb the potential"),
      mode_a(n), mode_b(m), gap(g) {}

double focusing_metric(const ScalarField& V, const ControlProblem& problem, int k) {
    const HamiltonianMatrix H = build_hamiltonian(V, problem.maze, problem.params);
    const SpectralSolution sol = eigensolve(H, std::min(k, H.size()));
    const Projection p = project(initial_wavefront(problem), sol);
    const ComplexField psi_f =
        evolve(p.coeff, sol, problem.tf - problem.t0, problem.params.hbar());
    return (psi_f.v.real() - problem.target.v).squaredNorm();
}

namespace detail {

MetricEval eval_metric_and_gradient(const Eigen::VectorXd& V, const ControlProblem& problem,
                                    int k, double degeneracy_gap) {
    const GridMaze& maze = problem.maze;
    const int n = maze.n_free();
    k = std::min(k, n);

    const HamiltonianMatrix H = build_hamiltonian({V, 0.0}, maze, problem.params);
    const SpectralSolution sol = eigensolve(H, n);  // full spectrum
    check_gaps(sol.energies, k, degeneracy_gap);

    const double tau = (problem.tf - problem.t0) / problem.params.hbar();
    const Eigen::VectorXd psi0 = initial_wavefront(problem);

    const Eigen::VectorXd b = sol.modes.transpose() * psi0;  // all-mode projections
    const Eigen::VectorXd omega = sol.energies.head(k) * tau;
    const Eigen::VectorXd cosw = omega.array().cos();
    const Eigen::VectorXd sinw = omega.array().sin();

    // Forward pass: Re psi(tf) from the k lowest modes.
    const Eigen::VectorXd psire =
        sol.modes.leftCols(k) * b.head(k).cwiseProduct(cosw);
    const Eigen::VectorXd r = psire - problem.target.v;

    MetricEval out;
    out.metric = r.squaredNorm();
    out.captured_norm = b.head(k).squaredNorm();

    const Eigen::VectorXd rho = sol.modes.transpose() * r;

    // Energy sensitivity: dE_n/dV_j = phi_n(j)^2.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (int nn = 0; nn < k; ++nn) {
        const double wgt = -2.0 * tau * b(nn) * sinw(nn) * rho(nn);
        g += wgt * sol.modes.col(nn).array().square().matrix();
    }

    // Eigenvector sensitivity, summed over the full spectrum:
    //   dphi_n/dV_j = sum_{m != n} phi_m(j) phi_n(j) / (E_n - E_m) * phi_m.
    Eigen::VectorXd y(n);
    for (int nn = 0; nn < k; ++nn) {
        for (int m = 0; m < n; ++m) {
            y(m) = m == nn ? 0.0
                           : cosw(nn) * (rho(nn) * b(m) + b(nn) * rho(m)) /
                                 (sol.energies(nn) - sol.energies(m));
        }
        g += 2.0 * sol.modes.col(nn).cwiseProduct(sol.modes * y);
    }

    out.gradient = std::move(g);
    return out;
}

}  // namespace detail

ScalarField metric_gradient(const ScalarField& V, const ControlProblem& problem, int k,
                            double degeneracy_gap) {
    return {detail::eval_metric_and_gradient(V.v, problem, k, degeneracy_gap).gradient, V.t};
}

ScalarField quadratic_init(const GridMaze& maze, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("quadratic_init: scale must be positive");
    const Eigen::Vector2d origin = maze.position(maze.start_cell());
    Eigen::VectorXd v(maze.n_free());
    for (int i = 0; i < maze.n_free(); ++i)
        v(i) = scale * (maze.position(maze.free_cell(i)) - origin).squaredNorm();
    return {v, 0.0};
}

OptimizeResult optimize(const ScalarField& V0, const ControlProblem& problem,
                        const FocusingConfig& cfg, const CheckpointFn& on_checkpoint) {
    if (!(cfg.learning_rate > 0.0))
        throw std::invalid_argument("optimize: learning rate must be positive");
    if (cfg.rel_tol < 0.0) throw std::invalid_argument("optimize: rel_tol must be nonnegative");
    if (!(cfg.degeneracy_gap > 0.0))
        throw std::invalid_argument("optimize: degeneracy_gap must be positive");

    const auto start = std::chrono::steady_clock::now();
    auto stamp = [&start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    OptimizeResult res;
    res.potential = V0;
    res.metric = std::numeric_limits<double>::infinity();

    Eigen::VectorXd V = V0.v;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        detail::MetricEval eval =
            detail::eval_metric_and_gradient(V, problem, cfg.k, cfg.degeneracy_gap);
        const double gnorm = eval.gradient.norm();

        if (!std::isfinite(eval.metric) || !std::isfinite(gnorm)) {
            res.reason = StopReason::aborted_non_finite;
            res.iters = iter;
            return res;
        }

        res.curve.metric.push_back(eval.metric);
        res.curve.grad_norm.push_back(gnorm);
        res.curve.seconds.push_back(stamp());

        if (eval.metric < res.metric) {
            res.metric = eval.metric;
            res.potential.v = V;
        }

        if (cfg.checkpoint_interval > 0 && on_checkpoint &&
            iter % cfg.checkpoint_interval == 0)
            on_checkpoint(iter, {V, 0.0}, eval.metric);

        // Flat-curve stopping rule over the trailing window.
        const auto& fs = res.curve.metric;
        if (static_cast<int>(fs.size()) > cfg.window) {
            const double before = fs[fs.size() - 1 - static_cast<std::size_t>(cfg.window)];
            const double now = fs.back();
            if (before > 0.0 && (before - now) / before < cfg.rel_tol) {
                res.reason = StopReason::converged;
                res.iters = iter + 1;
                return res;
            }
        }
        if (eval.metric == 0.0) {  // exact minimum; nothing left to descend
            res.reason = StopReason::converged;
            res.iters = iter + 1;
            return res;
        }

        V -= cfg.learning_rate * eval.gradient;
        res.iters = iter + 1;
    }
    res.reason = StopReason::max_iters;
    return res;
}

}  // namespace wavefocus
