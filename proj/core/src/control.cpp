#include "wavefocus/control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "wavefocus/grid_ops.hpp"
#include "wavefocus/hamiltonian.hpp"

namespace wavefocus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phase of psi branch-matched to a reference phase (nearest 2 pi shift).
double matched_phase(std::complex<double> psi, double ref) {
    const double raw = std::arg(psi);
    return raw + kTwoPi * std::round((ref - raw) / kTwoPi);
}

ControlSnapshot make_snapshot(ComplexField psi, double t, const GridMaze& maze,
                              const PhysicalParams& params) {
    ControlSnapshot s;
    s.t = t;
    s.psi = std::move(psi);
    s.psi.t = t;
    s.R = extract_R(s.psi);
    s.R.t = t;
    s.grad_S = grad_S(s.psi, maze, params.lambda());
    s.grad_S.t = t;
    s.mu = {s.psi.v.cwiseAbs2(), t};
    s.action = optimal_action(s.psi, maze, params);
    s.action.t = t;
    s.current = probability_current(s.psi, maze, params.lambda());
    s.current.t = t;
    s.reliable = reliability_mask(s.psi);
    return s;
}

double masked_rms(const Eigen::VectorXd& v, const Mask& m) {
    double acc = 0.0;
    int n = 0;
    for (int i = 0; i < v.size(); ++i) {
        if (m[static_cast<std::size_t>(i)]) {
            acc += v(i) * v(i);
            ++n;
        }
    }
    return n > 0 ? std::sqrt(acc / n) : 0.0;
}

}  // namespace

ComplexField ControlSolution::psi_at(double t) const {
    return evolve(coeff, basis, t - t0, params.hbar());
}

ScalarField extract_R(const ComplexField& psi) {
    return {(psi.v.cwiseAbs2().array() + kAmplitudeFloor).log().matrix() * 0.5, psi.t};
}

Mask reliability_mask(const ComplexField& psi) {
    Mask m(static_cast<std::size_t>(psi.v.size()));
    for (int i = 0; i < psi.v.size(); ++i)
        m[static_cast<std::size_t>(i)] = std::norm(psi.v(i)) >= kReliableDensity;
    return m;
}

VectorField grad_S(const ComplexField& psi, const GridMaze& maze, double lambda) {
    const auto g = grad_dirichlet(maze, psi.v);
    VectorField out{Eigen::VectorXd::Zero(maze.n_free()),
                    Eigen::VectorXd::Zero(maze.n_free()), psi.t};
    for (int i = 0; i < maze.n_free(); ++i) {
        const double dens = std::norm(psi.v(i));
        if (dens < kReliableDensity) continue;
        out.x1(i) = -lambda * std::imag(g[0](i) / psi.v(i));
        out.x2(i) = -lambda * std::imag(g[1](i) / psi.v(i));
    }
    return out;
}

VectorField optimal_action(const ComplexField& psi, const GridMaze& maze,
                           const PhysicalParams& params) {
    const ScalarField R = extract_R(psi);
    const auto gR = grad_available(maze, R.v);
    const VectorField gS = grad_S(psi, maze, params.lambda());
    const double nu = params.nu();
    const double inv_m = 1.0 / params.mass();
    return {nu * gR[0] - inv_m * gS.x1, nu * gR[1] - inv_m * gS.x2, psi.t};
}

ScalarField bohm_potential(const ScalarField& R, const GridMaze& maze,
                           const PhysicalParams& params) {
    const auto gR = grad_available(maze, R.v);
    const Eigen::VectorXd lap = laplace_available(maze, R.v);
    const double c = -params.lambda() * params.lambda() / (2.0 * params.mass());
    return {c * (lap + gR[0].cwiseAbs2() + gR[1].cwiseAbs2()), R.t};
}

VectorField probability_current(const ComplexField& psi, const GridMaze& maze,
                                double lambda) {
    const ScalarField R = extract_R(psi);
    const Eigen::VectorXd mu = (2.0 * R.v.array()).exp();
    const VectorField gS = grad_S(psi, maze, lambda);
    return {mu.cwiseProduct(gS.x1), mu.cwiseProduct(gS.x2), psi.t};
}

VectorField probability_current_conjugate(const ComplexField& psi, const GridMaze& maze,
                                          double lambda) {
    const auto g = grad_dirichlet(maze, psi.v);
    VectorField out{Eigen::VectorXd(maze.n_free()), Eigen::VectorXd(maze.n_free()), psi.t};
    for (int i = 0; i < maze.n_free(); ++i) {
        out.x1(i) = lambda * std::imag(psi.v(i) * std::conj(g[0](i)));
        out.x2(i) = lambda * std::imag(psi.v(i) * std::conj(g[1](i)));
    }
    return out;
}

CostToGo cost_to_go(const ComplexField& psi, double lambda) {
    const int n = static_cast<int>(psi.v.size());
    CostToGo out;
    out.J.v.resize(n);
    out.z.v.resize(n);
    out.zhat.v.resize(n);
    out.J.t = out.z.t = out.zhat.t = psi.t;
    for (int i = 0; i < n; ++i) {
        const double R = 0.5 * std::log(std::norm(psi.v(i)) + kAmplitudeFloor);
        const double S = -lambda * std::arg(psi.v(i));
        out.J.v(i) = -lambda * R + S;
        out.z.v(i) = std::exp(R - S / lambda);
        out.zhat.v(i) = std::exp(R + S / lambda);
    }
    return out;
}

ScalarField phase_time_derivative(const ControlSolution& sol, double t) {
    const double delta = 1e-3 * (sol.tf - sol.t0);
    const ComplexField mid = sol.psi_at(t);
    const ComplexField lo = sol.psi_at(t - delta);
    const ComplexField hi = sol.psi_at(t + delta);
    const int n = static_cast<int>(mid.v.size());
    ScalarField out{Eigen::VectorXd::Zero(n), t};
    for (int i = 0; i < n; ++i) {
        if (std::norm(mid.v(i)) < kReliableDensity || std::norm(lo.v(i)) < kReliableDensity ||
            std::norm(hi.v(i)) < kReliableDensity)
            continue;
        const double ref = std::arg(mid.v(i));
        const double dtheta = (matched_phase(hi.v(i), ref) - matched_phase(lo.v(i), ref)) /
                              (2.0 * delta);
        out.v(i) = -sol.params.lambda() * dtheta;  // S = -lambda * phase
    }
    return out;
}

ControlSolution extract_solution(const ControlProblem& problem, const ScalarField& V,
                                 int k, int n_snap) {
    if (n_snap < 2) throw std::invalid_argument("extract_solution: need at least 2 snapshots");
    const HamiltonianMatrix H = build_hamiltonian(V, problem.maze, problem.params);
    const SpectralSolution basis = eigensolve(H, std::min(k, H.size()));
    const Projection proj = project(problem.initial_density.v.cwiseSqrt(), basis);

    ControlSolution sol(problem.maze, problem.params);
    sol.t0 = problem.t0;
    sol.tf = problem.tf;
    sol.potential = V;
    sol.basis = basis;
    sol.coeff = proj.coeff;
    sol.captured_norm = proj.captured_norm;

    sol.snapshots.reserve(static_cast<std::size_t>(n_snap));
    for (int i = 0; i < n_snap; ++i) {
        const double t =
            problem.t0 + (problem.tf - problem.t0) * static_cast<double>(i) / (n_snap - 1);
        sol.snapshots.push_back(make_snapshot(sol.psi_at(t), t, sol.maze, sol.params));
    }
    return sol;
}

ControlSolution eigenstate_solution(const ControlProblem& problem, const ScalarField& V,
                                    int k, int mode, int n_snap) {
    if (n_snap < 2) throw std::invalid_argument("eigenstate_solution: need at least 2 snapshots");
    const HamiltonianMatrix H = build_hamiltonian(V, problem.maze, problem.params);
    const SpectralSolution basis = eigensolve(H, std::min(k, H.size()));
    if (mode < 0 || mode >= basis.rank())
        throw std::invalid_argument("eigenstate_solution: mode index out of range");

    ControlSolution sol(problem.maze, problem.params);
    sol.t0 = problem.t0;
    sol.tf = problem.tf;
    sol.potential = V;
    sol.basis = basis;
    sol.coeff = Eigen::VectorXcd::Zero(basis.rank());
    sol.coeff(mode) = 1.0;
    sol.captured_norm = 1.0;

    sol.snapshots.reserve(static_cast<std::size_t>(n_snap));
    for (int i = 0; i < n_snap; ++i) {
        const double t =
            problem.t0 + (problem.tf - problem.t0) * static_cast<double>(i) / (n_snap - 1);
        sol.snapshots.push_back(make_snapshot(sol.psi_at(t), t, sol.maze, sol.params));
    }
    return sol;
}

StateCost recover_state_cost(const ControlSolution& sol) {
    if (sol.snapshots.size() < 3)
        throw std::invalid_argument("recover_state_cost: need at least 3 snapshots");
    const double nu = sol.params.nu();
    StateCost out;
    out.q_tilde.reserve(sol.snapshots.size());
    out.q.reserve(sol.snapshots.size());
    for (const auto& s : sol.snapshots) {
        const ScalarField dtS = phase_time_derivative(sol, s.t);
        const Eigen::VectorXd grad_sq = s.grad_S.x1.cwiseAbs2() + s.grad_S.x2.cwiseAbs2();
        ScalarField qt{sol.potential.v + 2.0 * dtS.v + nu * grad_sq, s.t};
        const ScalarField bohm = bohm_potential(s.R, sol.maze, sol.params);
        out.q.push_back({qt.v - bohm.v, s.t});
        out.q_tilde.push_back(std::move(qt));
    }
    return out;
}

std::vector<ScalarField> desirability_state_cost(const ControlSolution& sol) {
    const double c = sol.params.nu() / (2.0 * sol.params.lambda());
    std::vector<ScalarField> out;
    out.reserve(sol.snapshots.size());
    for (const auto& s : sol.snapshots) {
        const ScalarField dtS = phase_time_derivative(sol, s.t);
        const Eigen::VectorXd grad_sq = s.grad_S.x1.cwiseAbs2() + s.grad_S.x2.cwiseAbs2();
        out.push_back({-dtS.v + c * grad_sq, s.t});
    }
    return out;
}

std::vector<HjbResidualReport> hjb_residual(const ControlSolution& sol,
                                            const std::vector<ScalarField>& q_tilde) {
    if (q_tilde.size() != sol.snapshots.size())
        throw std::invalid_argument("hjb_residual: one q_tilde field per snapshot required");
    const GridMaze& maze = sol.maze;
    const double lambda = sol.params.lambda();
    const double nu = sol.params.nu();
    const double inv_m = 1.0 / sol.params.mass();
    const double delta = 1e-3 * (sol.tf - sol.t0);

    std::vector<HjbResidualReport> reports;
    reports.reserve(sol.snapshots.size());
    for (std::size_t si = 0; si < sol.snapshots.size(); ++si) {
        const ControlSnapshot& s = sol.snapshots[si];

        const ScalarField dtS = phase_time_derivative(sol, s.t);
        const ComplexField lo = sol.psi_at(s.t - delta);
        const ComplexField hi = sol.psi_at(s.t + delta);
        const Eigen::VectorXd R_lo = extract_R(lo).v, R_hi = extract_R(hi).v;
        const Eigen::VectorXd dtR = (R_hi - R_lo) / (2.0 * delta);
        const Eigen::VectorXd dtMu = (hi.v.cwiseAbs2() - lo.v.cwiseAbs2()) / (2.0 * delta);

        // Lap S as the divergence of the (unwrapping-free) grad S field.
        const Eigen::VectorXd lapS = grad_available(maze, s.grad_S.x1)[0] +
                                     grad_available(maze, s.grad_S.x2)[1];
        const Eigen::VectorXd gradS_sq = s.grad_S.x1.cwiseAbs2() + s.grad_S.x2.cwiseAbs2();
        const auto gR = grad_available(maze, s.R.v);

        const Eigen::VectorXd phase =
            dtS.v - 0.5 * inv_m * gradS_sq + 0.5 * nu * lapS + q_tilde[si].v;
        const Eigen::VectorXd transport =
            dtR - inv_m * (s.grad_S.x1.cwiseProduct(gR[0]) + s.grad_S.x2.cwiseProduct(gR[1]));
        const Eigen::VectorXd combined = transport - phase / lambda;

        // Density balance of the simulated SDE: advection by the applied
        // drift plus diffusion at covariance nu.
        const Eigen::VectorXd flux1 = s.mu.v.cwiseProduct(s.action.x1);
        const Eigen::VectorXd flux2 = s.mu.v.cwiseProduct(s.action.x2);
        const Eigen::VectorXd continuity = dtMu + grad_dirichlet(maze, flux1)[0] +
                                           grad_dirichlet(maze, flux2)[1] -
                                           0.5 * nu * laplace_dirichlet(maze, s.mu.v);

        HjbResidualReport rep;
        rep.t = s.t;
        rep.phase_rms = masked_rms(phase, s.reliable);
        rep.transport_rms = masked_rms(transport, s.reliable);
        rep.combined_rms = masked_rms(combined, s.reliable);
        rep.continuity_rms = masked_rms(continuity, s.reliable);
        rep.n_reliable = static_cast<int>(
            std::count(s.reliable.begin(), s.reliable.end(), std::uint8_t{1}));
        auto masked = [&s](Eigen::VectorXd v) {
            for (int i = 0; i < v.size(); ++i)
                if (!s.reliable[static_cast<std::size_t>(i)]) v(i) = 0.0;
            return v;
        };
        rep.phase = masked(phase);
        rep.transport = masked(transport);
        rep.combined = masked(combined);
        rep.continuity = masked(continuity);
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace wavefocus
