#include "wavefocus/rollout.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavefocus {

namespace {

// Counter-based RNG: one splitmix64 stream per path so ensembles are
// order-independent and reproducible across platforms.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    // Box-Muller, explicit so draws are identical on every standard library.
    std::pair<double, double> normal_pair() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }
};

std::uint64_t path_stream_seed(std::uint64_t seed, int path) {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ull * (static_cast<std::uint64_t>(path) + 1)));
    return mix.next();
}

// Bilinear interpolation of a free-cell field at a physical point; corners
// that are walls (or off-grid) fall back to the value at the containing cell.
double interp_free_field(const GridMaze& maze, const Eigen::VectorXd& field,
                         const Eigen::Vector2d& p, int containing_free) {
    const auto& e = maze.extent();
    const double fx = (p.x() - e[0]) / maze.h1();
    const double fy = maze.ny() > 1 ? (p.y() - e[2]) / maze.h2() : 0.0;
    int ix0 = static_cast<int>(std::floor(fx));
    int iy0 = static_cast<int>(std::floor(fy));
    ix0 = std::min(std::max(ix0, 0), std::max(maze.nx() - 2, 0));
    iy0 = std::min(std::max(iy0, 0), std::max(maze.ny() - 2, 0));
    const double wx = std::min(std::max(fx - ix0, 0.0), 1.0);
    const double wy = maze.ny() > 1 ? std::min(std::max(fy - iy0, 0.0), 1.0) : 0.0;

    const double fallback = field(containing_free);
    auto corner = [&](int dx, int dy) {
        const int ix = ix0 + dx, iy = iy0 + dy;
        if (ix >= maze.nx() || iy >= maze.ny()) return fallback;
        const int fi = maze.free_index(maze.cell(ix, iy));
        return fi >= 0 ? field(fi) : fallback;
    };
    const double v00 = corner(0, 0), v10 = corner(1, 0);
    if (maze.ny() == 1) return (1.0 - wx) * v00 + wx * v10;
    const double v01 = corner(0, 1), v11 = corner(1, 1);
    return (1.0 - wx) * (1.0 - wy) * v00 + wx * (1.0 - wy) * v10 +
           (1.0 - wx) * wy * v01 + wx * wy * v11;
}

struct DriftSample {
    Eigen::Vector2d u;
    double running_q;
};

}  // namespace

double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
    const double sa = a.sum(), sb = b.sum();
    if (!(sa > 0.0) || !(sb > 0.0))
        throw std::invalid_argument("total_variation: inputs must have positive mass");
    return 0.5 * (a / sa - b / sb).cwiseAbs().sum();
}

RolloutEnsemble simulate(const ControlSolution& solution, const ControlProblem& problem,
                         const RolloutConfig& config,
                         const std::vector<ScalarField>* running_cost) {
    if (config.n_paths <= 0) throw std::invalid_argument("simulate: n_paths must be positive");
    const double horizon = solution.tf - solution.t0;
    const long n_steps = std::lround(horizon / config.dt);
    if (n_steps < 1 || std::abs(n_steps * config.dt - horizon) > 1e-9 * std::max(1.0, horizon))
        throw std::invalid_argument("simulate: dt must divide tf - t0");
    if (running_cost && running_cost->size() != solution.snapshots.size())
        throw std::invalid_argument("simulate: one running-cost field per snapshot required");

    const GridMaze& maze = solution.maze;
    const int n_snap = static_cast<int>(solution.snapshots.size());
    const double snap_dt = n_snap > 1 ? horizon / (n_snap - 1) : horizon;
    const bool axis2 = maze.ny() > 1;

    // Cumulative initial-density distribution over free cells.
    std::vector<double> cdf(static_cast<std::size_t>(maze.n_free()));
    double acc = 0.0;
    for (int i = 0; i < maze.n_free(); ++i) {
        acc += problem.initial_density.v(i);
        cdf[static_cast<std::size_t>(i)] = acc;
    }

    const double nu_eff = solution.params.nu() * config.noise_scale;
    const double noise_std = std::sqrt(nu_eff * config.dt);
    const double inv_m = 1.0 / solution.params.mass();
    const auto& e = maze.extent();

    auto sample_at = [&](const Eigen::Vector2d& p, int snap, int free_i) -> DriftSample {
        const ControlSnapshot& s = solution.snapshots[static_cast<std::size_t>(snap)];
        DriftSample d;
        d.u.x() = config.zero_control ? 0.0 : interp_free_field(maze, s.action.x1, p, free_i);
        d.u.y() = config.zero_control || !axis2
                      ? 0.0
                      : interp_free_field(maze, s.action.x2, p, free_i);
        d.running_q = running_cost
                          ? interp_free_field(maze, (*running_cost)[static_cast<std::size_t>(snap)].v,
                                              p, free_i)
                          : 0.0;
        return d;
    };

    RolloutEnsemble ens;
    ens.config = config;
    ens.t0 = solution.t0;
    ens.tf = solution.tf;
    ens.paths.resize(static_cast<std::size_t>(config.n_paths));
    if (config.record_paths)
        ens.trajectories.resize(static_cast<std::size_t>(config.n_paths));
    ens.final_histogram = Eigen::VectorXd::Zero(maze.n_free());
    ens.time_avg_histogram = Eigen::VectorXd::Zero(maze.n_free());
    for (auto& h : ens.third_histogram) h = Eigen::VectorXd::Zero(maze.n_free());

    for (int pi = 0; pi < config.n_paths; ++pi) {
        SplitMix64 rng(path_stream_seed(config.seed, pi));
        PathSummary& path = ens.paths[static_cast<std::size_t>(pi)];

        // Initial cell from the density, jittered uniformly within the cell
        // (clipped to the extent).
        const double u0 = rng.uniform() * acc;
        int cell_i = static_cast<int>(
            std::lower_bound(cdf.begin(), cdf.end(), u0) - cdf.begin());
        cell_i = std::min(cell_i, maze.n_free() - 1);
        const Eigen::Vector2d center = maze.position(maze.free_cell(cell_i));
        Eigen::Vector2d p = center;
        {
            const double j1 = (rng.uniform() - 0.5) * maze.h1();
            p.x() = std::min(std::max(center.x() + j1, e[0]), e[1]);
            if (axis2) {
                const double j2 = (rng.uniform() - 0.5) * maze.h2();
                p.y() = std::min(std::max(center.y() + j2, e[2]), e[3]);
            }
        }
        path.start = p;
        int free_i = maze.free_index(maze.cell_at(p.x(), p.y()));
        if (config.record_paths) ens.trajectories[static_cast<std::size_t>(pi)].push_back(p);
        ens.time_avg_histogram(free_i) += 1.0;
        ens.third_histogram[0](free_i) += 1.0;

        bool alive = true;
        DriftSample here = sample_at(p, 0, free_i);
        for (long step = 0; step < n_steps && alive; ++step) {
            const double t_next = (step + 1) * config.dt;
            const int snap_next =
                std::min(static_cast<int>(std::lround(t_next / snap_dt)), n_snap - 1);

            const auto [g1, g2] = rng.normal_pair();
            Eigen::Vector2d q = p;
            q.x() += here.u.x() * config.dt + noise_std * g1;
            if (axis2) q.y() += here.u.y() * config.dt + noise_std * g2;

            const int cell = maze.cell_at(q.x(), q.y());
            const int next_free = cell >= 0 ? maze.free_index(cell) : -1;
            if (next_free < 0) {
                alive = false;
                path.terminated = true;
                path.termination_time = solution.t0 + t_next;
                path.final = p;
                break;
            }
            const DriftSample there = sample_at(q, snap_next, next_free);
            // Per-step trapezoid for both cost integrals.
            const double a2_here = here.u.squaredNorm();
            const double a2_there = there.u.squaredNorm();
            path.action_cost += 0.5 * config.dt * 0.5 * inv_m * (a2_here + a2_there);
            path.state_cost += 0.5 * config.dt * (here.running_q + there.running_q);

            p = q;
            free_i = next_free;
            here = there;
            if (config.record_paths) ens.trajectories[static_cast<std::size_t>(pi)].push_back(p);
            ens.time_avg_histogram(free_i) += 1.0;
            const int third = std::min<long>(2, 3 * (step + 1) / n_steps);
            ens.third_histogram[static_cast<std::size_t>(third)](free_i) += 1.0;
        }
        if (alive) {
            path.final = p;
            ens.final_histogram(free_i) += 1.0;
            ++ens.survivors;
        }
    }
    return ens;
}

RolloutEnsemble simulate_uncontrolled(const ControlSolution& solution,
                                      const ControlProblem& problem, RolloutConfig config) {
    config.zero_control = true;
    return simulate(solution, problem, config, nullptr);
}

CostEstimate estimate_expected_cost(const RolloutEnsemble& ensemble,
                                    const ControlSolution& solution,
                                    const std::optional<ScalarField>& final_cost) {
    const GridMaze& maze = solution.maze;
    CostEstimate est;
    double sum = 0.0, sum_sq = 0.0;
    int n_terminated = 0;
    for (const PathSummary& path : ensemble.paths) {
        double cost = path.action_cost + path.state_cost;
        if (path.terminated) {
            ++n_terminated;
            if (ensemble.config.termination_policy == TerminationCostPolicy::exclude) continue;
            cost += ensemble.config.termination_penalty;
        } else if (final_cost) {
            const int fi = maze.free_index(maze.cell_at(path.final.x(), path.final.y()));
            cost += interp_free_field(maze, final_cost->v, path.final, fi);
        }
        sum += cost;
        sum_sq += cost * cost;
        ++est.n_used;
    }
    est.termination_fraction =
        ensemble.paths.empty() ? 0.0
                               : static_cast<double>(n_terminated) / ensemble.paths.size();
    if (est.n_used == 0) return est;  // undefined, reported as such
    est.defined = true;
    est.mean = sum / est.n_used;
    if (est.n_used > 1) {
        const double var = (sum_sq - sum * sum / est.n_used) / (est.n_used - 1);
        est.stderr_ = std::sqrt(std::max(var, 0.0) / est.n_used);
    }
    return est;
}

FocusingReport focusing_report(const RolloutEnsemble& ensemble, const GridMaze& maze,
                               double radius, const Eigen::VectorXd& final_density) {
    FocusingReport rep;
    rep.survivor_fraction = ensemble.survivor_fraction();
    const Eigen::Vector2d goal = maze.position(maze.goal_cell());
    int in_ball = 0;
    for (const PathSummary& path : ensemble.paths) {
        if (!path.terminated && (path.final - goal).norm() <= radius) ++in_ball;
    }
    rep.goal_fraction = ensemble.survivors > 0
                            ? static_cast<double>(in_ball) / ensemble.survivors
                            : 0.0;
    if (ensemble.final_histogram.sum() > 0.0 && final_density.sum() > 0.0) {
        rep.tv_final = total_variation(ensemble.final_histogram, final_density);
        rep.final_histogram = ensemble.final_histogram / ensemble.final_histogram.sum();
    } else {
        rep.final_histogram = ensemble.final_histogram;
    }
    return rep;
}

}  // namespace wavefocus
