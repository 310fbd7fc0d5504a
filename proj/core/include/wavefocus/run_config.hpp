#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace wavefocus {

/**
 * Everything a solve/rollout run needs, loaded from a JSON config file.
 * Widths sigma0 / sigma_target are in state units; when absent they default
 * to 2 and 1.5 grid cells respectively. The maze is given either as a file
 * path (resolved relative to the config file) or inline ASCII.
 */
struct RunConfig {
    // problem
    std::string maze_file;     // one of maze_file / maze_inline must be set
    std::string maze_inline;
    std::array<double, 4> extent{-1.0, 1.0, -1.0, 1.0};
    double t0 = 0.0;
    double tf = 0.6;
    std::optional<double> sigma0;
    std::optional<double> sigma_target;

    // physics
    double hbar = 1.0;
    double lambda = 1.0;
    double mass = 0.5;

    // solver
    int eigenmodes = 15;
    double learning_rate = 0.02;
    int max_iters = 5000;
    int window = 20;
    double rel_tol = 1e-4;
    double init_scale = 1.0;
    double degeneracy_gap = 1e-8;
    int checkpoint_interval = 0;
    int snapshots = 9;

    // rollout
    int n_paths = 10000;
    double rollout_dt = 1e-3;
    std::uint64_t seed = 0;
    double goal_radius = 0.15;
    bool record_paths = false;

    std::string output_dir = "out";

    /// The maze ASCII, reading the file if needed.
    std::string maze_text() const;
};

/// Parses and validates a config file. Throws std::invalid_argument with the
/// offending key on bad input.
RunConfig load_run_config(const std::string& path);

/// Parses a config from a JSON string (paths resolved against base_dir).
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir);

/**
 * Hash over the solve-relevant fields (problem, physics, solver, and the
 * maze content itself). Rollout settings and the output directory do not
 * participate, so a solution directory stays valid when only those change.
 */
std::string solve_config_hash(const RunConfig& cfg);

}  // namespace wavefocus
