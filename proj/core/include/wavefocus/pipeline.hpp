#pragma once

#include <string>

#include "wavefocus/control.hpp"
#include "wavefocus/focusing.hpp"
#include "wavefocus/problem.hpp"
#include "wavefocus/rollout.hpp"
#include "wavefocus/run_config.hpp"

namespace wavefocus {

/// Builds the maze and the control problem a config describes.
ControlProblem make_problem(const RunConfig& cfg);

struct SolveOutputs {
    OptimizeResult opt;
    ControlSolution solution;  // extracted at the best potential
    StateCost costs;
    std::string config_hash;

    SolveOutputs(OptimizeResult opt_, ControlSolution solution_, StateCost costs_,
                 std::string hash_)
        : opt(std::move(opt_)), solution(std::move(solution_)), costs(std::move(costs_)),
          config_hash(std::move(hash_)) {}
};

/**
 * The full solve: optimize the potential from the quadratic initialization,
 * extract the control solution and recovered costs at the best potential.
 * Pure computation; writes nothing.
 */
SolveOutputs run_solve(const RunConfig& cfg);

/**
 * Writes the artifact set into cfg.output_dir: the potential (binary
 * checkpoint plus grid CSV), learning-curve CSV, per-snapshot field CSVs,
 * wall mask and axis coordinates, and manifest.json. On failure the caller
 * writes a FAILED manifest via write_failure_manifest instead.
 */
void write_solve_artifacts(const RunConfig& cfg, const SolveOutputs& out);

void write_failure_manifest(const RunConfig& cfg, const std::string& stage,
                            const std::string& message);

/// Re-derives the control solution from a solution directory (potential
/// checkpoint + config). Verifies the stored config hash and throws
/// std::invalid_argument on mismatch.
ControlSolution load_solution(const RunConfig& cfg, const std::string& solution_dir);

struct RolloutOutputs {
    FocusingReport report;
    CostEstimate cost;
    RolloutEnsemble ensemble;
};

/// Simulates the ensemble under the solution's control and summarizes it.
RolloutOutputs run_rollout(const RunConfig& cfg, const ControlSolution& solution,
                           const ControlProblem& problem);

/// Writes rollout_report.json (and paths.csv when record_paths is on).
void write_rollout_artifacts(const std::string& dir, const RunConfig& cfg,
                             const RolloutOutputs& out);

/// Re-exports one named artifact ("potential", "density", "psi", "action",
/// "current", "qtilde", "q", "cost_to_go", "learning_curve") from a solution
/// directory into export_dir. Throws std::invalid_argument for unknown names.
void export_artifact(const RunConfig& cfg, const std::string& solution_dir,
                     const std::string& what, const std::string& export_dir);

}  // namespace wavefocus
