#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "wavefocus/control.hpp"
#include "wavefocus/fields.hpp"
#include "wavefocus/focusing.hpp"
#include "wavefocus/maze.hpp"
#include "wavefocus/rollout.hpp"

namespace wavefocus {

/**
 * On-disk formats. All floating point output uses shortest-roundtrip (%.17g)
 * formatting, so re-running a deterministic computation reproduces identical
 * bytes.
 *
 * Grid CSV: one row per maze row (iy), wall cells are empty entries.
 * Checkpoints: flat row-major float64 grid (walls stored as 0) with a JSON
 * sidecar naming the iteration, metric value, and config hash.
 */

void write_grid_csv(const std::string& path, const GridMaze& maze,
                    const Eigen::VectorXd& free_values);
Eigen::VectorXd read_grid_csv(const std::string& path, const GridMaze& maze);

void write_curve_csv(const std::string& path, const LearningCurve& curve);
LearningCurve read_curve_csv(const std::string& path);

void write_checkpoint(const std::string& path_base, const GridMaze& maze,
                      const ScalarField& V, int iteration, double metric,
                      const std::string& config_hash);
ScalarField read_checkpoint(const std::string& path_base, const GridMaze& maze);

void write_wall_mask_csv(const std::string& path, const GridMaze& maze);
void write_axis_csv(const std::string& path, const Eigen::VectorXd& coords);

std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace wavefocus
