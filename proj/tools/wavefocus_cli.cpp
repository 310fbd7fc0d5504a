// wavefocus: solve a maze control problem by shaping a potential so the
// propagated wavefront focuses on the goal, then verify the implied control
// by simulating the agent ensemble.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "wavefocus/artifact_io.hpp"
#include "wavefocus/focusing.hpp"
#include "wavefocus/marchenko.hpp"
#include "wavefocus/pipeline.hpp"

namespace fs = std::filesystem;
using namespace wavefocus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

int run_solve_cmd(const std::string& config_path, const std::string& output_override) {
    RunConfig cfg = load_run_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;

    std::string stage = "load_config";
    try {
        stage = "parse_maze";
        const ControlProblem probe = make_problem(cfg);  // surfaces maze errors early
        (void)probe;
        stage = "optimize";
        const SolveOutputs out = run_solve(cfg);
        stage = "write_artifacts";
        write_solve_artifacts(cfg, out);
        if (out.opt.reason == StopReason::aborted_non_finite) {
            write_failure_manifest(cfg, "optimize", "metric or gradient became non-finite");
            std::cerr << "wavefocus solve: aborted, metric became non-finite; "
                         "best potential retained in "
                      << cfg.output_dir << "\n";
            return kExitNumerical;
        }
        std::cout << "solved: " << out.opt.iters << " iterations, metric "
                  << format_double(out.opt.metric) << ", captured norm "
                  << format_double(out.solution.captured_norm) << "\n"
                  << "artifacts in " << cfg.output_dir << "\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        write_failure_manifest(cfg, stage, e.what());
        std::cerr << "wavefocus solve [" << stage << "]: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        write_failure_manifest(cfg, stage, e.what());
        std::cerr << "wavefocus solve [" << stage << "]: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_rollout_cmd(const std::string& config_path, const std::string& solution_dir,
                    const std::string& output_override) {
    const RunConfig cfg = load_run_config(config_path);
    const std::string out_dir = output_override.empty()
                                    ? (fs::path(solution_dir) / "rollout").string()
                                    : output_override;
    const ControlSolution solution = load_solution(cfg, solution_dir);
    const ControlProblem problem = make_problem(cfg);
    const RolloutOutputs out = run_rollout(cfg, solution, problem);
    write_rollout_artifacts(out_dir, cfg, out);
    std::cout << "rollout: " << out.ensemble.paths.size() << " paths, survivors "
              << format_double(out.report.survivor_fraction) << ", goal fraction "
              << format_double(out.report.goal_fraction) << ", final TV "
              << format_double(out.report.tv_final) << "\n"
              << "report in " << out_dir << "\n";
    return kExitOk;
}

Eigen::VectorXd read_column_csv(const std::string& path, int column, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::vector<double> values;
    std::string line;
    if (skip_header) std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        for (int c = 0; c <= column; ++c)
            if (!std::getline(row, cell, ','))
                throw std::invalid_argument("missing column in " + path);
        values.push_back(std::stod(cell));
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = values[static_cast<std::size_t>(i)];
    return out;
}

void write_columns_csv(const std::string& path, const std::string& header,
                       const std::vector<Eigen::VectorXd>& cols) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << header << "\n";
    for (Eigen::Index i = 0; i < cols.front().size(); ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out << ',';
            out << format_double(cols[c](i));
        }
        out << "\n";
    }
}

// invert1d potential mode: kernel samples (tau, gamma) -> potential (x, V).
int run_invert1d_potential(const std::string& input, const std::string& output,
                           double x_min, double x_max, int n_pts) {
    const Eigen::VectorXd tau = read_column_csv(input, 0, true);
    const Eigen::VectorXd gamma = read_column_csv(input, 1, true);
    if (tau.size() < 2) throw std::invalid_argument("kernel needs at least two samples");

    Eigen::VectorXd x(n_pts);
    const double h = (x_max - x_min) / (n_pts - 1);
    for (int i = 0; i < n_pts; ++i) x(i) = x_min + i * h;

    MarchenkoKernel kern;
    kern.tau0 = tau(0);
    kern.dtau = tau(1) - tau(0);
    kern.values = gamma;
    const CausalKernel omega = solve_marchenko(kern, x);
    const Eigen::VectorXd V = potential_from_kernel(omega);
    write_columns_csv(output, "x,V", {x, V});
    std::cout << "wrote potential (" << n_pts << " samples) to " << output << "\n";
    return kExitOk;
}

// invert1d reflection mode: potential samples (x, V) -> reflection (k, re, im).
int run_invert1d_reflection(const std::string& input, const std::string& output,
                            double k_max, int n_k) {
    const Eigen::VectorXd x = read_column_csv(input, 0, true);
    const Eigen::VectorXd V = read_column_csv(input, 1, true);
    Eigen::VectorXd k(n_k);
    for (int i = 0; i < n_k; ++i) k(i) = k_max * (i + 1) / n_k;
    const Eigen::VectorXcd r = reflection_coefficient(x, V, k);
    write_columns_csv(output, "k,re,im", {k, r.real(), r.imag()});
    std::cout << "wrote reflection coefficient (" << n_k << " samples) to " << output << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavefocus: focusing-potential solver for maze control problems"};
    app.require_subcommand(1);

    std::string config_path, solution_dir, output_dir, what, input, output, mode;
    double x_min = -8.0, x_max = 8.0, k_max = 12.0;
    int n_pts = 400, n_k = 600;

    CLI::App* solve =
        app.add_subcommand("solve", "optimize the potential and export the solution");
    solve->add_option("--config", config_path, "run configuration JSON")->required();
    solve->add_option("--output", output_dir, "override the configured output directory");

    CLI::App* rollout =
        app.add_subcommand("rollout", "simulate the controlled ensemble for a solved run");
    rollout->add_option("--config", config_path, "run configuration JSON")->required();
    rollout->add_option("--solution", solution_dir, "solution directory from solve")->required();
    rollout->add_option("--output", output_dir, "report directory (default: <solution>/rollout)");

    CLI::App* invert =
        app.add_subcommand("invert1d", "one-dimensional inverse scattering utilities");
    invert->add_option("--mode", mode, "potential (kernel csv -> V) or reflection (V csv -> r)")
        ->required()
        ->check(CLI::IsMember({"potential", "reflection"}));
    invert->add_option("--input", input, "input CSV")->required();
    invert->add_option("--output", output, "output CSV")->required();
    invert->add_option("--x-min", x_min, "left edge of the reconstruction grid");
    invert->add_option("--x-max", x_max, "right edge of the reconstruction grid");
    invert->add_option("--points", n_pts, "reconstruction grid size");
    invert->add_option("--k-max", k_max, "largest wavenumber");
    invert->add_option("--k-points", n_k, "number of wavenumbers");

    CLI::App* exp = app.add_subcommand("export", "re-export solution fields for plotting");
    exp->add_option("--config", config_path, "run configuration JSON")->required();
    exp->add_option("--solution", solution_dir, "solution directory from solve")->required();
    exp->add_option("--what", what,
                    "potential | density | psi | action | current | qtilde | q | "
                    "cost_to_go | learning_curve")
        ->required();
    exp->add_option("--output", output_dir, "export directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve_cmd(config_path, output_dir);
        if (rollout->parsed()) return run_rollout_cmd(config_path, solution_dir, output_dir);
        if (invert->parsed()) {
            if (mode == "potential")
                return run_invert1d_potential(input, output, x_min, x_max, n_pts);
            return run_invert1d_reflection(input, output, k_max, n_k);
        }
        if (exp->parsed()) {
            const RunConfig cfg = load_run_config(config_path);
            export_artifact(cfg, solution_dir, what, output_dir);
            std::cout << "exported " << what << " to " << output_dir << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "wavefocus: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "wavefocus: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitValidation;
}
