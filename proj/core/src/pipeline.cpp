#include "wavefocus/pipeline.hpp"

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "wavefocus/artifact_io.hpp"

namespace wavefocus {

namespace fs = std::filesystem;
using nlohmann::json;

ControlProblem make_problem(const RunConfig& cfg) {
    GridMaze maze = parse_maze(cfg.maze_text(), cfg.extent);
    const double sigma0 = cfg.sigma0.value_or(2.0 * maze.h1());
    const double sigma_t = cfg.sigma_target.value_or(1.5 * maze.h1());
    PhysicalParams params(cfg.hbar, cfg.lambda, cfg.mass);
    ScalarField mu0 = default_initial_density(maze, sigma0);
    ScalarField target = default_target(maze, sigma_t);
    return ControlProblem(std::move(maze), std::move(params), cfg.t0, cfg.tf,
                          std::move(mu0), std::move(target));
}

SolveOutputs run_solve(const RunConfig& cfg) {
    const ControlProblem problem = make_problem(cfg);
    const ScalarField V0 = quadratic_init(problem.maze, cfg.init_scale);

    FocusingConfig fc;
    fc.learning_rate = cfg.learning_rate;
    fc.max_iters = cfg.max_iters;
    fc.window = cfg.window;
    fc.rel_tol = cfg.rel_tol;
    fc.k = cfg.eigenmodes;
    fc.degeneracy_gap = cfg.degeneracy_gap;
    fc.checkpoint_interval = cfg.checkpoint_interval;

    const std::string hash = solve_config_hash(cfg);
    CheckpointFn on_checkpoint = nullptr;
    if (cfg.checkpoint_interval > 0) {
        const fs::path ckdir = fs::path(cfg.output_dir) / "checkpoints";
        fs::create_directories(ckdir);
        on_checkpoint = [ckdir, &problem, hash](int iter, const ScalarField& V, double metric) {
            char name[32];
            std::snprintf(name, sizeof name, "checkpoint_%06d", iter);
            write_checkpoint((ckdir / name).string(), problem.maze, V, iter, metric, hash);
        };
    }

    OptimizeResult opt = optimize(V0, problem, fc, on_checkpoint);
    ControlSolution solution =
        extract_solution(problem, opt.potential, cfg.eigenmodes, cfg.snapshots);
    StateCost costs = recover_state_cost(solution);
    return SolveOutputs(std::move(opt), std::move(solution), std::move(costs), hash);
}

namespace {

void write_snapshot_fields(const fs::path& dir, const ControlSolution& sol,
                           const StateCost& costs) {
    const GridMaze& maze = sol.maze;
    char suffix[16];
    for (std::size_t i = 0; i < sol.snapshots.size(); ++i) {
        std::snprintf(suffix, sizeof suffix, "_%03zu.csv", i);
        const ControlSnapshot& s = sol.snapshots[i];
        write_grid_csv((dir / ("mu" + std::string(suffix))).string(), maze, s.mu.v);
        write_grid_csv((dir / ("psi_re" + std::string(suffix))).string(), maze, s.psi.v.real());
        write_grid_csv((dir / ("psi_im" + std::string(suffix))).string(), maze, s.psi.v.imag());
        write_grid_csv((dir / ("log_amplitude" + std::string(suffix))).string(), maze, s.R.v);
        write_grid_csv((dir / ("action1" + std::string(suffix))).string(), maze, s.action.x1);
        write_grid_csv((dir / ("action2" + std::string(suffix))).string(), maze, s.action.x2);
        write_grid_csv((dir / ("current1" + std::string(suffix))).string(), maze, s.current.x1);
        write_grid_csv((dir / ("current2" + std::string(suffix))).string(), maze, s.current.x2);
        write_grid_csv((dir / ("qtilde" + std::string(suffix))).string(), maze,
                       costs.q_tilde[i].v);
        write_grid_csv((dir / ("q" + std::string(suffix))).string(), maze, costs.q[i].v);
        Eigen::VectorXd rel(maze.n_free());
        for (int c = 0; c < maze.n_free(); ++c)
            rel(c) = s.reliable[static_cast<std::size_t>(c)] ? 1.0 : 0.0;
        write_grid_csv((dir / ("reliable" + std::string(suffix))).string(), maze, rel);
    }
}

json snapshot_manifest(const ControlSolution& sol) {
    json times = json::array();
    for (const auto& s : sol.snapshots) times.push_back(s.t);
    json m;
    m["times"] = times;
    m["fields"] = {"mu",      "psi_re",   "psi_im",   "log_amplitude", "action1", "action2",
                   "current1", "current2", "qtilde",   "q",             "reliable"};
    m["units"] = {{"time", "problem time"}, {"space", "state units"},
                  {"mu", "cell mass"},      {"action", "state units per time"}};
    m["layout"] = "grid CSV, one row per maze row, walls are empty entries";
    return m;
}

}  // namespace

void write_solve_artifacts(const RunConfig& cfg, const SolveOutputs& out) {
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    write_checkpoint((dir / "potential").string(), out.solution.maze, out.opt.potential,
                     out.opt.iters, out.opt.metric, out.config_hash);
    write_grid_csv((dir / "potential.csv").string(), out.solution.maze, out.opt.potential.v);
    write_curve_csv((dir / "learning_curve.csv").string(), out.opt.curve);
    write_wall_mask_csv((dir / "wall_mask.csv").string(), out.solution.maze);

    Eigen::VectorXd x1(out.solution.maze.nx()), x2(out.solution.maze.ny());
    for (int i = 0; i < x1.size(); ++i) x1(i) = out.solution.maze.x1(i);
    for (int i = 0; i < x2.size(); ++i) x2(i) = out.solution.maze.x2(i);
    write_axis_csv((dir / "x1.csv").string(), x1);
    write_axis_csv((dir / "x2.csv").string(), x2);

    write_snapshot_fields(dir, out.solution, out.costs);

    json manifest;
    manifest["status"] = "ok";
    manifest["config_hash"] = out.config_hash;
    manifest["tool"] = "wavefocus";
    manifest["iterations"] = out.opt.iters;
    manifest["final_metric"] = out.opt.metric;
    manifest["captured_norm"] = out.solution.captured_norm;
    manifest["stop_reason"] = out.opt.reason == StopReason::converged  ? "converged"
                              : out.opt.reason == StopReason::max_iters ? "max_iters"
                                                                        : "aborted_non_finite";
    manifest["snapshots"] = snapshot_manifest(out.solution);
    if (!out.opt.curve.seconds.empty())
        manifest["solve_seconds"] = out.opt.curve.seconds.back();
    write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

void write_failure_manifest(const RunConfig& cfg, const std::string& stage,
                            const std::string& message) {
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    json manifest;
    manifest["status"] = "FAILED";
    manifest["stage"] = stage;
    manifest["error"] = message;
    write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

ControlSolution load_solution(const RunConfig& cfg, const std::string& solution_dir) {
    const fs::path dir(solution_dir);
    const json manifest = json::parse(read_text_file((dir / "manifest.json").string()));
    if (manifest.value("status", "") != "ok")
        throw std::invalid_argument("load_solution: solution directory is marked " +
                                    manifest.value("status", "(missing)"));
    const std::string expect = solve_config_hash(cfg);
    const std::string got = manifest.value("config_hash", "");
    if (got != expect)
        throw std::invalid_argument(
            "load_solution: config hash mismatch (solution " + got + ", config " + expect +
            "); the solution was produced from a different configuration");

    const ControlProblem problem = make_problem(cfg);
    const ScalarField V = read_checkpoint((dir / "potential").string(), problem.maze);
    return extract_solution(problem, V, cfg.eigenmodes, cfg.snapshots);
}

RolloutOutputs run_rollout(const RunConfig& cfg, const ControlSolution& solution,
                           const ControlProblem& problem) {
    RolloutConfig rc;
    rc.n_paths = cfg.n_paths;
    rc.dt = cfg.rollout_dt;
    rc.seed = cfg.seed;
    rc.goal_radius = cfg.goal_radius;
    rc.record_paths = cfg.record_paths;
    if (rc.n_paths == 0) throw std::invalid_argument("rollout: n_paths must be positive");

    const StateCost costs = recover_state_cost(solution);
    RolloutOutputs out{
        FocusingReport{}, CostEstimate{},
        simulate(solution, problem, rc, &costs.q)};
    out.report = focusing_report(out.ensemble, solution.maze, cfg.goal_radius,
                                 solution.snapshots.back().mu.v);
    out.cost = estimate_expected_cost(out.ensemble, solution, problem.final_cost);
    return out;
}

void write_rollout_artifacts(const std::string& dir_s, const RunConfig& cfg,
                             const RolloutOutputs& out) {
    const fs::path dir(dir_s);
    fs::create_directories(dir);
    json rep;
    rep["survivor_fraction"] = out.report.survivor_fraction;
    rep["goal_fraction"] = out.report.goal_fraction;
    rep["tv_final"] = out.report.tv_final;
    rep["n_paths"] = out.ensemble.config.n_paths;
    rep["dt"] = out.ensemble.config.dt;
    rep["seed"] = out.ensemble.config.seed;
    rep["goal_radius"] = out.ensemble.config.goal_radius;
    rep["expected_cost"] = {{"defined", out.cost.defined},
                            {"mean", out.cost.mean},
                            {"stderr", out.cost.stderr_},
                            {"n_used", out.cost.n_used},
                            {"termination_fraction", out.cost.termination_fraction}};
    write_text_file((dir / "rollout_report.json").string(), rep.dump(2) + "\n");

    if (cfg.record_paths) {
        std::string csv = "path,step,x1,x2\n";
        for (std::size_t pi = 0; pi < out.ensemble.trajectories.size(); ++pi) {
            const auto& traj = out.ensemble.trajectories[pi];
            for (std::size_t k = 0; k < traj.size(); ++k)
                csv += std::to_string(pi) + ',' + std::to_string(k) + ',' +
                       format_double(traj[k].x()) + ',' + format_double(traj[k].y()) + '\n';
        }
        write_text_file((dir / "paths.csv").string(), csv);
    }
}

void export_artifact(const RunConfig& cfg, const std::string& solution_dir,
                     const std::string& what, const std::string& export_dir) {
    const fs::path src(solution_dir);
    const fs::path dst(export_dir);
    fs::create_directories(dst);

    if (what == "learning_curve") {
        write_text_file((dst / "learning_curve.csv").string(),
                        read_text_file((src / "learning_curve.csv").string()));
        return;
    }

    const ControlSolution sol = load_solution(cfg, solution_dir);
    const GridMaze& maze = sol.maze;
    write_wall_mask_csv((dst / "wall_mask.csv").string(), maze);
    Eigen::VectorXd x1(maze.nx()), x2(maze.ny());
    for (int i = 0; i < x1.size(); ++i) x1(i) = maze.x1(i);
    for (int i = 0; i < x2.size(); ++i) x2(i) = maze.x2(i);
    write_axis_csv((dst / "x1.csv").string(), x1);
    write_axis_csv((dst / "x2.csv").string(), x2);

    char suffix[16];
    auto per_snapshot = [&](const std::string& name, auto&& field_of) {
        for (std::size_t i = 0; i < sol.snapshots.size(); ++i) {
            std::snprintf(suffix, sizeof suffix, "_%03zu.csv", i);
            write_grid_csv((dst / (name + suffix)).string(), maze,
                           field_of(sol.snapshots[i], i));
        }
    };

    if (what == "potential") {
        write_grid_csv((dst / "potential.csv").string(), maze, sol.potential.v);
    } else if (what == "density") {
        per_snapshot("mu", [](const ControlSnapshot& s, std::size_t) { return s.mu.v; });
    } else if (what == "psi") {
        per_snapshot("psi_re",
                     [](const ControlSnapshot& s, std::size_t) { return s.psi.v.real().eval(); });
        per_snapshot("psi_im",
                     [](const ControlSnapshot& s, std::size_t) { return s.psi.v.imag().eval(); });
    } else if (what == "action") {
        per_snapshot("action1", [](const ControlSnapshot& s, std::size_t) { return s.action.x1; });
        per_snapshot("action2", [](const ControlSnapshot& s, std::size_t) { return s.action.x2; });
    } else if (what == "current") {
        per_snapshot("current1",
                     [](const ControlSnapshot& s, std::size_t) { return s.current.x1; });
        per_snapshot("current2",
                     [](const ControlSnapshot& s, std::size_t) { return s.current.x2; });
    } else if (what == "qtilde" || what == "q") {
        const StateCost costs = recover_state_cost(sol);
        const auto& fields = what == "q" ? costs.q : costs.q_tilde;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            std::snprintf(suffix, sizeof suffix, "_%03zu.csv", i);
            write_grid_csv((dst / (what + suffix)).string(), maze, fields[i].v);
        }
    } else if (what == "cost_to_go") {
        for (std::size_t i = 0; i < sol.snapshots.size(); ++i) {
            std::snprintf(suffix, sizeof suffix, "_%03zu.csv", i);
            write_grid_csv((dst / ("cost_to_go" + std::string(suffix))).string(), maze,
                           cost_to_go(sol.snapshots[i].psi, sol.params.lambda()).J.v);
        }
    } else {
        throw std::invalid_argument("export: unknown artifact name '" + what + "'");
    }
}

}  // namespace wavefocus
