#include "wavefocus/run_config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wavefocus {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string RunConfig::maze_text() const {
    if (!maze_inline.empty()) return maze_inline;
    if (!maze_file.empty()) return read_file(maze_file);
    throw std::invalid_argument("config: either maze_file or maze_inline must be set");
}

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig cfg;
    if (j.contains("problem")) {
        const json& p = j.at("problem");
        maybe(p, "maze_file", cfg.maze_file);
        maybe(p, "maze_inline", cfg.maze_inline);
        maybe(p, "extent", cfg.extent);
        maybe(p, "t0", cfg.t0);
        maybe(p, "tf", cfg.tf);
        if (p.contains("sigma0") && !p.at("sigma0").is_null())
            cfg.sigma0 = p.at("sigma0").get<double>();
        if (p.contains("sigma_target") && !p.at("sigma_target").is_null())
            cfg.sigma_target = p.at("sigma_target").get<double>();
    }
    if (j.contains("physics")) {
        const json& p = j.at("physics");
        maybe(p, "hbar", cfg.hbar);
        maybe(p, "lambda", cfg.lambda);
        maybe(p, "mass", cfg.mass);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        maybe(s, "eigenmodes", cfg.eigenmodes);
        maybe(s, "learning_rate", cfg.learning_rate);
        maybe(s, "max_iters", cfg.max_iters);
        maybe(s, "window", cfg.window);
        maybe(s, "rel_tol", cfg.rel_tol);
        maybe(s, "init_scale", cfg.init_scale);
        maybe(s, "degeneracy_gap", cfg.degeneracy_gap);
        maybe(s, "checkpoint_interval", cfg.checkpoint_interval);
        maybe(s, "snapshots", cfg.snapshots);
    }
    if (j.contains("rollout")) {
        const json& r = j.at("rollout");
        maybe(r, "n_paths", cfg.n_paths);
        maybe(r, "dt", cfg.rollout_dt);
        maybe(r, "seed", cfg.seed);
        maybe(r, "goal_radius", cfg.goal_radius);
        maybe(r, "record_paths", cfg.record_paths);
    }
    maybe(j, "output_dir", cfg.output_dir);

    if (!cfg.maze_file.empty() && !base_dir.empty() &&
        !std::filesystem::path(cfg.maze_file).is_absolute())
        cfg.maze_file = (std::filesystem::path(base_dir) / cfg.maze_file).string();

    // Validation with the failing key in the message.
    if (cfg.maze_file.empty() && cfg.maze_inline.empty())
        throw std::invalid_argument("config: problem.maze_file or problem.maze_inline required");
    if (!(cfg.t0 < cfg.tf)) throw std::invalid_argument("config: problem.t0 must be < problem.tf");
    if (!(cfg.hbar > 0.0)) throw std::invalid_argument("config: physics.hbar must be positive");
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("config: physics.lambda must be positive");
    if (!(cfg.mass > 0.0)) throw std::invalid_argument("config: physics.mass must be positive");
    if (cfg.eigenmodes < 1) throw std::invalid_argument("config: solver.eigenmodes must be >= 1");
    if (!(cfg.learning_rate > 0.0))
        throw std::invalid_argument("config: solver.learning_rate must be positive");
    if (cfg.max_iters < 1) throw std::invalid_argument("config: solver.max_iters must be >= 1");
    if (cfg.window < 1) throw std::invalid_argument("config: solver.window must be >= 1");
    if (cfg.rel_tol < 0.0) throw std::invalid_argument("config: solver.rel_tol must be >= 0");
    if (cfg.snapshots < 2) throw std::invalid_argument("config: solver.snapshots must be >= 2");
    if (cfg.sigma0 && !(*cfg.sigma0 > 0.0))
        throw std::invalid_argument("config: problem.sigma0 must be positive");
    if (cfg.sigma_target && !(*cfg.sigma_target > 0.0))
        throw std::invalid_argument("config: problem.sigma_target must be positive");
    if (cfg.n_paths < 0) throw std::invalid_argument("config: rollout.n_paths must be >= 0");
    if (!(cfg.rollout_dt > 0.0)) throw std::invalid_argument("config: rollout.dt must be positive");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_run_config(read_file(path), base);
}

std::string solve_config_hash(const RunConfig& cfg) {
    json j;
    j["maze"] = cfg.maze_text();
    j["extent"] = cfg.extent;
    j["t0"] = cfg.t0;
    j["tf"] = cfg.tf;
    j["sigma0"] = cfg.sigma0 ? json(*cfg.sigma0) : json(nullptr);
    j["sigma_target"] = cfg.sigma_target ? json(*cfg.sigma_target) : json(nullptr);
    j["hbar"] = cfg.hbar;
    j["lambda"] = cfg.lambda;
    j["mass"] = cfg.mass;
    j["eigenmodes"] = cfg.eigenmodes;
    j["learning_rate"] = cfg.learning_rate;
    j["max_iters"] = cfg.max_iters;
    j["window"] = cfg.window;
    j["rel_tol"] = cfg.rel_tol;
    j["init_scale"] = cfg.init_scale;
    j["degeneracy_gap"] = cfg.degeneracy_gap;
    j["snapshots"] = cfg.snapshots;

    char buf[2 + 16 + 1];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(j.dump())));
    return std::string(buf);
}

}  // namespace wavefocus
