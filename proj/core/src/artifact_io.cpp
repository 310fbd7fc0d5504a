#include "wavefocus/artifact_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wavefocus {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    return in;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    open_out(path) << content;
}

std::string read_text_file(const std::string& path) {
    std::ostringstream ss;
    ss << open_in(path).rdbuf();
    return ss.str();
}

void write_grid_csv(const std::string& path, const GridMaze& maze,
                    const Eigen::VectorXd& free_values) {
    if (free_values.size() != maze.n_free())
        throw std::invalid_argument("write_grid_csv: field size does not match maze");
    std::ofstream out = open_out(path);
    for (int iy = 0; iy < maze.ny(); ++iy) {
        for (int ix = 0; ix < maze.nx(); ++ix) {
            if (ix) out << ',';
            const int fi = maze.free_index(maze.cell(ix, iy));
            if (fi >= 0) out << format_double(free_values(fi));
        }
        out << '\n';
    }
}

Eigen::VectorXd read_grid_csv(const std::string& path, const GridMaze& maze) {
    std::ifstream in = open_in(path);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(maze.n_free());
    std::string line;
    for (int iy = 0; iy < maze.ny(); ++iy) {
        if (!std::getline(in, line))
            throw std::runtime_error("read_grid_csv: truncated file " + path);
        std::stringstream row(line);
        std::string cellv;
        for (int ix = 0; ix < maze.nx(); ++ix) {
            if (!std::getline(row, cellv, ','))
                cellv.clear();
            const int fi = maze.free_index(maze.cell(ix, iy));
            if (fi >= 0) {
                if (cellv.empty())
                    throw std::runtime_error("read_grid_csv: empty entry on a free cell in " + path);
                out(fi) = std::stod(cellv);
            }
        }
    }
    return out;
}

void write_curve_csv(const std::string& path, const LearningCurve& curve) {
    std::ofstream out = open_out(path);
    out << "iteration,metric,grad_norm\n";
    for (std::size_t i = 0; i < curve.metric.size(); ++i)
        out << i << ',' << format_double(curve.metric[i]) << ','
            << format_double(curve.grad_norm[i]) << '\n';
}

LearningCurve read_curve_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    LearningCurve curve;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_curve_csv: empty file " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string iter, metric, gnorm;
        std::getline(row, iter, ',');
        std::getline(row, metric, ',');
        std::getline(row, gnorm, ',');
        curve.metric.push_back(std::stod(metric));
        curve.grad_norm.push_back(std::stod(gnorm));
        curve.seconds.push_back(0.0);
    }
    return curve;
}

void write_checkpoint(const std::string& path_base, const GridMaze& maze,
                      const ScalarField& V, int iteration, double metric,
                      const std::string& config_hash) {
    const Eigen::MatrixXd grid = embed_grid(maze, V.v);
    {
        std::ofstream out = open_out(path_base + ".bin");
        for (int iy = 0; iy < maze.ny(); ++iy)
            for (int ix = 0; ix < maze.nx(); ++ix) {
                const double value = grid(iy, ix);
                out.write(reinterpret_cast<const char*>(&value), sizeof value);
            }
    }
    nlohmann::json side;
    side["iteration"] = iteration;
    side["metric"] = metric;
    side["config_hash"] = config_hash;
    side["nx"] = maze.nx();
    side["ny"] = maze.ny();
    side["layout"] = "row-major float64, walls stored as 0";
    write_text_file(path_base + ".json", side.dump(2) + "\n");
}

ScalarField read_checkpoint(const std::string& path_base, const GridMaze& maze) {
    std::ifstream in = open_in(path_base + ".bin");
    ScalarField V{Eigen::VectorXd::Zero(maze.n_free()), 0.0};
    for (int iy = 0; iy < maze.ny(); ++iy)
        for (int ix = 0; ix < maze.nx(); ++ix) {
            double value = 0.0;
            in.read(reinterpret_cast<char*>(&value), sizeof value);
            if (!in) throw std::runtime_error("read_checkpoint: truncated file " + path_base + ".bin");
            const int fi = maze.free_index(maze.cell(ix, iy));
            if (fi >= 0) V.v(fi) = value;
        }
    return V;
}

void write_wall_mask_csv(const std::string& path, const GridMaze& maze) {
    std::ofstream out = open_out(path);
    for (int iy = 0; iy < maze.ny(); ++iy) {
        for (int ix = 0; ix < maze.nx(); ++ix) {
            if (ix) out << ',';
            out << (maze.is_wall(maze.cell(ix, iy)) ? 1 : 0);
        }
        out << '\n';
    }
}

void write_axis_csv(const std::string& path, const Eigen::VectorXd& coords) {
    std::ofstream out = open_out(path);
    for (int i = 0; i < coords.size(); ++i) out << format_double(coords(i)) << '\n';
}

}  // namespace wavefocus
