#include <doctest.h>

#include "test_helpers.hpp"
#include "wavefocus/problem.hpp"

using namespace wavefocus;

TEST_CASE("noise covariance is tied to the cost weights exactly") {
    const PhysicalParams p(1.0, 1.0, 0.5);
    CHECK(p.nu() == 2.0);  // lambda / m with C = I, bitwise
    CHECK(p.noise_cov()(0, 0) == 2.0);
    CHECK(p.noise_cov()(1, 1) == 2.0);
    CHECK(p.noise_cov()(0, 1) == 0.0);

    CHECK_THROWS_AS(PhysicalParams(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PhysicalParams(1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PhysicalParams(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("initial density: unit mass, peak at start, zero on walls") {
    const GridMaze m = empty_maze(51, 51);
    const ScalarField mu0 = default_initial_density(m, 2.0 * m.h1());
    CHECK(mu0.v.sum() == doctest::Approx(1.0).epsilon(1e-12));
    int argmax = -1;
    mu0.v.maxCoeff(&argmax);
    CHECK(m.free_cell(argmax) == m.start_cell());
    CHECK(mu0.v.minCoeff() >= 0.0);

    // Very wide density approaches uniform over free cells.
    const ScalarField wide = default_initial_density(m, 1000.0);
    CHECK(wide.v.maxCoeff() / wide.v.minCoeff() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("density is only supported on free cells next to walls") {
    const GridMaze m = parse_maze("S#.\n...\n..G\n");
    const ScalarField mu0 = default_initial_density(m, 3.0 * m.h1());
    // Embedding puts exact zeros on the wall cell.
    const Eigen::MatrixXd grid = embed_grid(m, mu0.v);
    CHECK(grid(0, 1) == 0.0);
    CHECK(mu0.v.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("target: unit L2 norm, peak at goal, delta in the narrow limit") {
    const GridMaze m = empty_maze(21, 21);
    const ScalarField tgt = default_target(m, 1.5 * m.h1());
    CHECK(tgt.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    int argmax = -1;
    tgt.v.maxCoeff(&argmax);
    CHECK(m.free_cell(argmax) == m.goal_cell());

    // sigma -> 0 limit: indicator of the goal cell.
    const ScalarField narrow = default_target(m, 1e-3 * m.h1());
    CHECK(narrow.v(m.free_index(m.goal_cell())) == doctest::Approx(1.0));
    CHECK(narrow.v.norm() == doctest::Approx(1.0));
}

TEST_CASE("degenerate widths are rejected") {
    const GridMaze m = empty_maze(9, 9);
    CHECK_THROWS_AS(default_initial_density(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(default_target(m, -1.0), std::invalid_argument);
}

TEST_CASE("problem constructor checks invariants") {
    GridMaze m = empty_maze(9, 9);
    const PhysicalParams p(1.0, 1.0, 0.5);
    ScalarField mu0 = default_initial_density(m, 2 * m.h1());
    ScalarField tgt = default_target(m, 1.5 * m.h1());

    CHECK_THROWS_AS(ControlProblem(m, p, 0.5, 0.5, mu0, tgt), std::invalid_argument);

    ScalarField bad_mass = mu0;
    bad_mass.v *= 2.0;
    CHECK_THROWS_AS(ControlProblem(m, p, 0.0, 1.0, bad_mass, tgt), std::invalid_argument);

    ScalarField bad_norm = tgt;
    bad_norm.v *= 0.7;
    CHECK_THROWS_AS(ControlProblem(m, p, 0.0, 1.0, mu0, bad_norm), std::invalid_argument);
}
