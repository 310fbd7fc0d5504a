#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "wavefocus/maze.hpp"

using namespace wavefocus;

TEST_CASE("3x3 maze parses with the documented cell layout") {
    const GridMaze m = parse_maze("S.#\n...\n#.G\n");
    CHECK(m.nx() == 3);
    CHECK(m.ny() == 3);
    CHECK(m.start_cell() == m.cell(0, 0));
    CHECK(m.goal_cell() == m.cell(2, 2));
    CHECK(m.is_wall(m.cell(2, 0)));
    CHECK(m.is_wall(m.cell(0, 2)));
    CHECK(m.n_free() == 7);
}

TEST_CASE("all-free maze has no walls") {
    const GridMaze m = parse_maze("S..\n...\n..G\n");
    for (int c = 0; c < m.n_cells(); ++c) CHECK(!m.is_wall(c));
}

TEST_CASE("malformed mazes are rejected") {
    CHECK_THROWS_AS(parse_maze("S.\n...\n.G\n"), std::invalid_argument);   // ragged
    CHECK_THROWS_AS(parse_maze("..\n.G\n"), std::invalid_argument);        // no start
    CHECK_THROWS_AS(parse_maze("S.\n..\n"), std::invalid_argument);        // no goal
    CHECK_THROWS_AS(parse_maze("SS\n.G\n"), std::invalid_argument);        // two starts
    CHECK_THROWS_AS(parse_maze("S#\n#G\n"), std::invalid_argument);        // disconnected
    CHECK_THROWS_AS(parse_maze("S.x\n..G\n"), std::invalid_argument);      // bad char
}

TEST_CASE("parse then render is the identity") {
    const std::string text = "S.#..\n.....\n##.#.\n....G\n";
    CHECK(render_maze(parse_maze(text)) == text);

    // Property over random connected mazes.
    for (unsigned seed = 0; seed < 20; ++seed) {
        const GridMaze m = testing::random_maze(7, 6, seed);
        const std::string r = render_maze(m);
        const GridMaze m2 = parse_maze(r);
        CHECK(render_maze(m2) == r);
        CHECK(m2.start_cell() == m.start_cell());
        CHECK(m2.goal_cell() == m.goal_cell());
    }
}

TEST_CASE("grid geometry: spacing and positions") {
    const GridMaze m = empty_maze(51, 51);
    CHECK(m.h1() == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(m.h2() == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(m.x1(0) == -1.0);
    CHECK(m.x1(50) == doctest::Approx(1.0));
    CHECK(m.cell_at(-1.0, -1.0) == m.cell(0, 0));
    CHECK(m.cell_at(0.011, 0.011) == m.cell(25, 25));  // nearest node
    CHECK(m.cell_at(1.5, 0.0) == -1);                  // outside extent
}

TEST_CASE("paper-scale maze asset is valid with h = 0.04") {
    const GridMaze m = parse_maze(testing::slurp(testing::data_path("maze51.txt")));
    CHECK(m.nx() == 51);
    CHECK(m.ny() == 51);
    CHECK(m.h1() == doctest::Approx(0.04).epsilon(1e-12));
    // Border is fully walled.
    for (int i = 0; i < 51; ++i) {
        CHECK(m.is_wall(m.cell(i, 0)));
        CHECK(m.is_wall(m.cell(i, 50)));
        CHECK(m.is_wall(m.cell(0, i)));
        CHECK(m.is_wall(m.cell(50, i)));
    }
}
