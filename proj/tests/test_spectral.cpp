#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "test_helpers.hpp"
#include "wavefocus/hamiltonian.hpp"
#include "wavefocus/spectral.hpp"

using namespace wavefocus;

namespace {

HamiltonianMatrix diag_hamiltonian(std::initializer_list<double> diag) {
    HamiltonianMatrix H;
    const int n = static_cast<int>(diag.size());
    H.m.resize(n, n);
    int i = 0;
    for (double d : diag) H.m.insert(i, i) = d, ++i;
    H.m.makeCompressed();
    H.potential = Eigen::VectorXd::Zero(n);
    return H;
}

HamiltonianMatrix small_random_H(const GridMaze& m, unsigned seed) {
    const PhysicalParams params(1.0, 1.0, 0.5);
    return build_hamiltonian({testing::random_smooth_field(m, seed, 3.0), 0.0}, m, params);
}

}  // namespace

TEST_CASE("diagonal matrix: sorted energies, unit eigenvectors") {
    const SpectralSolution sol = eigensolve(diag_hamiltonian({3.0, 1.0, 2.0}), 3);
    CHECK(sol.energies(0) == doctest::Approx(1.0));
    CHECK(sol.energies(1) == doctest::Approx(2.0));
    CHECK(sol.energies(2) == doctest::Approx(3.0));
    Eigen::MatrixXd expect(3, 3);
    expect << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    CHECK((sol.modes - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("orthonormality and eigenpair residuals meet the contract") {
    const GridMaze m = testing::random_maze(9, 9, 11);
    const HamiltonianMatrix H = small_random_H(m, 5);
    const SpectralSolution sol = eigensolve(H);
    const Eigen::MatrixXd gram = sol.modes.transpose() * sol.modes;
    CHECK((gram - Eigen::MatrixXd::Identity(sol.rank(), sol.rank())).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK(eigenpair_residual(sol, H) < 1e-8);
    for (int i = 1; i < sol.rank(); ++i) CHECK(sol.energies(i) >= sol.energies(i - 1));
}

TEST_CASE("truncation keeps the lowest modes") {
    const GridMaze m = empty_maze(7, 7);
    const HamiltonianMatrix H = small_random_H(m, 1);
    const SpectralSolution full = eigensolve(H);
    const SpectralSolution k5 = eigensolve(H, 5);
    CHECK((full.energies.head(5) - k5.energies).cwiseAbs().maxCoeff() == 0.0);
    CHECK((full.modes.leftCols(5) - k5.modes).cwiseAbs().maxCoeff() == 0.0);
    CHECK(!k5.full_spectrum);
    CHECK(full.full_spectrum);
}

TEST_CASE("projection of an eigenvector is a coordinate vector") {
    const GridMaze m = empty_maze(6, 6);
    const SpectralSolution sol = eigensolve(small_random_H(m, 2));
    ComplexField psi;
    psi.v = sol.modes.col(3).cast<std::complex<double>>();
    const Projection p = project(psi, sol);
    CHECK(std::abs(p.coeff(3) - 1.0) < 1e-12);
    CHECK(std::abs(p.captured_norm - 1.0) < 1e-12);
    for (int i = 0; i < p.coeff.size(); ++i)
        if (i != 3) CHECK(std::abs(p.coeff(i)) < 1e-12);
}

TEST_CASE("projection orthogonal to the kept modes captures nothing") {
    const GridMaze m = empty_maze(6, 6);
    const SpectralSolution full = eigensolve(small_random_H(m, 8));
    const SpectralSolution k4 = full.truncated(4);
    ComplexField psi;
    psi.v = full.modes.col(10).cast<std::complex<double>>();
    const Projection p = project(psi, k4);
    CHECK(p.captured_norm < 1e-20);
}

TEST_CASE("full-rank projection reconstructs the input") {
    const GridMaze m = testing::random_maze(9, 9, 21);
    const SpectralSolution sol = eigensolve(small_random_H(m, 9));
    Eigen::VectorXcd v = testing::random_smooth_field(m, 31).cast<std::complex<double>>() +
                         std::complex<double>(0, 1) *
                             testing::random_smooth_field(m, 32).cast<std::complex<double>>();
    const Projection p = project(ComplexField{v, 0.0}, sol);
    const Eigen::VectorXcd rec = sol.modes.cast<std::complex<double>>() * p.coeff;
    CHECK((rec - v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("evolution: identity at t0, stationary modes, unitarity") {
    const GridMaze m = empty_maze(8, 8);
    const HamiltonianMatrix H = small_random_H(m, 4);
    const SpectralSolution sol = eigensolve(H, 10);
    const Eigen::VectorXd psi0 = testing::random_smooth_field(m, 41).cwiseAbs();
    const Projection p = project(psi0, sol);

    const ComplexField at0 = evolve(p.coeff, sol, 0.0, 1.0);
    CHECK((at0.v - sol.modes * p.coeff).cwiseAbs().maxCoeff() < 1e-14);

    // Single mode: amplitude static, phase -E t / hbar.
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(10);
    e1(0) = 1.0;
    const double t = 0.37, hbar = 1.3;
    const ComplexField one = evolve(e1, sol, t, hbar);
    for (int i = 0; i < one.v.size(); ++i)
        CHECK(std::abs(one.v(i) - sol.modes(i, 0) * std::polar(1.0, -sol.energies(0) * t / hbar)) <
              1e-13);

    // Norm preserved at every time.
    for (double tt : {0.1, 0.9, 4.2}) {
        const ComplexField psi = evolve(p.coeff, sol, tt, 1.0);
        CHECK(std::abs(psi.v.norm() - std::sqrt(p.captured_norm)) < 1e-12);
    }
}

TEST_CASE("two-mode superposition beats at 2 pi hbar / (E2 - E1)") {
    const GridMaze m = empty_maze(8, 8);
    const SpectralSolution sol = eigensolve(small_random_H(m, 6), 4);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
    c(0) = std::sqrt(0.7);
    c(1) = std::sqrt(0.3);
    const double hbar = 1.0;
    const double period = 2.0 * std::numbers::pi * hbar / (sol.energies(1) - sol.energies(0));
    const ComplexField a = evolve(c, sol, 0.123, hbar);
    const ComplexField b = evolve(c, sol, 0.123 + period, hbar);
    CHECK((a.v.cwiseAbs2() - b.v.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-10);
    // And the density genuinely moves within a period.
    const ComplexField mid = evolve(c, sol, 0.123 + 0.5 * period, hbar);
    CHECK((a.v.cwiseAbs2() - mid.v.cwiseAbs2()).cwiseAbs().maxCoeff() > 1e-4);
}

TEST_CASE("energy expectation is conserved") {
    const GridMaze m = empty_maze(8, 8);
    const HamiltonianMatrix H = small_random_H(m, 14);
    const SpectralSolution sol = eigensolve(H, 12);
    const Projection p = project(testing::random_smooth_field(m, 51).cwiseAbs(), sol);
    double e_ref = 0.0;
    bool first = true;
    for (double t : {0.0, 0.4, 1.7}) {
        const ComplexField psi = evolve(p.coeff, sol, t, 1.0);
        const std::complex<double> e = psi.v.dot(H.m * psi.v);
        CHECK(std::abs(e.imag()) < 1e-10);
        if (first) {
            e_ref = e.real();
            first = false;
        } else {
            CHECK(std::abs(e.real() - e_ref) < 1e-10);
        }
    }
}

TEST_CASE("evolving in two legs equals one leg at full rank") {
    const GridMaze m = testing::random_maze(8, 8, 33);
    const SpectralSolution sol = eigensolve(small_random_H(m, 61));  // full rank
    const Projection p0 = project(testing::random_smooth_field(m, 71).cwiseAbs(), sol);
    const double t1 = 0.3, t2 = 0.85;
    const ComplexField direct = evolve(p0.coeff, sol, t2, 1.0);
    const ComplexField leg1 = evolve(p0.coeff, sol, t1, 1.0);
    const Projection p1 = project(leg1, sol);
    const ComplexField leg2 = evolve(p1.coeff, sol, t2 - t1, 1.0);
    CHECK((direct.v - leg2.v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("deterministic gauge: first significant component positive") {
    const GridMaze m = empty_maze(7, 7);
    const SpectralSolution sol = eigensolve(small_random_H(m, 19));
    for (int c = 0; c < sol.rank(); ++c) {
        const double tol = 1e-12 * sol.modes.col(c).cwiseAbs().maxCoeff();
        for (int i = 0; i < sol.n_free(); ++i) {
            if (std::abs(sol.modes(i, c)) > tol) {
                CHECK(sol.modes(i, c) > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("15 modes of the 51x51 maze are orthonormal") {
    const GridMaze maze = parse_maze(testing::slurp(testing::data_path("maze51.txt")));
    const PhysicalParams params(1.0, 1.0, 0.5);
    const HamiltonianMatrix H =
        build_hamiltonian({Eigen::VectorXd::Zero(maze.n_free()), 0.0}, maze, params);
    const SpectralSolution sol = eigensolve(H, 15);
    REQUIRE(sol.rank() == 15);
    const Eigen::MatrixXd gram = sol.modes.transpose() * sol.modes;
    CHECK((gram - Eigen::MatrixXd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(eigenpair_residual(sol, H) < 1e-8);
}

TEST_CASE("k out of range is rejected") {
    CHECK_THROWS_AS(eigensolve(diag_hamiltonian({1.0, 2.0}), 3), std::invalid_argument);
    CHECK_THROWS_AS(eigensolve(diag_hamiltonian({1.0, 2.0}), 0), std::invalid_argument);
}
