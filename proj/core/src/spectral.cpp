#include "wavefocus/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef WAVEFOCUS_HAVE_LAPACK
#include <Eigen/Eigenvalues>
#endif

#ifdef WAVEFOCUS_HAVE_LAPACK
extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
}
#endif

namespace wavefocus {

namespace {

// Deterministic gauge: first component with |x| > 1e-12 * max|x| is positive.
void fix_signs(Eigen::MatrixXd& modes) {
    for (int c = 0; c < modes.cols(); ++c) {
        auto col = modes.col(c);
        const double tol = 1e-12 * col.cwiseAbs().maxCoeff();
        for (int i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) > tol) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
    }
}

void dense_eigensolve(Eigen::MatrixXd& A, Eigen::VectorXd& w) {
#ifdef WAVEFOCUS_HAVE_LAPACK
    const int n = static_cast<int>(A.rows());
    w.resize(n);
    int info = 0, lwork = -1, liwork = -1, iwork_query = 0;
    double work_query = 0.0;
    dsyevd_("V", "L", &n, A.data(), &n, w.data(), &work_query, &lwork, &iwork_query,
            &liwork, &info);
    lwork = static_cast<int>(work_query);
    liwork = iwork_query;
    std::vector<double> work(static_cast<std::size_t>(lwork));
    std::vector<int> iwork(static_cast<std::size_t>(liwork));
    dsyevd_("V", "L", &n, A.data(), &n, w.data(), work.data(), &lwork, iwork.data(),
            &liwork, &info);
    if (info != 0)
        throw std::runtime_error("eigensolve: dsyevd failed with info = " + std::to_string(info));
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolve: Eigen SelfAdjointEigenSolver did not converge");
    w = es.eigenvalues();
    A = es.eigenvectors();
#endif
}

}  // namespace

SpectralSolution SpectralSolution::truncated(int k) const {
    if (k < 1 || k > rank())
        throw std::invalid_argument("SpectralSolution::truncated: k out of range");
    SpectralSolution out;
    out.energies = energies.head(k);
    out.modes = modes.leftCols(k);
    out.full_spectrum = (k == n_free());
    return out;
}

SpectralSolution eigensolve(const HamiltonianMatrix& H, int k) {
    const int n = H.size();
    if (n == 0) throw std::invalid_argument("eigensolve: empty Hamiltonian");
    if (k == -1) k = n;
    if (k < 1 || k > n) throw std::invalid_argument("eigensolve: k out of range");

    Eigen::MatrixXd A = Eigen::MatrixXd(H.m);
    Eigen::VectorXd w;
    dense_eigensolve(A, w);  // ascending eigenvalues, eigenvectors in A

    SpectralSolution sol;
    sol.energies = w.head(k);
    sol.modes = A.leftCols(k);
    sol.full_spectrum = (k == n);
    fix_signs(sol.modes);
    return sol;
}

Projection project(const ComplexField& psi0, const SpectralSolution& sol) {
    if (psi0.v.size() != sol.n_free()) throw std::invalid_argument("project: size mismatch");
    Projection p;
    p.coeff = sol.modes.transpose() * psi0.v;
    p.captured_norm = p.coeff.squaredNorm();
    return p;
}

Projection project(const Eigen::VectorXd& psi0_real, const SpectralSolution& sol) {
    if (psi0_real.size() != sol.n_free()) throw std::invalid_argument("project: size mismatch");
    Projection p;
    p.coeff = (sol.modes.transpose() * psi0_real).cast<std::complex<double>>();
    p.captured_norm = p.coeff.squaredNorm();
    return p;
}

ComplexField evolve(const Eigen::VectorXcd& coeff, const SpectralSolution& sol,
                    double elapsed, double hbar) {
    if (coeff.size() != sol.rank()) throw std::invalid_argument("evolve: coefficient size mismatch");
    Eigen::VectorXcd phased(coeff.size());
    for (int n = 0; n < coeff.size(); ++n)
        phased(n) = coeff(n) * std::polar(1.0, -sol.energies(n) * elapsed / hbar);
    ComplexField out;
    out.v = sol.modes * phased;
    out.t = elapsed;
    return out;
}

double eigenpair_residual(const SpectralSolution& sol, const HamiltonianMatrix& H) {
    double worst = 0.0;
    for (int n = 0; n < sol.rank(); ++n) {
        const Eigen::VectorXd r =
            H.m * sol.modes.col(n) - sol.energies(n) * sol.modes.col(n);
        worst = std::max(worst, r.norm() / std::max(1.0, std::abs(sol.energies(n))));
    }
    return worst;
}

}  // namespace wavefocus
