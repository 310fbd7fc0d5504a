#pragma once

#include <Eigen/Core>

#include "wavefocus/fields.hpp"
#include "wavefocus/hamiltonian.hpp"

namespace wavefocus {

/**
 * Low-lying eigenpairs of a Hamiltonian. Energies are sorted ascending and
 * eigenvectors are orthonormal with a deterministic gauge: the first
 * component of each mode whose magnitude exceeds 1e-12 times the mode's
 * max-norm is made positive.
 */
struct SpectralSolution {
    Eigen::VectorXd energies;   // rank entries, ascending
    Eigen::MatrixXd modes;      // n_free x rank, orthonormal columns
    bool full_spectrum = false; // rank == n_free

    int rank() const { return static_cast<int>(energies.size()); }
    int n_free() const { return static_cast<int>(modes.rows()); }

    /// View truncated to the k lowest modes (copies; k <= rank).
    SpectralSolution truncated(int k) const;
};

/**
 * Dense symmetric eigensolve of H keeping the k smallest eigenpairs
 * (k == -1 or k == n keeps everything). Backed by LAPACK dsyevd when
 * available, Eigen's SelfAdjointEigenSolver otherwise; both are
 * deterministic for identical inputs. Throws std::runtime_error with the
 * solver status on non-convergence.
 */
SpectralSolution eigensolve(const HamiltonianMatrix& H, int k = -1);

struct Projection {
    Eigen::VectorXcd coeff;
    double captured_norm = 0.0;  // sum |c_n|^2
};

/// Coefficients c_n = <phi_n, psi0> plus the norm fraction captured by the
/// truncated basis.
Projection project(const ComplexField& psi0, const SpectralSolution& sol);
Projection project(const Eigen::VectorXd& psi0_real, const SpectralSolution& sol);

/// psi(t) = sum_n c_n exp(-i E_n elapsed / hbar) phi_n.
ComplexField evolve(const Eigen::VectorXcd& coeff, const SpectralSolution& sol,
                    double elapsed, double hbar);

/// Max residual ||H phi - E phi|| / max(1, |E|) over all modes (diagnostic).
double eigenpair_residual(const SpectralSolution& sol, const HamiltonianMatrix& H);

}  // namespace wavefocus
