#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "wavefocus/fields.hpp"

namespace wavefocus {

/**
 * One-dimensional inverse scattering for -psi'' + V psi = k^2 psi, used as an
 * independent oracle for the focusing solver. The integral equation solved is
 * the left-incidence form
 *
 *   Omega(tau; x) + Gamma(x + tau)
 *     + int_{-inf}^{x} Gamma(tau + tau') Omega(tau'; x) dtau' = 0,  tau <= x,
 *
 * with Omega == 0 for tau > x, and V(x) = 2 d/dx Omega(x, x). Gamma is the
 * Fourier transform of the left reflection coefficient (no bound states), or
 * the analytic single-bound-state kernel c * exp(kappa tau) for the soliton
 * oracle; either way it must be decayed at the sampled boundary.
 */
struct MarchenkoKernel {
    double tau0 = 0.0;   // argument of the first sample
    double dtau = 0.0;   // uniform spacing
    Eigen::VectorXd values;

    /// Sampled value at the nearest grid argument; zero outside the samples.
    double at(double arg) const;
};

/// Triangular solution Omega(tau_i; x_j), stored dense with exact zeros for
/// tau > x. Row index = tau on the shared grid, column index = x.
struct CausalKernel {
    Eigen::VectorXd grid;   // shared tau / x grid, uniform
    Eigen::MatrixXd omega;  // grid.size() x grid.size(), zero above the diagonal band

    Eigen::VectorXd diagonal() const { return omega.diagonal(); }
};

/// Raised when the forward reflection path meets a potential with bound
/// states; the implemented inversion assumes there are none.
class BoundStateError : public std::runtime_error {
public:
    explicit BoundStateError(int count)
        : std::runtime_error("reflection_coefficient: potential has " + std::to_string(count) +
                             " bound state(s); the no-bound-state inversion does not apply"),
          bound_states(count) {}
    int bound_states;
};

/**
 * Nystrom discretization with trapezoid weights on the shared grid; one dense
 * solve per x. Requires kernel.dtau to match the grid spacing. Throws
 * std::runtime_error with the residual if a per-x system is numerically
 * singular.
 */
CausalKernel solve_marchenko(const MarchenkoKernel& kernel, const Eigen::VectorXd& x_grid);

/// V(x) = 2 d/dx Omega(x, x), central differences (one-sided at the ends).
/// Requires at least 3 grid points.
Eigen::VectorXd potential_from_kernel(const CausalKernel& omega);

/**
 * Left reflection coefficient r(k) of a compactly supported sampled
 * potential, by piecewise-constant transfer matrices: integrate a pure
 * transmitted wave backward from the right edge and decompose at the left
 * edge. Throws BoundStateError if the potential binds.
 */
Eigen::VectorXcd reflection_coefficient(const Eigen::VectorXd& x_grid,
                                        const Eigen::VectorXd& V,
                                        const Eigen::VectorXd& k_grid);

/// Number of negative eigenvalues of -d^2/dx^2 + V on the grid (Dirichlet).
int count_bound_states(const Eigen::VectorXd& x_grid, const Eigen::VectorXd& V);

/**
 * Kernel samples Gamma(xi) = (1/pi) int_0^kmax Re[r(k) exp(-i k xi)] dk by
 * trapezoid quadrature, on a uniform xi grid covering [2*x_min, 2*x_max].
 */
MarchenkoKernel kernel_from_reflection(const Eigen::VectorXcd& r,
                                       const Eigen::VectorXd& k_grid, double xi_min,
                                       double dxi, int n_samples);

/// Analytic kernel of one bound state at decay rate kappa whose
/// reconstructed potential is the soliton -2 kappa^2 sech^2(kappa (x - x0)).
MarchenkoKernel bound_state_kernel(double kappa, double x0, double tau_min, double dtau,
                                   int n_samples);

/// Closed form of the causal kernel for bound_state_kernel (for oracles):
/// Omega(tau; x) = -c e^{kappa (x + tau)} / (1 + (c / 2 kappa) e^{2 kappa x}).
double bound_state_omega(double kappa, double x0, double tau, double x);

}  // namespace wavefocus
