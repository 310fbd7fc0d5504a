#include "wavefocus/marchenko.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

namespace wavefocus {

namespace {

using Complex = std::complex<double>;

// Entire functions of s = k^2 - V: cos(q h) and sin(q h)/q with q = sqrt(s).
// Real for both propagating (s > 0) and evanescent (s < 0) cells.
void propagation_entries(double s, double h, double& c, double& sn) {
    if (s > 0.0) {
        const double q = std::sqrt(s);
        c = std::cos(q * h);
        sn = std::sin(q * h) / q;
    } else if (s < 0.0) {
        const double q = std::sqrt(-s);
        c = std::cosh(q * h);
        sn = std::sinh(q * h) / q;
    } else {
        c = 1.0;
        sn = h;
    }
}

}  // namespace

double MarchenkoKernel::at(double arg) const {
    const long idx = std::lround((arg - tau0) / dtau);
    if (idx < 0 || idx >= values.size()) return 0.0;
    return values(idx);
}

CausalKernel solve_marchenko(const MarchenkoKernel& kernel, const Eigen::VectorXd& x_grid) {
    const int n = static_cast<int>(x_grid.size());
    if (n < 2) throw std::invalid_argument("solve_marchenko: grid too small");
    const double h = x_grid(1) - x_grid(0);
    for (int i = 1; i < n; ++i)
        if (std::abs((x_grid(i) - x_grid(i - 1)) - h) > 1e-9 * std::abs(h))
            throw std::invalid_argument("solve_marchenko: grid must be uniform");
    if (std::abs(kernel.dtau - h) > 1e-9 * std::abs(h))
        throw std::invalid_argument("solve_marchenko: kernel spacing must match the grid");

    CausalKernel out;
    out.grid = x_grid;
    out.omega = Eigen::MatrixXd::Zero(n, n);

    // For each x, unknowns live on tau = grid[0..j]; trapezoid weights over
    // the truncated integral (the kernel must have decayed below grid[0]).
    for (int j = 0; j < n; ++j) {
        const int m = j + 1;
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd rhs(m);
        for (int i = 0; i < m; ++i) {
            rhs(i) = -kernel.at(x_grid(j) + x_grid(i));
            for (int l = 0; l < m; ++l) {
                const double w = (l == 0 || l == m - 1) ? 0.5 * h : h;
                A(i, l) += w * kernel.at(x_grid(i) + x_grid(l));
            }
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        const Eigen::VectorXd omega_col = lu.solve(rhs);
        const double resid = (A * omega_col - rhs).norm();
        const double scale = std::max(rhs.norm(), 1e-300);
        if (!omega_col.allFinite() || resid > 1e-8 * std::max(1.0, scale))
            throw std::runtime_error(
                "solve_marchenko: singular system at x = " + std::to_string(x_grid(j)) +
                " (residual " + std::to_string(resid) + ")");
        out.omega.col(j).head(m) = omega_col;
    }
    return out;
}

Eigen::VectorXd potential_from_kernel(const CausalKernel& omega) {
    const int n = static_cast<int>(omega.grid.size());
    if (n < 3) throw std::invalid_argument("potential_from_kernel: need at least 3 samples");
    const double h = omega.grid(1) - omega.grid(0);
    const Eigen::VectorXd d = omega.diagonal();
    Eigen::VectorXd V(n);
    V(0) = 2.0 * (d(1) - d(0)) / h;
    for (int i = 1; i + 1 < n; ++i) V(i) = 2.0 * (d(i + 1) - d(i - 1)) / (2.0 * h);
    V(n - 1) = 2.0 * (d(n - 1) - d(n - 2)) / h;
    return V;
}

int count_bound_states(const Eigen::VectorXd& x_grid, const Eigen::VectorXd& V) {
    const int n = static_cast<int>(x_grid.size());
    const double h = x_grid(1) - x_grid(0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        H(i, i) = 2.0 / (h * h) + V(i);
        if (i + 1 < n) H(i, i + 1) = H(i + 1, i) = -1.0 / (h * h);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) < -1e-8) ++count;
    return count;
}

Eigen::VectorXcd reflection_coefficient(const Eigen::VectorXd& x_grid,
                                        const Eigen::VectorXd& V,
                                        const Eigen::VectorXd& k_grid) {
    const int n = static_cast<int>(x_grid.size());
    if (n < 2) throw std::invalid_argument("reflection_coefficient: grid too small");
    const double h = x_grid(1) - x_grid(0);
    const int bs = count_bound_states(x_grid, V);
    if (bs > 0) throw BoundStateError(bs);

    const double x_left = x_grid(0) - 0.5 * h;
    const double x_right = x_grid(n - 1) + 0.5 * h;
    const Complex iu(0.0, 1.0);

    Eigen::VectorXcd r(k_grid.size());
    for (int ki = 0; ki < k_grid.size(); ++ki) {
        const double k = k_grid(ki);
        if (!(k > 0.0))
            throw std::invalid_argument("reflection_coefficient: wavenumbers must be positive");
        // Pure transmitted wave at the right edge, integrated backward.
        Complex psi = std::exp(iu * k * x_right);
        Complex dpsi = iu * k * psi;
        for (int ci = n - 1; ci >= 0; --ci) {
            double c, sn;
            propagation_entries(k * k - V(ci), h, c, sn);
            // Inverse of the forward step across one cell of constant V.
            const Complex psi_new = c * psi - sn * dpsi;
            const Complex dpsi_new = (k * k - V(ci)) * sn * psi + c * dpsi;
            psi = psi_new;
            dpsi = dpsi_new;
        }
        const Complex a = 0.5 * std::exp(-iu * k * x_left) * (psi + dpsi / (iu * k));
        const Complex b = 0.5 * std::exp(iu * k * x_left) * (psi - dpsi / (iu * k));
        r(ki) = b / a;
    }
    return r;
}

MarchenkoKernel kernel_from_reflection(const Eigen::VectorXcd& r,
                                       const Eigen::VectorXd& k_grid, double xi_min,
                                       double dxi, int n_samples) {
    if (r.size() != k_grid.size())
        throw std::invalid_argument("kernel_from_reflection: r and k sizes differ");
    MarchenkoKernel kern;
    kern.tau0 = xi_min;
    kern.dtau = dxi;
    kern.values.resize(n_samples);
    const Complex iu(0.0, 1.0);
    for (int s = 0; s < n_samples; ++s) {
        const double xi = xi_min + s * dxi;
        double acc = 0.0;
        for (int ki = 0; ki + 1 < k_grid.size(); ++ki) {
            const double dk = k_grid(ki + 1) - k_grid(ki);
            const double f0 = std::real(r(ki) * std::exp(-iu * k_grid(ki) * xi));
            const double f1 = std::real(r(ki + 1) * std::exp(-iu * k_grid(ki + 1) * xi));
            acc += 0.5 * dk * (f0 + f1);
        }
        kern.values(s) = acc / std::numbers::pi;
    }
    return kern;
}

MarchenkoKernel bound_state_kernel(double kappa, double x0, double tau_min, double dtau,
                                   int n_samples) {
    if (!(kappa > 0.0)) throw std::invalid_argument("bound_state_kernel: kappa must be positive");
    const double c = 2.0 * kappa * std::exp(-2.0 * kappa * x0);
    MarchenkoKernel kern;
    kern.tau0 = tau_min;
    kern.dtau = dtau;
    kern.values.resize(n_samples);
    for (int s = 0; s < n_samples; ++s)
        kern.values(s) = c * std::exp(kappa * (tau_min + s * dtau));
    return kern;
}

double bound_state_omega(double kappa, double x0, double tau, double x) {
    if (tau > x) return 0.0;
    const double c = 2.0 * kappa * std::exp(-2.0 * kappa * x0);
    return -c * std::exp(kappa * (x + tau)) / (1.0 + c / (2.0 * kappa) * std::exp(2.0 * kappa * x));
}

}  // namespace wavefocus
