#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sqglab/mollifier.hpp"
#include "sqglab/vortex.hpp"

namespace sqglab {

/// Nystrom discretization of the rescaled interface operators acting on
/// L^2(-1,1)^2: g = (g_1, g_2) sampled at N Gauss-Legendre nodes per copy,
/// integrals taken against eta(rho) d rho.
struct RescaledOperators {
    int n_modes;            // angular frequency n
    double alpha;
    double eps;
    int N;                  // nodes per interval copy
    double r[2];            // interface radii (sigma, 1)
    double c[2];            // interface jumps (-(1+c), 1)
    Eigen::VectorXd rho;    // GL nodes on (-1,1)
    Eigen::VectorXd w_eta;  // eta-weighted quadrature weights, sum normalized to 1

    Eigen::MatrixXcd A_eps;   // full rescaled operator at eps
    Eigen::MatrixXcd A1_eps;  // singular part (annihilates constants exactly)
    Eigen::MatrixXcd A0_eps;  // A_eps - A1_eps
    Eigen::MatrixXcd A0;      // regular part at eps = 0 (acts as the 2x2 A on constants)
    Eigen::MatrixXcd B0;      // (A0_eps - A0)/eps

    // alpha < 1 split
    Eigen::MatrixXcd A1;      // singular part at eps = 0
    // alpha = 1 split: A1_eps = log(eps) A1_log + B1
    Eigen::MatrixXcd A1_log;
    Eigen::MatrixXcd B1;

    /// per-block eta means of a stacked vector
    Eigen::Vector2cd eta_mean(const Eigen::VectorXcd& v) const;
    /// embeds a constant 2-vector as a stacked profile
    Eigen::VectorXcd constant(const Eigen::Vector2cd& mu) const;
};

/// Assembles the operator blocks. The alpha = 1 near-diagonal log kernel is
/// integrated with the log-weighted Gauss rule through a product-integration
/// matrix; the remainder uses the eta-weighted Gauss-Legendre weights.
RescaledOperators assemble_A_eps(const AnnularVortex& v, const Mollifier& moll,
                                 int n, double alpha, double eps, int N);

struct CorrectedEigenpair {
    std::complex<double> z;       // 2x2 eigenvalue
    std::complex<double> z_eps;   // corrected eigenvalue z + eps y
    std::complex<double> y;
    std::complex<double> gamma;
    Eigen::VectorXcd profile;     // g (alpha < 1) or f (alpha = 1)
    Eigen::Vector2cd mu;          // alpha = 1 constant part (gamma h*)
    int iterations = 0;
    double residual = 0.0;            // last fixed-point increment
    double equation_residual = 0.0;   // ||A^eps h^eps - z^eps h^eps|| / ||h^eps||
    bool contracted = false;          // successive-increment ratio < 0.9 past iteration 3
    std::vector<double> increments;
    double eps_used = 0.0;
};

/// Fixed-point correction for 0 <= alpha < 1 (expansion h^eps = h + eps g,
/// z^eps = z + eps y; delta = 0 in the g ansatz).
CorrectedEigenpair solve_fixed_point_sub(const AnnularVortex& v, const Mollifier& moll,
                                         int n, double alpha, double eps, int N,
                                         double tol = 1e-10, int max_iter = 200);

/// Fixed-point correction for alpha = 1 (ansatz g = mu + f/log eps, eta-mean
/// of f pinned to zero).
CorrectedEigenpair solve_fixed_point_sqg(const AnnularVortex& v, const Mollifier& moll,
                                         int n, double eps, int N,
                                         double tol = 1e-10, int max_iter = 200);

/// Spec default: start at 0.05 min(sigma, 1-sigma) and halve until the
/// contraction criterion holds; returns the accepted eps.
double choose_eps(const AnnularVortex& v, const Mollifier& moll, int n, double alpha,
                  int N, int max_halvings = 8);

}  // namespace sqglab
