#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "sqglab/mollifier.hpp"
#include "sqglab/radial_ops.hpp"

namespace sqglab {

/// Parameters of the self-similar coordinates and the Sobolev target space.
/// Validated against 0 < a < min(alpha + 2/p - s, 1 + alpha) and b >= 0.
struct SelfSimilarParams {
    double a = 0.5;
    double b = 0.0;
    double alpha = 0.0;
    int m = 5;          // Sobolev index for the b-cap b < Re(lambda)/(m+3)
    double s = 0.0;     // target regularity
    double p = 2.0;     // target integrability
};

void validate_params(const SelfSimilarParams& q);

/// Radial grid adapted to the vortex: log-spaced nodes below the inner
/// annulus (resolving the power-law/oscillatory region), dense panels on the
/// two interface annuli, moderate elsewhere.
RadialGrid make_eigen_grid(const SmoothVortex& v, int target_nodes,
                           double r_min = 0.05, double r_max = 1.5);

/// Dense discretization of
///   L_b W = b(a-alpha) W + (b R d_R - i m Vphi/R) W
///           - i m d_theta(R) C_alpha V_{m,alpha}[W]/R
/// on the grid: 4th-order upwind-biased differences for the transport term,
/// Nystrom quadrature with diagonal singularity subtraction for the integral.
Eigen::MatrixXcd assemble_Lb(const SmoothVortex& v, const SelfSimilarParams& q,
                             int n_mode, const RadialGrid& grid);

struct RadialEigenSolution {
    bool unstable = false;
    std::complex<double> lambda;
    Eigen::VectorXcd W;
    double residual = 0.0;
    int mode = 0;
    double support_radius = 0.0;   // largest R carrying 1e-3 of max |W|
    double power_law_slope = 0.0;  // fitted d log|W| / d log R below r1/2 (b > 0)
    double power_law_expected = 0.0;
};

/// Leading eigenpair with Re(lambda) above threshold whose eigenvector passes
/// the support filter (negligible mass beyond r2 + 2 eps); "no unstable
/// eigenvalue" is reported through `unstable = false`, not an error.
RadialEigenSolution leading_eigen(const Eigen::MatrixXcd& L, const RadialGrid& grid,
                                  const SmoothVortex& v, const SelfSimilarParams& q,
                                  int n_mode, double halfplane_threshold);

/// Convenience: assemble + solve, with the power-law fit attached for b > 0.
RadialEigenSolution solve_mode(const SmoothVortex& v, const SelfSimilarParams& q,
                               int n_mode, int nodes, double halfplane_threshold);

/// Bisection in b: largest tested b <= b_cap with Re(lambda_b) > Re(lambda_0)/2.
struct BContinuation {
    double b = 0.0;
    RadialEigenSolution sol;
    std::complex<double> lambda0;
};
std::optional<BContinuation> find_unstable_b(const SmoothVortex& v,
                                             SelfSimilarParams q, int n_mode,
                                             int nodes,
                                             std::complex<double> lambda0,
                                             int max_halvings = 6);

/// Transport semigroup check by characteristics of V_b = Vphi e_phi - b X:
/// records ||e^{tau T_b} Theta||_{L^2} on the tau grid together with the
/// flow-map Jacobian determinant from the variational equation.
struct TransportDecay {
    std::vector<double> tau;
    std::vector<double> norm;      // L^2 norm of the transported test field
    std::vector<double> jacobian;  // det D X_b along a reference trajectory
    double fitted_rate = 0.0;      // slope of log ||.|| vs tau
};
TransportDecay transport_contraction_check(const SmoothVortex& v, double alpha,
                                           double b, const std::vector<double>& tau_grid,
                                           int n_sym = 2, double dt = 2e-3);

}  // namespace sqglab
