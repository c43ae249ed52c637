#pragma once

#include <Eigen/Dense>

#include "sqglab/vortex.hpp"

namespace sqglab {

/// Even mollifier with unit mass and vanishing first and second moments,
/// built from a bump chi on (0,1) as eta = (3 chi + rho chi')/4.
class Mollifier {
  public:
    Mollifier();

    double eta(double rho) const;
    double eta_prime(double rho) const;
    /// int_{-1}^{x} eta
    double cdf(double x) const;
    /// (int eta, int eta rho, int eta rho^2) by quadrature
    Eigen::Vector3d moments() const;
    /// drift of the chi normalization from 1 (failure guard)
    double chi_norm_residual() const;

  private:
    double chi(double t) const;
    double chi_prime(double t) const;

    double chi_norm_;
    Eigen::VectorXd cdf_edges_;   // cell edges on [-1, 1]
    Eigen::VectorXd cdf_values_;  // cumulative integral at the edges
};

/// Mollified zero-mean vortex theta^eps: equals the piecewise profile outside
/// eps-balls of the two interfaces, with eps d_theta(r_j + eps rho) = c_j eta(rho).
class SmoothVortex {
  public:
    SmoothVortex(const AnnularVortex& base, const Mollifier& moll, double eps);

    double theta(double r) const;
    double d_theta(double r) const;

    double eps() const { return eps_; }
    double sigma() const { return base_.sigma; }
    double level_c() const { return base_.c; }
    double c1() const { return -(1.0 + base_.c); }
    double c2() const { return 1.0; }
    const Mollifier& mollifier() const { return *moll_; }

    /// support of d_theta: [sigma-eps, sigma+eps] and [1-eps, 1+eps]
    double support_min() const { return base_.sigma - eps_; }
    double support_max() const { return 1.0 + eps_; }

  private:
    AnnularVortex base_;
    const Mollifier* moll_;
    double eps_;
};

}  // namespace sqglab
