#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "sqglab/mollifier.hpp"

namespace sqglab {

/// Strictly increasing radial quadrature grid with positive weights,
/// assembled from composite Gauss-Legendre panels.
struct RadialGrid {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Composite GL panels: edges[i] -> edges[i+1] split into cells[i] panels of
/// `order` points each.
RadialGrid make_radial_grid(const std::vector<double>& edges,
                            const std::vector<int>& cells, int order = 8);

/// Natural cubic spline through real samples; zero outside the node range.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
    double operator()(double t) const;
    double derivative(double t) const;

  private:
    Eigen::VectorXd x_, y_, m_;  // m_: second derivatives
};

/// Complex radial samples with cubic interpolation; compactly supported.
class RadialField {
  public:
    RadialField() = default;
    RadialField(RadialGrid grid, Eigen::VectorXcd values);

    std::complex<double> operator()(double R) const;
    std::complex<double> derivative(double R) const;
    const RadialGrid& grid() const { return grid_; }
    const Eigen::VectorXcd& values() const { return values_; }
    double support_min() const { return grid_.nodes[0]; }
    double support_max() const { return grid_.nodes[grid_.nodes.size() - 1]; }

  private:
    RadialGrid grid_;
    Eigen::VectorXcd values_;
    CubicSpline re_, im_;
};

using RadialFn = std::function<std::complex<double>(double)>;

/// V_{n,alpha}[f](R) = C_alpha int I_{n,alpha}(R/S) f(S) S^{1-alpha} dS over
/// the support [s_lo, s_hi] of f. Uses the substitution S = R/T with panels
/// split at T = 1; the alpha = 1 log singularity at S = R is subtracted and
/// integrated against the log-weighted rule.
std::complex<double> apply_V_n_alpha(const RadialFn& f, double s_lo, double s_hi,
                                     int n, double alpha, double R);
std::complex<double> apply_V_n_alpha(const RadialField& f, int n, double alpha,
                                     double R);

/// Angular velocity of a vortex: V_phi = -V_{1,alpha}[d_R theta].
double vortex_velocity_at(const SmoothVortex& v, double alpha, double R);
RadialField vortex_velocity(const SmoothVortex& v, double alpha,
                            const RadialGrid& out_grid);

/// Near-origin limit C of V_phi(R)/R: C = -C_alpha pi int d_theta(S) S^{-alpha} dS.
double vphi_over_r_origin(const SmoothVortex& v, double alpha);

/// Radial velocity coefficient of a purely n-fold mode:
/// V_R = i n V_{n,alpha}[W_n](R)/R (angular factor carried by the caller).
std::complex<double> radial_velocity_mode(const RadialField& W, int n, double alpha,
                                          double R);

}  // namespace sqglab
