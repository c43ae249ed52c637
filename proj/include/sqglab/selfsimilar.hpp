#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sqglab/mollifier.hpp"
#include "sqglab/radial_ops.hpp"

namespace sqglab {

/// Sobolev scaling exponents of the self-similar change of variables.
struct ScalingLaw {
    double alpha = 0.0;
    double a = 0.5;
    double b = 0.1;
    double s = 0.0;
    double p = 2.0;

    double exponent_theta() const { return (alpha + 2.0 / p - s) / a - 1.0; }
    double exponent_f() const { return (alpha + 2.0 / p - s) / a - 2.0; }
    /// the force time-integral is finite on (0, T] iff exponent_theta > 0
    bool force_integrable() const { return exponent_theta() > 0.0; }
};

/// (t, x) -> (tau, X): tau = log(t)/(ab), X = x/(abt)^{1/a}.
void to_selfsimilar(double t, const Eigen::Vector2d& x, double a, double b,
                    double& tau, Eigen::Vector2d& X);
void from_selfsimilar(double tau, const Eigen::Vector2d& X, double a, double b,
                      double& t, Eigen::Vector2d& x);

/// ||theta(t)|| = (abt)^{exponent_theta} ||Theta(tau)||.
double sobolev_scaling(double norm_Theta, double t, const ScalingLaw& law);

/// int_0^t ||f(t')|| dt' = (abt)^{e} / (ab e) ||F||, e = exponent_theta.
double force_time_integral(double norm_F, double t, const ScalingLaw& law);

/// Default parameter picker: a = 0.5 (alpha + 2/p - s), clamped to (0, 1].
double default_parameter_a(double alpha, double s, double p);

/// Vishik force F = -b((a - alpha) + R d_R) theta; radial, zero when b = 0.
double vishik_force_at(const SmoothVortex& v, double a, double b, double alpha,
                       double R);
RadialField vishik_force(const SmoothVortex& v, double a, double b, double alpha,
                         const RadialGrid& grid);

/// Golovkin force G = F + V_lin . grad Theta_lin for Theta_lin = Re(e^{lt} W).
/// The quadratic term carries angular modes {0, +-2n} only:
///   G(R, phi, tau) = F(R) + (1/2) e^{2 Re(l) tau} G0(R)
///                    + (1/2) Re(e^{2 l tau} G2(R) e^{2 i n phi}),
/// with G0, G2 built from the mode velocity (V_R, V_phi) and grad W.
class GolovkinForce {
  public:
    GolovkinForce(const SmoothVortex& v, const RadialField& W,
                  std::complex<double> lambda, int n, double a, double b,
                  double alpha);

    double operator()(double R, double phi, double tau) const;
    double vishik_part(double R) const;
    double radial_part(double R) const { return g0_(R); }          // G0
    std::complex<double> mode2n_part(double R) const;              // G2
    std::complex<double> lambda() const { return lambda_; }
    int n() const { return n_; }
    double support_max() const { return support_max_; }

  private:
    std::complex<double> lambda_;
    int n_;
    double support_max_;
    CubicSpline fvishik_, g0_, g2re_, g2im_;
};

}  // namespace sqglab
