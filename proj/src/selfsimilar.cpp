#include "sqglab/selfsimilar.hpp"

#include <cmath>
#include <stdexcept>

namespace sqglab {

using Cplx = std::complex<double>;

void to_selfsimilar(double t, const Eigen::Vector2d& x, double a, double b,
                    double& tau, Eigen::Vector2d& X) {
    if (!(t > 0.0)) throw std::domain_error("to_selfsimilar: t must be positive");
    if (!(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0))
        throw std::domain_error("to_selfsimilar: a, b must lie in (0,1]");
    tau = std::log(t) / (a * b);
    X = x / std::pow(a * b * t, 1.0 / a);
}

void from_selfsimilar(double tau, const Eigen::Vector2d& X, double a, double b,
                      double& t, Eigen::Vector2d& x) {
    if (!(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0))
        throw std::domain_error("from_selfsimilar: a, b must lie in (0,1]");
    t = std::exp(a * b * tau);
    x = X * std::pow(a * b * t, 1.0 / a);
}

double sobolev_scaling(double norm_Theta, double t, const ScalingLaw& law) {
    if (!(t > 0.0)) throw std::domain_error("sobolev_scaling: t must be positive");
    return std::pow(law.a * law.b * t, law.exponent_theta()) * norm_Theta;
}

double force_time_integral(double norm_F, double t, const ScalingLaw& law) {
    const double e = law.exponent_theta();
    if (!(e > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(law.a * law.b * t, e) / (law.a * law.b * e) * norm_F;
}

double default_parameter_a(double alpha, double s, double p) {
    const double margin = alpha + 2.0 / p - s;
    if (!(margin > 0.0))
        throw std::domain_error("default_parameter_a: need s < alpha + 2/p");
    return std::min(1.0, 0.5 * margin);
}

double vishik_force_at(const SmoothVortex& v, double a, double b, double alpha,
                       double R) {
    if (b == 0.0) return 0.0;
    return -b * ((a - alpha) * v.theta(R) + R * v.d_theta(R));
}

RadialField vishik_force(const SmoothVortex& v, double a, double b, double alpha,
                         const RadialGrid& grid) {
    Eigen::VectorXcd vals(grid.nodes.size());
    for (int i = 0; i < grid.nodes.size(); ++i)
        vals[i] = vishik_force_at(v, a, b, alpha, grid.nodes[i]);
    return RadialField(grid, vals);
}

GolovkinForce::GolovkinForce(const SmoothVortex& v, const RadialField& W,
                             Cplx lambda, int n, double a, double b, double alpha)
    : lambda_(lambda), n_(n) {
    // radial profiles on a fine uniform grid covering the mode support
    const double lo = 1e-3;
    const double hi = std::max(W.support_max(), v.support_max()) + 0.3;
    support_max_ = hi;
    const int M = 1400;
    Eigen::VectorXd xs(M), fv(M), g0(M), g2r(M), g2i(M);

    // V_{n,alpha}[W] on the grid; derivative via a spline pass afterwards
    Eigen::VectorXd vnr(M), vni(M);
    for (int i = 0; i < M; ++i) {
        xs[i] = lo + (hi - lo) * i / (M - 1);
        const Cplx vn = apply_V_n_alpha(W, n, alpha, xs[i]);
        vnr[i] = vn.real();
        vni[i] = vn.imag();
    }
    const CubicSpline vr_s(xs, vnr), vi_s(xs, vni);

    for (int i = 0; i < M; ++i) {
        const double R = xs[i];
        fv[i] = vishik_force_at(v, a, b, alpha, R);
        const Cplx vn{vr_s(R), vi_s(R)};
        const Cplx vnp{vr_s.derivative(R), vi_s.derivative(R)};
        const Cplx vel_r = Cplx(0.0, double(n)) * vn / R;  // V_R coefficient
        const Cplx vel_p = -vnp;                           // V_phi coefficient
        const Cplx grad_r = W.derivative(R);
        const Cplx grad_p = Cplx(0.0, double(n)) * W(R) / R;
        const Cplx q2 = vel_r * grad_r + vel_p * grad_p;
        g2r[i] = q2.real();
        g2i[i] = q2.imag();
        g0[i] = (std::conj(vel_r) * grad_r + std::conj(vel_p) * grad_p).real();
    }
    fvishik_ = CubicSpline(xs, fv);
    g0_ = CubicSpline(xs, g0);
    g2re_ = CubicSpline(xs, g2r);
    g2im_ = CubicSpline(xs, g2i);
}

double GolovkinForce::vishik_part(double R) const { return fvishik_(R); }

Cplx GolovkinForce::mode2n_part(double R) const { return {g2re_(R), g2im_(R)}; }

double GolovkinForce::operator()(double R, double phi, double tau) const {
    const double grow = std::exp(2.0 * lambda_.real() * tau);
    const Cplx osc = std::exp(2.0 * lambda_ * tau);
    const Cplx ang = std::exp(Cplx(0.0, 2.0 * n_ * phi));
    return fvishik_(R) + 0.5 * grow * g0_(R) +
           0.5 * (osc * Cplx(g2re_(R), g2im_(R)) * ang).real();
}

}  // namespace sqglab
