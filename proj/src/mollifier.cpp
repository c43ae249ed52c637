#include "sqglab/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "sqglab/quadrature.hpp"

namespace sqglab {
namespace {
constexpr int kCdfCells = 4096;

double chi_raw(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}
}  // namespace

Mollifier::Mollifier() {
    chi_norm_ = gk_adaptive([](double t) { return chi_raw(t); }, 0.0, 1.0, 1e-15, 1e-14).value;
    if (std::abs(chi_norm_) < 1e-8)
        throw std::runtime_error("Mollifier: chi normalization failed");

    cdf_edges_.resize(kCdfCells + 1);
    cdf_values_.resize(kCdfCells + 1);
    Eigen::VectorXd xg, wg;
    gauss_legendre(7, xg, wg);
    cdf_values_[0] = 0.0;
    for (int i = 0; i <= kCdfCells; ++i)
        cdf_edges_[i] = -1.0 + 2.0 * i / kCdfCells;
    for (int i = 0; i < kCdfCells; ++i) {
        const double a = cdf_edges_[i], b = cdf_edges_[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int q = 0; q < xg.size(); ++q) acc += wg[q] * eta(mid + half * xg[q]);
        cdf_values_[i + 1] = cdf_values_[i] + half * acc;
    }
}

double Mollifier::chi(double t) const { return chi_raw(t) / chi_norm_; }

double Mollifier::chi_prime(double t) const {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double u = t * (1.0 - t);
    return chi(t) * (1.0 - 2.0 * t) / (u * u);
}

double Mollifier::eta(double rho) const {
    const double r = std::abs(rho);
    if (r >= 1.0) return 0.0;
    return 0.25 * (3.0 * chi(r) + r * chi_prime(r));
}

double Mollifier::eta_prime(double rho) const {
    const double h = 1e-6;
    return (eta(rho + h) - eta(rho - h)) / (2.0 * h);
}

double Mollifier::cdf(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return cdf_values_[kCdfCells];
    const int i = std::min(kCdfCells - 1, int((x + 1.0) / 2.0 * kCdfCells));
    const double a = cdf_edges_[i];
    // finish the partial cell with a small Gauss rule: no interpolation error
    Eigen::VectorXd xg, wg;
    gauss_legendre(7, xg, wg);
    const double mid = 0.5 * (a + x), half = 0.5 * (x - a);
    double acc = 0.0;
    for (int q = 0; q < xg.size(); ++q) acc += wg[q] * eta(mid + half * xg[q]);
    return cdf_values_[i] + half * acc;
}

Eigen::Vector3d Mollifier::moments() const {
    Eigen::Vector3d m;
    for (int p = 0; p < 3; ++p) {
        m[p] = gk_adaptive([this, p](double r) { return eta(r) * std::pow(r, p); },
                           -1.0, 1.0, 1e-14, 1e-13).value;
    }
    return m;
}

double Mollifier::chi_norm_residual() const {
    const double z = gk_adaptive([this](double t) { return chi(t); }, 0.0, 1.0,
                                 1e-15, 1e-14).value;
    return std::abs(z - 1.0);
}

SmoothVortex::SmoothVortex(const AnnularVortex& base, const Mollifier& moll, double eps)
    : base_(base), moll_(&moll), eps_(eps) {
    const double cap = std::min(base.sigma, 1.0 - base.sigma) / 3.0;
    if (!(eps > 0.0 && eps < cap))
        throw std::domain_error("SmoothVortex: eps must lie in (0, min(r1, r2-r1)/3)");
}

double SmoothVortex::theta(double r) const {
    return base_.c + c1() * moll_->cdf((r - base_.sigma) / eps_) +
           c2() * moll_->cdf((r - 1.0) / eps_);
}

double SmoothVortex::d_theta(double r) const {
    return c1() / eps_ * moll_->eta((r - base_.sigma) / eps_) +
           c2() / eps_ * moll_->eta((r - 1.0) / eps_);
}

}  // namespace sqglab
