#include "sqglab/radial_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqglab/kernels.hpp"
#include "sqglab/quadrature.hpp"
#include "sqglab/special.hpp"

namespace sqglab {

RadialGrid make_radial_grid(const std::vector<double>& edges,
                            const std::vector<int>& cells, int order) {
    if (edges.size() < 2 || cells.size() != edges.size() - 1)
        throw std::invalid_argument("make_radial_grid: edges/cells mismatch");
    std::vector<double> xs, ws;
    Eigen::VectorXd xg, wg;
    gauss_legendre(order, xg, wg);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double a = edges[s], b = edges[s + 1];
        if (!(b > a)) throw std::invalid_argument("make_radial_grid: edges not increasing");
        for (int c = 0; c < cells[s]; ++c) {
            const double ca = a + (b - a) * c / cells[s];
            const double cb = a + (b - a) * (c + 1) / cells[s];
            const double mid = 0.5 * (ca + cb), half = 0.5 * (cb - ca);
            for (int q = 0; q < order; ++q) {
                xs.push_back(mid + half * xg[q]);
                ws.push_back(half * wg[q]);
            }
        }
    }
    RadialGrid g;
    g.nodes = Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size());
    g.weights = Eigen::Map<Eigen::VectorXd>(ws.data(), ws.size());
    return g;
}

CubicSpline::CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
    : x_(x), y_(y) {
    const int n = x.size();
    m_ = Eigen::VectorXd::Zero(n);
    if (n < 3) return;
    Eigen::VectorXd a(n), b(n), c(n), d(n);
    a[0] = 0;
    b[0] = 1;
    c[0] = 0;
    d[0] = 0;
    for (int i = 1; i < n - 1; ++i) {
        const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        a[i] = h0 / 6.0;
        b[i] = (h0 + h1) / 3.0;
        c[i] = h1 / 6.0;
        d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    a[n - 1] = 0;
    b[n - 1] = 1;
    c[n - 1] = 0;
    d[n - 1] = 0;
    // Thomas algorithm
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::operator()(double t) const {
    const int n = x_.size();
    if (n == 0 || t < x_[0] || t > x_[n - 1]) return 0.0;
    int lo = std::upper_bound(x_.data(), x_.data() + n, t) - x_.data() - 1;
    lo = std::clamp(lo, 0, n - 2);
    const double h = x_[lo + 1] - x_[lo];
    const double A = (x_[lo + 1] - t) / h, B = (t - x_[lo]) / h;
    return A * y_[lo] + B * y_[lo + 1] +
           ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[lo + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
    const int n = x_.size();
    if (n == 0 || t < x_[0] || t > x_[n - 1]) return 0.0;
    int lo = std::upper_bound(x_.data(), x_.data() + n, t) - x_.data() - 1;
    lo = std::clamp(lo, 0, n - 2);
    const double h = x_[lo + 1] - x_[lo];
    const double A = (x_[lo + 1] - t) / h, B = (t - x_[lo]) / h;
    return (y_[lo + 1] - y_[lo]) / h +
           (-(3.0 * A * A - 1.0) * m_[lo] + (3.0 * B * B - 1.0) * m_[lo + 1]) * h / 6.0;
}

RadialField::RadialField(RadialGrid grid, Eigen::VectorXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.nodes.size() != values_.size())
        throw std::invalid_argument("RadialField: size mismatch");
    re_ = CubicSpline(grid_.nodes, values_.real());
    im_ = CubicSpline(grid_.nodes, values_.imag());
}

std::complex<double> RadialField::operator()(double R) const {
    return {re_(R), im_(R)};
}

std::complex<double> RadialField::derivative(double R) const {
    return {re_.derivative(R), im_.derivative(R)};
}

namespace {

using Cplx = std::complex<double>;

Cplx gk_complex_panels(const std::function<Cplx(double)>& f,
                       const std::vector<double>& edges, double tol = 1e-11) {
    const QuadResult re = gk_adaptive_panels(
        [&](double x) { return f(x).real(); }, edges, tol, 1e-9);
    const QuadResult im = gk_adaptive_panels(
        [&](double x) { return f(x).imag(); }, edges, tol, 1e-9);
    return {re.value, im.value};
}

std::vector<double> t_panel_edges(double t_lo, double t_hi) {
    std::vector<double> e{t_lo, t_hi};
    for (double s : {0.5, 0.9, 0.99, 1.0, 1.01, 1.1, 2.0})
        if (s > t_lo && s < t_hi) e.push_back(s);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

}  // namespace

std::complex<double> apply_V_n_alpha(const RadialFn& f, double s_lo, double s_hi,
                                     int n, double alpha, double R) {
    if (!(alpha >= 0.0 && alpha < 2.0))
        throw std::domain_error("apply_V_n_alpha: alpha outside [0,2)");
    if (!(s_hi > s_lo && s_lo >= 0.0))
        throw std::invalid_argument("apply_V_n_alpha: bad support");
    const double Ca = biot_savart_constant(alpha);
    if (R <= 0.0) return 0.0;  // I_{n,alpha}(0) = 0 for n >= 1

    // S = R/T; integrand R^{2-alpha} I(T) f(R/T) T^{alpha-3}
    const double t_lo = R / s_hi, t_hi = R / (std::max(s_lo, 1e-300));
    const double pre = Ca * std::pow(R, 2.0 - alpha);
    const auto kernel_val = [&](double t) {
        return eval_I({n, alpha, t}).value;
    };
    const bool log_band = (alpha == 1.0) && (t_lo < 1.0 && t_hi > 1.0);
    if (!log_band) {
        const auto g = [&](double t) -> Cplx {
            return kernel_val(t) * f(R / t) * std::pow(t, alpha - 3.0);
        };
        return pre * gk_complex_panels(g, t_panel_edges(t_lo, t_hi));
    }
    // alpha = 1 with S = R inside the support: split off the log part
    const double band = std::min({0.4, 1.0 - t_lo, t_hi - 1.0});
    const double b_lo = 1.0 - band, b_hi = 1.0 + band;
    const auto smooth_part = [&](double t) -> Cplx {
        const double k = (t > b_lo && t < b_hi) ? log_expansion_remainder(n, t)
                                                : kernel_val(t);
        return k * f(R / t) * std::pow(t, alpha - 3.0);
    };
    std::vector<double> edges = t_panel_edges(t_lo, t_hi);
    edges.push_back(b_lo);
    edges.push_back(b_hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Cplx acc = pre * gk_complex_panels(smooth_part, edges);
    // log part on the band, against the product-integration rule
    const auto wfun_re = [&](double t) {
        return (-2.0 / std::sqrt(t)) * (f(R / t) * std::pow(t, alpha - 3.0)).real();
    };
    const auto wfun_im = [&](double t) {
        return (-2.0 / std::sqrt(t)) * (f(R / t) * std::pow(t, alpha - 3.0)).imag();
    };
    acc += pre * Cplx(integrate_log_kernel(wfun_re, b_lo, b_hi, 1.0),
                      integrate_log_kernel(wfun_im, b_lo, b_hi, 1.0));
    return acc;
}

std::complex<double> apply_V_n_alpha(const RadialField& f, int n, double alpha,
                                     double R) {
    return apply_V_n_alpha([&](double s) { return f(s); }, f.support_min(),
                           f.support_max(), n, alpha, R);
}

double vortex_velocity_at(const SmoothVortex& v, double alpha, double R) {
    const auto dth = [&](double s) -> Cplx { return v.d_theta(s); };
    return -apply_V_n_alpha(dth, v.support_min(), v.support_max(), 1, alpha, R)
                .real();
}

RadialField vortex_velocity(const SmoothVortex& v, double alpha,
                            const RadialGrid& out_grid) {
    Eigen::VectorXcd vals(out_grid.nodes.size());
    for (int i = 0; i < out_grid.nodes.size(); ++i)
        vals[i] = vortex_velocity_at(v, alpha, out_grid.nodes[i]);
    return RadialField(out_grid, vals);
}

double vphi_over_r_origin(const SmoothVortex& v, double alpha) {
    const double Ca = biot_savart_constant(alpha);
    const QuadResult q = gk_adaptive(
        [&](double s) { return v.d_theta(s) * std::pow(s, -alpha); },
        v.support_min(), v.support_max(), 1e-13, 1e-12);
    return -Ca * std::numbers::pi * q.value;
}

std::complex<double> radial_velocity_mode(const RadialField& W, int n, double alpha,
                                          double R) {
    if (R <= 0.0) return 0.0;
    return Cplx(0.0, double(n)) * apply_V_n_alpha(W, n, alpha, R) / R;
}

}  // namespace sqglab
