#include "sqglab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqglab/quadrature.hpp"
#include "sqglab/special.hpp"

namespace sqglab {
namespace {

constexpr double kPi = std::numbers::pi;

void validate(int n, double alpha, double sigma, double alpha_max) {
    if (n < 1) throw std::domain_error("kernel: n must be >= 1");
    if (!(alpha >= 0.0 && alpha < alpha_max))
        throw std::domain_error("kernel: alpha must satisfy 0 <= alpha < " +
                                std::to_string(alpha_max).substr(0, 1));
    if (!(sigma >= 0.0)) throw std::domain_error("kernel: sigma must be >= 0");
}

// Panel edges clustering around the near-singular scale |d|.
std::vector<double> peak_edges(double d, double hi) {
    std::vector<double> e{0.0};
    const double ad = std::abs(d);
    if (ad > 0.0) {
        for (double s : {ad, 10 * ad, 100 * ad, 1000 * ad})
            if (s < hi) e.push_back(s);
    }
    for (double s : {0.05, 0.5, 1.0})
        if (s < hi) e.push_back(s);
    e.push_back(hi);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

// Integrates int_0^pi g(beta) / m(beta)^{p} dbeta with
// m = d^2 + 4 s sin^2(beta/2), s = 1-d. The region beta < 0.1 is integrated
// in the variable u = sin(beta/2) when |d| < 1e-2 to straighten the peak.
QuadResult beta_integral(const std::function<double(double)>& g, double d,
                         double p) {
    const double s = 1.0 - d;
    const auto metric = [&](double b) {
        const double sn = std::sin(0.5 * b);
        return d * d + 4.0 * s * sn * sn;
    };
    const auto f_beta = [&](double b) { return g(b) / std::pow(metric(b), p); };

    QuadResult out;
    const bool substitute = std::abs(d) < 1e-2;
    const double b_cut = substitute ? 0.1 : 0.0;
    if (substitute) {
        const double u_cut = std::sin(0.5 * b_cut);
        const auto f_u = [&](double u) {
            const double b = 2.0 * std::asin(u);
            const double m = d * d + 4.0 * s * u * u;
            return g(b) * 2.0 / (std::sqrt(1.0 - u * u) * std::pow(m, p));
        };
        const QuadResult r = gk_adaptive_panels(f_u, peak_edges(d, u_cut));
        out.value += r.value;
        out.abs_err += r.abs_err;
        const QuadResult rest = gk_adaptive_panels(f_beta, {b_cut, 1.0, kPi});
        out.value += rest.value;
        out.abs_err += rest.abs_err;
    } else {
        const QuadResult r = gk_adaptive_panels(f_beta, peak_edges(d, kPi));
        out.value += r.value;
        out.abs_err += r.abs_err;
    }
    return out;
}

}  // namespace

double gamma_D(double alpha) {
    return 2.0 * std::sqrt(kPi) / std::pow(2.0, alpha) *
           gamma_fn((3.0 - alpha) / 2.0) / gamma_fn(2.0 - alpha / 2.0);
}

double gamma_F(int n, double alpha) {
    double v = 1.0;
    for (int k = 1; k < n; ++k) v *= (2.0 * k + alpha) / (2.0 * k + 2.0 - alpha);
    return v;
}

double eval_I_at_1(int n, double alpha) {
    validate(n, alpha, 1.0, 1.0);
    return gamma_D(alpha) * gamma_F(n, alpha) / (1.0 - alpha);
}

double eval_J_at_1(int n, double alpha) {
    validate(n, alpha, 1.0, 3.0);
    if (n == 1) return 0.0;
    if (std::abs(1.0 - alpha) <= 1e-7) {
        // F_n(1) = 1 telescopes; the ratio limit is F_n'(1).
        double fp = 0.0;
        for (int k = 1; k < n; ++k)
            fp += (4.0 * k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        return gamma_D(1.0) * fp;
    }
    return gamma_D(alpha) * (1.0 - gamma_F(n, alpha)) / (1.0 - alpha);
}

double eval_J_prime_at_1(int n, double alpha) {
    validate(n, alpha, 1.0, 2.0);
    return -0.5 * alpha * eval_J_at_1(n, alpha);
}

KernelResult eval_I_offset(int n, double alpha, double d) {
    const double sigma = 1.0 - d;
    validate(n, alpha, sigma, 2.0);
    if (sigma == 0.0) return {0.0, 0.0, false};
    if (d == 0.0) {
        if (alpha >= 1.0) return {0.0, 0.0, true};
        // finite endpoint singularity beta^{-alpha}
        const QuadResult r =
            beta_integral([n](double b) { return std::cos(n * b); }, 0.0, 0.5 * alpha);
        return {2.0 / alpha * r.value, 2.0 / alpha * r.abs_err, false};
    }
    if (alpha == 0.0) {
        const QuadResult r = beta_integral(
            [n](double b) { return std::sin(b) * std::sin(n * b); }, d, 1.0);
        return {2.0 * sigma / n * r.value, 2.0 * sigma / n * r.abs_err, false};
    }
    if (alpha == 1.0 && std::abs(d) <= 0.5) {
        // I_{n,1} = 4 int_0^{pi/2} (cos 2nb - cos b)/sqrt(d^2 + 4 s sin^2 b) db
        //           + (2/sqrt(s)) asinh(2 sqrt(s)/|d|)
        const double s = sigma;
        const auto f = [&](double b) {
            const double sn = std::sin(b);
            return (std::cos(2.0 * n * b) - std::cos(b)) /
                   std::sqrt(d * d + 4.0 * s * sn * sn);
        };
        const QuadResult r = gk_adaptive_panels(f, peak_edges(d, 0.5 * kPi));
        const double b_term = 2.0 / std::sqrt(s) * std::asinh(2.0 * std::sqrt(s) / std::abs(d));
        return {4.0 * r.value + b_term, 4.0 * r.abs_err, false};
    }
    const QuadResult r =
        beta_integral([n](double b) { return std::cos(n * b); }, d, 0.5 * alpha);
    return {2.0 / alpha * r.value, 2.0 / alpha * r.abs_err, false};
}

KernelResult eval_I(const KernelQuery& q) {
    return eval_I_offset(q.n, q.alpha, 1.0 - q.sigma);
}

KernelResult eval_K(const KernelQuery& q) {
    validate(q.n, q.alpha, q.sigma, 2.0);
    const double d = 1.0 - q.sigma;
    if (d == 0.0 && q.alpha >= 1.0) return {0.0, 0.0, true};
    const int n = q.n;
    const QuadResult r = beta_integral(
        [n](double b) { return std::sin(b) * std::sin(n * b); }, d,
        0.5 * (2.0 + q.alpha));
    return {2.0 * r.value, 2.0 * r.abs_err, false};
}

KernelResult eval_J_offset(int n, double alpha, double d) {
    const double sigma = 1.0 - d;
    if (alpha >= 3.0 && d == 0.0) return {0.0, 0.0, true};
    validate(n, alpha, sigma, 3.0);
    if (n == 1) return {0.0, 0.0, false};
    if (d == 0.0) return {eval_J_at_1(n, alpha), 1e-15, false};
    if (alpha == 0.0) {
        const KernelResult a = eval_I_offset(1, 0.0, d);
        const KernelResult b = eval_I_offset(n, 0.0, d);
        return {a.value - b.value, a.abs_err + b.abs_err, false};
    }
    const QuadResult r = beta_integral(
        [n](double b) { return std::cos(b) - std::cos(n * b); }, d, 0.5 * alpha);
    return {2.0 / alpha * r.value, 2.0 / alpha * r.abs_err, false};
}

KernelResult eval_J(const KernelQuery& q) {
    return eval_J_offset(q.n, q.alpha, 1.0 - q.sigma);
}

double log_expansion_remainder(int n, double sigma) {
    const double d = 1.0 - sigma;
    if (!(std::abs(d) > 0.0 && std::abs(d) <= 0.5))
        throw std::domain_error("log_expansion_remainder: need 0 < |sigma-1| <= 1/2");
    const double s = sigma;
    const auto f = [&](double b) {
        const double sn = std::sin(b);
        return (std::cos(2.0 * n * b) - std::cos(b)) /
               std::sqrt(d * d + 4.0 * s * sn * sn);
    };
    const QuadResult a = gk_adaptive_panels(f, peak_edges(d, 0.5 * kPi));
    const double c_term =
        2.0 / std::sqrt(s) * std::log(2.0 * std::sqrt(s) + std::sqrt(4.0 * s + d * d));
    return 4.0 * a.value + c_term;
}

}  // namespace sqglab
