#include "sqglab/vortex.hpp"

#include <cmath>
#include <stdexcept>

#include "sqglab/kernels.hpp"
#include "sqglab/special.hpp"

namespace sqglab {

AnnularVortex build_vortex(double sigma) {
    if (!(sigma > 0.5 && sigma < 1.0))
        throw std::domain_error("build_vortex: sigma must lie in (1/2, 1)");
    return {sigma, 1.0 / (sigma * sigma) - 1.0};
}

StabilityMatrix build_matrix(const AnnularVortex& v, int n, double alpha) {
    if (n < 2) throw std::domain_error("build_matrix: n >= 2 required");
    const double s = v.sigma;
    const KernelResult I1s = eval_I({1, alpha, s});
    const KernelResult Ins = eval_I({n, alpha, s});
    if (I1s.divergent || Ins.divergent)
        throw std::domain_error("build_matrix: kernel divergence at sigma");
    const double J1 = eval_J_at_1(n, alpha);

    StabilityMatrix m;
    m.A << std::pow(s, -(2.0 + alpha)) * J1 - I1s.value / s, Ins.value / s,
        -Ins.value / s, -J1 + I1s.value / s;
    m.trace = m.A.trace();
    m.det = m.A.determinant();
    m.discriminant = m.trace * m.trace - 4.0 * m.det;
    return m;
}

double discriminant(int n, double alpha, double sigma) {
    if (n == 1) return 0.0;
    const double J1 = eval_J_at_1(n, alpha);
    const double X = (sigma + std::pow(sigma, -(1.0 + alpha))) * J1;
    const KernelResult I1s = eval_I({1, alpha, sigma});
    const KernelResult Ins = eval_I({n, alpha, sigma});
    const KernelResult Jns = eval_J({n, alpha, sigma});
    if (I1s.divergent || Ins.divergent || Jns.divergent)
        throw std::domain_error("discriminant: kernel divergence");
    const double f1 = X - 2.0 * (I1s.value + Ins.value);
    const double f2 = X - 2.0 * Jns.value;
    return f1 * f2 / (sigma * sigma);
}

ScanResult scan_discriminant(int n, double alpha, int points, double lo, double hi) {
    if (points < 2) throw std::invalid_argument("scan_discriminant: points >= 2");
    ScanResult out;
    out.points.resize(points);
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double s = lo + i * step;
        out.points[i] = {s, (n == 1) ? 0.0 : discriminant(n, alpha, s)};
    }
    out.sigma_star = out.points.front().sigma;
    out.delta_min = out.points.front().delta;
    for (const auto& p : out.points) {
        if (p.delta < out.delta_min) {
            out.delta_min = p.delta;
            out.sigma_star = p.sigma;
        }
    }
    for (int i = 0; i + 1 < points; ++i) {
        const auto& a = out.points[i];
        const auto& b = out.points[i + 1];
        if (a.delta * b.delta < 0.0) {
            out.sign_change_found = true;
            double x0 = a.sigma, x1 = b.sigma;
            double f0 = a.delta;
            while (x1 - x0 > 1e-8) {
                const double xm = 0.5 * (x0 + x1);
                const double fm = discriminant(n, alpha, xm);
                if (f0 * fm <= 0.0) {
                    x1 = xm;
                } else {
                    x0 = xm;
                    f0 = fm;
                }
            }
            out.onset = 0.5 * (x0 + x1);
            break;
        }
    }
    if (!out.sign_change_found && out.delta_min < 0.0) {
        // window covers the whole grid; report the low edge as onset
        out.sign_change_found = true;
        out.onset = lo;
    }
    return out;
}

EigenPair unstable_eigenpair(const StabilityMatrix& m, int n, double alpha) {
    if (!(m.discriminant < 0.0))
        throw std::domain_error("unstable_eigenpair: discriminant must be negative");
    EigenPair p;
    p.z = {0.5 * m.trace, 0.5 * std::sqrt(-m.discriminant)};
    // null vector of (A - z); the first row gives (A12, z - A11)
    p.h << std::complex<double>(m.A(0, 1), 0.0), p.z - m.A(0, 0);
    if (p.h.norm() == 0.0) p.h << p.z - m.A(1, 1), std::complex<double>(m.A(1, 0), 0.0);
    p.h.normalize();
    p.lambda = std::complex<double>(0.0, -1.0) * double(n) *
               biot_savart_constant(alpha) * p.z;
    return p;
}

}  // namespace sqglab
