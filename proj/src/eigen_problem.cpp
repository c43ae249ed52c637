#include "sqglab/eigen_problem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqglab/kernels.hpp"
#include "sqglab/quadrature.hpp"
#include "sqglab/special.hpp"

namespace sqglab {
namespace {

using Cplx = std::complex<double>;
constexpr Cplx kI{0.0, 1.0};

// Fornberg finite-difference weights for the m-th derivative at x0 over
// arbitrary nodes.
Eigen::VectorXd fornberg_weights(double x0, const Eigen::VectorXd& xs, int m) {
    const int N = xs.size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m + 1, N);
    d(0, 0) = 1.0;
    double c1 = 1.0, c4 = xs[0] - x0;
    for (int i = 1; i < N; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        const Eigen::MatrixXd prev = d;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    d(k, i) = c1 * (k * prev(k - 1, i - 1) - c5 * prev(k, i - 1)) / c2;
                d(0, i) = -c1 * c5 * prev(0, i - 1) / c2;
            }
            for (int k = mn; k >= 1; --k)
                d(k, j) = (c4 * d(k, j) - k * d(k - 1, j)) / c3;
            d(0, j) = c4 * d(0, j) / c3;
        }
        c1 = c2;
    }
    return d.row(m);
}

// C^2 cutoff equal to 1 at the center, vanishing at |x| = 1.
double bump3(double x) {
    const double u = 1.0 - x * x;
    return (u > 0.0) ? u * u * u : 0.0;
}

double kernel_I_checked(int n, double alpha, double t) {
    const KernelResult r = eval_I({n, alpha, t});
    if (r.divergent) throw std::domain_error("assemble_Lb: node collision at ratio 1");
    return r.value;
}

// int I_m(R/S) (S-R)^pow psi((S-R)/delta) dS for pow in {0, 1}, with the
// alpha = 1 log part handled by the product rule; psi = bump3.
double kappa_integral(int n_mode, double alpha, double R, double delta, int pow) {
    const double a = R - delta, b = R + delta;
    const auto moment = [&](double S) {
        return (pow == 0) ? 1.0 : (S - R);
    };
    if (alpha == 1.0) {
        // I(t) = -(2/sqrt(t)) log|1-t| + Rm(t), t = R/S;
        // log|1-t| = log|S-R| - log S
        const auto smooth = [&](double S) {
            const double t = R / S;
            const double rm = log_expansion_remainder(n_mode, t);
            return (rm + 2.0 / std::sqrt(t) * std::log(S)) *
                   bump3((S - R) / delta) * moment(S);
        };
        const QuadResult sm = gk_adaptive_panels(smooth, {a, R, b}, 1e-12, 1e-10);
        const auto logf = [&](double S) {
            const double t = R / S;
            return -2.0 / std::sqrt(t) * bump3((S - R) / delta) * moment(S);
        };
        return sm.value + integrate_log_kernel(logf, a, b, R);
    }
    const auto f = [&](double S) {
        return kernel_I_checked(n_mode, alpha, R / S) * bump3((S - R) / delta) *
               moment(S);
    };
    return gk_adaptive_panels(f, {a, R, b}, 1e-12, 1e-10).value;
}

}  // namespace

void validate_params(const SelfSimilarParams& q) {
    const double cap = std::min(q.alpha + 2.0 / q.p - q.s, 1.0 + q.alpha);
    if (!(q.a > 0.0 && q.a < cap))
        throw std::domain_error("SelfSimilarParams: a outside (0, alpha + 2/p - s)");
    if (!(q.b >= 0.0)) throw std::domain_error("SelfSimilarParams: b must be >= 0");
    if (q.m < 5) throw std::domain_error("SelfSimilarParams: m >= 5 required");
    if (!(q.alpha >= 0.0 && q.alpha <= 1.0))
        throw std::domain_error("SelfSimilarParams: alpha outside [0, 1]");
}

RadialGrid make_eigen_grid(const SmoothVortex& v, int target_nodes, double r_min,
                           double r_max) {
    const double s = v.sigma(), e = v.eps();
    const double a1 = s - e, b1 = s + e, a2 = 1.0 - e, b2 = 1.0 + e;
    const int order = 6;
    const int total_cells = std::max(24, target_nodes / order);
    // budget: 35% log region below, 20% per annulus, rest between/above
    const int c_log = std::max(6, int(0.35 * total_cells));
    const int c_ann = std::max(5, int(0.20 * total_cells));
    const int c_mid = std::max(2, int(0.10 * total_cells));
    const int c_top = std::max(2, total_cells - c_log - 2 * c_ann - c_mid);

    std::vector<double> edges;
    std::vector<int> cells;
    // log-spaced cells on [r_min, a1]
    for (int i = 0; i <= c_log; ++i)
        edges.push_back(r_min * std::pow(a1 / r_min, double(i) / c_log));
    for (int i = 0; i < c_log; ++i) cells.push_back(1);
    edges.push_back(b1);
    cells.push_back(c_ann);
    edges.push_back(a2);
    cells.push_back(c_mid);
    edges.push_back(b2);
    cells.push_back(c_ann);
    edges.push_back(r_max);
    cells.push_back(c_top);
    return make_radial_grid(edges, cells, order);
}

Eigen::MatrixXcd assemble_Lb(const SmoothVortex& v, const SelfSimilarParams& q,
                             int n_mode, const RadialGrid& grid) {
    validate_params(q);
    const int M = grid.nodes.size();
    const double alpha = q.alpha;
    const double Ca = biot_savart_constant(alpha);
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(M, M);

    // angular sweep: -i m Vphi/R and the self-similar shift b(a - alpha)
    for (int i = 0; i < M; ++i) {
        const double R = grid.nodes[i];
        L(i, i) += q.b * (q.a - alpha) -
                   kI * double(n_mode) * vortex_velocity_at(v, alpha, R) / R;
    }

    // transport b R d_R: 4th-order upwind-biased stencil (offsets -1..+3,
    // information flows inward along the characteristics of V - bX)
    if (q.b > 0.0) {
        for (int i = 0; i < M; ++i) {
            int lo = std::max(0, i - 1), hi = std::min(M - 1, i + 3);
            while (hi - lo < 4) {
                lo = std::max(0, lo - 1);
                hi = std::min(M - 1, hi + 1);
            }
            const Eigen::VectorXd xs = grid.nodes.segment(lo, hi - lo + 1);
            const Eigen::VectorXd w = fornberg_weights(grid.nodes[i], xs, 1);
            for (int k = 0; k <= hi - lo; ++k)
                L(i, lo + k) += q.b * grid.nodes[i] * w[k];
        }
    }

    // integral block with first-order diagonal singularity subtraction:
    //   int I(R/S) u(S) dS
    //     = sum_m Q_m I(R/S_m) [u_m - (u_i + u'_i (S_m - R)) psi_i(S_m)]
    //       + u_i kappa0_i + u'_i kappa1_i,        u = W S^{1-alpha};
    // the linear term removes the coupling of the kernel's ratio-1
    // singularity to the steep interface profile.
    if (n_mode > 0) {
        for (int i = 0; i < M; ++i) {
            const double R = grid.nodes[i];
            const double dth = v.d_theta(R);
            if (dth == 0.0) continue;
            const Cplx pre = -kI * double(n_mode) * Ca * dth / R;
            const int iw = std::min(std::max(i, 1), M - 2);
            const double hloc = std::max(grid.nodes[iw + 1] - grid.nodes[iw],
                                         grid.nodes[iw] - grid.nodes[iw - 1]);
            // keep the cutoff inside the locally fine panels: a wider bump
            // would be sampled on coarse cells that cannot resolve it
            double lo_edge = grid.nodes[0], hi_edge = grid.nodes[M - 1];
            for (int j = i; j > 0; --j) {
                if (grid.nodes[j] - grid.nodes[j - 1] > 2.5 * hloc) {
                    lo_edge = grid.nodes[j];
                    break;
                }
            }
            for (int j = i; j < M - 1; ++j) {
                if (grid.nodes[j + 1] - grid.nodes[j] > 2.5 * hloc) {
                    hi_edge = grid.nodes[j];
                    break;
                }
            }
            const double delta =
                std::min({6.0 * hloc, R - lo_edge + 0.5 * hloc,
                          hi_edge - R + 0.5 * hloc, 0.08});
            double psi0 = 0.0, psi1 = 0.0;
            for (int m = 0; m < M; ++m) {
                if (m == i) continue;
                const double S = grid.nodes[m];
                const double Iv = kernel_I_checked(n_mode, alpha, R / S);
                L(i, m) += pre * grid.weights[m] * Iv * std::pow(S, 1.0 - alpha);
                const double cut = bump3((S - R) / delta);
                psi0 += grid.weights[m] * Iv * cut;
                psi1 += grid.weights[m] * Iv * cut * (S - R);
            }
            const double k0 = kappa_integral(n_mode, alpha, R, delta, 0);
            const double k1 = kappa_integral(n_mode, alpha, R, delta, 1);
            // u_i coefficient
            L(i, i) += pre * std::pow(R, 1.0 - alpha) * (k0 - psi0);
            // u'_i coefficient through a centered 5-point stencil on u
            const int lo = std::clamp(i - 2, 0, M - 5);
            const Eigen::VectorXd xs = grid.nodes.segment(lo, 5);
            const Eigen::VectorXd fd = fornberg_weights(R, xs, 1);
            for (int k = 0; k < 5; ++k) {
                const double Sk = grid.nodes[lo + k];
                L(i, lo + k) += pre * (k1 - psi1) * fd[k] * std::pow(Sk, 1.0 - alpha);
            }
        }
    }
    return L;
}

RadialEigenSolution leading_eigen(const Eigen::MatrixXcd& L, const RadialGrid& grid,
                                  const SmoothVortex& v, const SelfSimilarParams& q,
                                  int n_mode, double halfplane_threshold) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    const int M = grid.nodes.size();

    RadialEigenSolution out;
    out.mode = n_mode;
    const double outer = 1.0 + 2.0 * v.eps();
    int best = -1;
    for (int k = 0; k < M; ++k) {
        if (vals[k].real() <= halfplane_threshold) continue;
        const Eigen::VectorXcd& w = vecs.col(k);
        // support filter: discrete L^2 mass beyond r2 + 2 eps must be tiny
        double tail = 0.0, total = 0.0;
        for (int i = 0; i < M; ++i) {
            const double mass = grid.weights[i] * std::norm(w[i]);
            total += mass;
            if (grid.nodes[i] > outer) tail += mass;
        }
        if (tail > 1e-2 * total) continue;
        if (best < 0 || vals[k].real() > vals[best].real()) best = k;
    }
    if (best < 0) {
        out.unstable = false;
        return out;
    }
    out.unstable = true;
    out.lambda = vals[best];
    out.W = vecs.col(best);
    out.residual = (L * out.W - out.lambda * out.W).norm() / out.W.norm();

    double wmax = 0.0;
    for (int i = 0; i < M; ++i) wmax = std::max(wmax, std::abs(out.W[i]));
    for (int i = M - 1; i >= 0; --i) {
        if (std::abs(out.W[i]) > 1e-3 * wmax) {
            out.support_radius = grid.nodes[i];
            break;
        }
    }

    if (q.b > 0.0) {
        // |W| = C R^{(Re lambda - b(a-alpha))/b} holds exactly below r1 - eps
        out.power_law_expected = (out.lambda.real() - q.b * (q.a - q.alpha)) / q.b;
        const double hi = 0.5 * v.sigma();
        std::vector<double> lx, ly;
        for (int i = 0; i < M; ++i) {
            const double R = grid.nodes[i];
            const double a = std::abs(out.W[i]);
            if (R < hi && a > 1e-7 * wmax) {
                lx.push_back(std::log(R));
                ly.push_back(std::log(a));
            }
        }
        if (lx.size() >= 8) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < lx.size(); ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
            }
            const double n = double(lx.size());
            out.power_law_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
    }
    return out;
}

RadialEigenSolution solve_mode(const SmoothVortex& v, const SelfSimilarParams& q,
                               int n_mode, int nodes, double halfplane_threshold) {
    const RadialGrid grid = make_eigen_grid(v, nodes);
    const Eigen::MatrixXcd L = assemble_Lb(v, q, n_mode, grid);
    return leading_eigen(L, grid, v, q, n_mode, halfplane_threshold);
}

std::optional<BContinuation> find_unstable_b(const SmoothVortex& v,
                                             SelfSimilarParams q, int n_mode,
                                             int nodes, Cplx lambda0,
                                             int max_halvings) {
    const double threshold =
        1e-3 * n_mode * biot_savart_constant(q.alpha);
    // bisect toward the largest admissible b: Re(lambda_b) decreases with b,
    // and a larger b keeps the eigenfunction's power-law exponent
    // (Re lambda_b - b(a-alpha))/b small enough to fit cleanly above the
    // eigensolve noise floor
    const double target = 0.55 * lambda0.real();
    const auto eval_b = [&](double b) {
        q.b = b;
        return solve_mode(v, q, n_mode, nodes, threshold);
    };
    double hi = lambda0.real() / (q.m + 3);
    RadialEigenSolution sol_hi = eval_b(hi);
    if (sol_hi.unstable && sol_hi.lambda.real() > target) {
        BContinuation out{hi, sol_hi, lambda0};
        return out;
    }
    double lo = hi;
    RadialEigenSolution sol_lo;
    bool have_lo = false;
    for (int k = 0; k < max_halvings; ++k) {
        lo *= 0.5;
        sol_lo = eval_b(lo);
        if (sol_lo.unstable && sol_lo.lambda.real() > target) {
            have_lo = true;
            break;
        }
    }
    if (!have_lo) return std::nullopt;
    for (int k = 0; k < 5; ++k) {
        const double mid = 0.5 * (lo + hi);
        const RadialEigenSolution sol_mid = eval_b(mid);
        if (sol_mid.unstable && sol_mid.lambda.real() > target) {
            lo = mid;
            sol_lo = sol_mid;
        } else {
            hi = mid;
        }
    }
    BContinuation out{lo, sol_lo, lambda0};
    return out;
}

TransportDecay transport_contraction_check(const SmoothVortex& v, double alpha,
                                           double b,
                                           const std::vector<double>& tau_grid,
                                           int n_sym, double dt) {
    // angular velocity spline on a fine grid (analytic derivative thereafter)
    const int NV = 1200;
    const double Rmax = 3.0;
    Eigen::VectorXd rx(NV), ry(NV);
    for (int i = 0; i < NV; ++i) {
        rx[i] = 1e-3 + (Rmax - 1e-3) * i / (NV - 1);
        ry[i] = vortex_velocity_at(v, alpha, rx[i]) / rx[i];  // q(R) = Vphi/R
    }
    const CubicSpline qspl(rx, ry);

    const auto vel = [&](double x, double y) {
       const double R = std::hypot(x, y);
        const double qv = qspl(R);
        return std::pair<double, double>{-qv * y - b * x, qv * x - b * y};
    };
    // test field: smooth ring times cos(n phi)
    const auto test_field = [&](double x, double y) {
        const double R = std::hypot(x, y);
        const double phi = std::atan2(y, x);
        return std::exp(-std::pow((R - 0.9) / 0.25, 2)) * std::cos(n_sym * phi);
    };

    // polar quadrature particles
    Eigen::VectorXd rn, rw;
    gauss_legendre(72, 1e-4, 2.2, rn, rw);
    const int NPhi = 48;
    const double dphi = 2.0 * std::numbers::pi / NPhi;

    struct P {
        double x, y, w;
    };
    std::vector<P> parts;
    parts.reserve(rn.size() * NPhi);
    for (int i = 0; i < rn.size(); ++i)
        for (int j = 0; j < NPhi; ++j) {
            const double phi = j * dphi;
            parts.push_back({rn[i] * std::cos(phi), rn[i] * std::sin(phi),
                             rn[i] * rw[i] * dphi});
        }

    // backward characteristics: Y(tau) with dY/ds = -V_b(Y) carries
    // (e^{tau T_b} Theta)(X_q) = Theta(Y(tau))
    TransportDecay out;
    Eigen::Matrix2d Mvar = Eigen::Matrix2d::Identity();
    double jx = 1.2 * std::cos(0.3), jy = 1.2 * std::sin(0.3);

    double tau = 0.0;
    std::size_t next = 0;
    const auto record = [&]() {
        double nrm2 = 0.0;
        for (const auto& p : parts) {
            const double t = test_field(p.x, p.y);
            nrm2 += p.w * t * t;
        }
        out.tau.push_back(tau);
        out.norm.push_back(std::sqrt(nrm2));
        out.jacobian.push_back(Mvar.determinant());
    };
    std::vector<double> taus = tau_grid;
    std::sort(taus.begin(), taus.end());
    if (taus.empty() || taus.front() > 0.0) taus.insert(taus.begin(), 0.0);
    record();
    ++next;

    const auto dvel = [&](double x, double y) {
        const double R = std::max(std::hypot(x, y), 1e-9);
        const double qv = qspl(R), qp = qspl.derivative(R);
        Eigen::Matrix2d D;
        D(0, 0) = -qp * x * y / R - b;
        D(0, 1) = -qv - qp * y * y / R;
        D(1, 0) = qv + qp * x * x / R;
        D(1, 1) = qp * x * y / R - b;
        return D;
    };

    while (next < taus.size()) {
        const double target = taus[next];
        while (tau < target - 1e-12) {
            const double h = std::min(dt, target - tau);
            // RK4 on all particles, velocity -V_b
            for (auto& p : parts) {
                const auto f = [&](double x, double y) {
                    auto [u, w] = vel(x, y);
                    return std::pair<double, double>{-u, -w};
                };
                auto [k1x, k1y] = f(p.x, p.y);
                auto [k2x, k2y] = f(p.x + 0.5 * h * k1x, p.y + 0.5 * h * k1y);
                auto [k3x, k3y] = f(p.x + 0.5 * h * k2x, p.y + 0.5 * h * k2y);
                auto [k4x, k4y] = f(p.x + h * k3x, p.y + h * k3y);
                p.x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
                p.y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            }
            // forward variational system along the reference trajectory
            {
                const auto f = [&](double x, double y) { return vel(x, y); };
                auto [k1x, k1y] = f(jx, jy);
                const Eigen::Matrix2d D1 = dvel(jx, jy) * Mvar;
                auto [k2x, k2y] = f(jx + 0.5 * h * k1x, jy + 0.5 * h * k1y);
                const Eigen::Matrix2d D2 =
                    dvel(jx + 0.5 * h * k1x, jy + 0.5 * h * k1y) * (Mvar + 0.5 * h * D1);
                auto [k3x, k3y] = f(jx + 0.5 * h * k2x, jy + 0.5 * h * k2y);
                const Eigen::Matrix2d D3 =
                    dvel(jx + 0.5 * h * k2x, jy + 0.5 * h * k2y) * (Mvar + 0.5 * h * D2);
                auto [k4x, k4y] = f(jx + h * k3x, jy + h * k3y);
                const Eigen::Matrix2d D4 = dvel(jx + h * k3x, jy + h * k3y) * (Mvar + h * D3);
                jx += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
                jy += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
                Mvar += h / 6.0 * (D1 + 2.0 * D2 + 2.0 * D3 + D4);
            }
            tau += h;
        }
        record();
        ++next;
    }
    // least-squares slope of log norm vs tau
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < out.tau.size(); ++i) {
        sx += out.tau[i];
        sy += std::log(out.norm[i]);
        sxx += out.tau[i] * out.tau[i];
        sxy += out.tau[i] * std::log(out.norm[i]);
    }
    const double n = double(out.tau.size());
    out.fitted_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

}  // namespace sqglab
