#include "sqglab/regularize.hpp"

#include <cmath>
#include <stdexcept>

#include "sqglab/kernels.hpp"
#include "sqglab/quadrature.hpp"

namespace sqglab {
namespace {

using Cplx = std::complex<double>;

double kernel_I(int n, double alpha, double sigma) {
    const KernelResult r = eval_I({n, alpha, sigma});
    if (r.divergent) throw std::domain_error("assemble_A_eps: kernel divergence");
    return r.value;
}

// Lagrange cardinal function through the nodes, barycentric form.
double cardinal(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary, int l,
                double x) {
    const int N = nodes.size();
    double num = 0.0, den = 0.0;
    for (int m = 0; m < N; ++m) {
        const double dx = x - nodes[m];
        if (std::abs(dx) < 1e-14) return (m == l) ? 1.0 : 0.0;
        const double t = bary[m] / dx;
        den += t;
        if (m == l) num = t;
    }
    return num / den;
}

// LOGW(i, l) = int_{-1}^{1} ell_l(rho') log|rho' - rho_i| d rho'
Eigen::MatrixXd log_product_weights(const Eigen::VectorXd& nodes) {
    const int N = nodes.size();
    Eigen::VectorXd bary(N);
    for (int l = 0; l < N; ++l) {
        double w = 1.0;
        for (int m = 0; m < N; ++m)
            if (m != l) w /= (nodes[l] - nodes[m]);
        bary[l] = w;
    }
    Eigen::MatrixXd W(N, N);
    for (int i = 0; i < N; ++i) {
        for (int l = 0; l < N; ++l) {
            W(i, l) = integrate_log_kernel(
                [&](double x) { return cardinal(nodes, bary, l, x); }, -1.0, 1.0,
                nodes[i]);
        }
    }
    return W;
}

}  // namespace

Eigen::Vector2cd RescaledOperators::eta_mean(const Eigen::VectorXcd& v) const {
    Eigen::Vector2cd m;
    for (int j = 0; j < 2; ++j) {
        Cplx acc = 0.0;
        for (int l = 0; l < N; ++l) acc += v[j * N + l] * w_eta[l];
        m[j] = acc;
    }
    return m;
}

Eigen::VectorXcd RescaledOperators::constant(const Eigen::Vector2cd& mu) const {
    Eigen::VectorXcd v(2 * N);
    v.segment(0, N).setConstant(mu[0]);
    v.segment(N, N).setConstant(mu[1]);
    return v;
}

RescaledOperators assemble_A_eps(const AnnularVortex& v, const Mollifier& moll,
                                 int n, double alpha, double eps, int N) {
    if (N < 16) throw std::invalid_argument("assemble_A_eps: N >= 16 required");
    const double cap = std::min(v.sigma, 1.0 - v.sigma) / 3.0;
    if (!(eps > 0.0 && eps < cap))
        throw std::domain_error("assemble_A_eps: eps outside (0, min(r1, r2-r1)/3)");

    RescaledOperators op;
    op.n_modes = n;
    op.alpha = alpha;
    op.eps = eps;
    op.N = N;
    op.r[0] = v.sigma;
    op.r[1] = 1.0;
    op.c[0] = -(1.0 + v.c);
    op.c[1] = 1.0;

    Eigen::VectorXd wg;
    gauss_legendre(N, op.rho, wg);
    op.w_eta.resize(N);
    for (int l = 0; l < N; ++l) op.w_eta[l] = wg[l] * moll.eta(op.rho[l]);
    const double eta_norm = op.w_eta.sum();
    op.w_eta /= eta_norm;  // discrete eta measure has exactly unit mass
    // eta at the nodes under the same normalization (log-kernel block)
    Eigen::VectorXd eta_nodes(N);
    for (int l = 0; l < N; ++l) eta_nodes[l] = moll.eta(op.rho[l]) / eta_norm;

    const int M = 2 * N;
    op.A_eps = Eigen::MatrixXcd::Zero(M, M);
    op.A1_eps = Eigen::MatrixXcd::Zero(M, M);
    const double J1 = eval_J_at_1(n, alpha);
    const bool sqg = (alpha == 1.0);

    Eigen::MatrixXd logw;
    if (sqg) logw = log_product_weights(op.rho);

    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < N; ++i) {
            const int row = j * N + i;
            const double rji = op.r[j] + eps * op.rho[i];
            // cross block k != j: kernels evaluated away from ratio 1
            const int k = 1 - j;
            for (int l = 0; l < N; ++l) {
                const double rkl = op.r[k] + eps * op.rho[l];
                const double rat = rji / rkl;
                const double fac = std::pow(rkl, 1.0 - alpha) / rji;
                op.A_eps(row, k * N + l) +=
                    op.c[k] * fac * kernel_I(n, alpha, rat) * op.w_eta[l];
                op.A_eps(row, row) -=
                    op.c[k] * fac * kernel_I(1, alpha, rat) * op.w_eta[l];
            }
            // self block: I_n f(rho') - I_1 f(rho) = -J_n f(rho') + I_1 (f(rho') - f(rho)),
            // J_n is C^1 across ratio 1 and the I_1 difference term is A_1^eps
            for (int l = 0; l < N; ++l) {
                const double rkl = op.r[j] + eps * op.rho[l];
                const double rat = rji / rkl;
                const double fac = std::pow(rkl, 1.0 - alpha) / rji;
                const double Jv = (l == i) ? J1 : eval_J({n, alpha, rat}).value;
                op.A_eps(row, j * N + l) += -op.c[j] * fac * Jv * op.w_eta[l];
                if (l == i) continue;
                double a1;
                if (sqg) {
                    // I_{1,1}(rat) = R(rat) - (2/sqrt(rat)) (log eps
                    //   + log|rho' - rho| - log(r_j + eps rho')); the
                    //   log|rho' - rho| block uses product integration
                    const double pre = -2.0 / std::sqrt(rat);
                    const double smooth = log_expansion_remainder(1, rat) +
                                          pre * (std::log(eps) - std::log(rkl));
                    a1 = op.c[j] * (fac * smooth * op.w_eta[l] +
                                    fac * pre * eta_nodes[l] * logw(i, l));
                } else {
                    a1 = op.c[j] * fac * kernel_I(1, alpha, rat) * op.w_eta[l];
                }
                op.A1_eps(row, j * N + l) += a1;
                op.A1_eps(row, row) -= a1;
                op.A_eps(row, j * N + l) += a1;
                op.A_eps(row, row) -= a1;
            }
        }
    }
    op.A0_eps = op.A_eps - op.A1_eps;

    // eps = 0 regular part: acts as the 2x2 matrix on constants
    op.A0 = Eigen::MatrixXcd::Zero(M, M);
    for (int j = 0; j < 2; ++j) {
        const int k = 1 - j;
        const double Injk = kernel_I(n, alpha, op.r[j] / op.r[k]);
        const double I1jk = kernel_I(1, alpha, op.r[j] / op.r[k]);
        for (int i = 0; i < N; ++i) {
            const int row = j * N + i;
            for (int l = 0; l < N; ++l) {
                op.A0(row, k * N + l) +=
                    op.c[k] * std::pow(op.r[k], 1.0 - alpha) / op.r[j] * Injk * op.w_eta[l];
                op.A0(row, j * N + l) -=
                    op.c[j] * std::pow(op.r[j], -alpha) * J1 * op.w_eta[l];
            }
            op.A0(row, row) -= op.c[k] * std::pow(op.r[k], 1.0 - alpha) / op.r[j] * I1jk;
        }
    }
    op.B0 = (op.A0_eps - op.A0) / eps;

    if (!sqg) {
        const double I11 = eval_I_at_1(1, alpha);
        op.A1 = Eigen::MatrixXcd::Zero(M, M);
        for (int j = 0; j < 2; ++j) {
            const double pre = op.c[j] * std::pow(op.r[j], -alpha) * I11;
            for (int i = 0; i < N; ++i) {
                const int row = j * N + i;
                for (int l = 0; l < N; ++l) op.A1(row, j * N + l) += pre * op.w_eta[l];
                op.A1(row, row) -= pre;
            }
        }
        op.B1 = (1.0 - alpha) / std::pow(eps, 1.0 - alpha) * (op.A1_eps - op.A1);
    } else {
        op.A1_log = Eigen::MatrixXcd::Zero(M, M);
        for (int j = 0; j < 2; ++j) {
            const double pre = 2.0 * op.c[j] / op.r[j];
            for (int i = 0; i < N; ++i) {
                const int row = j * N + i;
                op.A1_log(row, row) += pre;
                for (int l = 0; l < N; ++l) op.A1_log(row, j * N + l) -= pre * op.w_eta[l];
            }
        }
        op.B1 = op.A1_eps - std::log(eps) * op.A1_log;
    }
    return op;
}

namespace {

struct Setup {
    StabilityMatrix M2;
    Cplx z;
    Eigen::Vector2cd h, hs;
    Eigen::Matrix2cd solve2;  // [h, 2i Im(z) h*]
};

Setup make_setup(const AnnularVortex& v, int n, double alpha) {
    Setup s;
    s.M2 = build_matrix(v, n, alpha);
    if (!(s.M2.discriminant < 0.0))
        throw std::domain_error("fixed point: discriminant must be negative at sigma");
    const EigenPair p = unstable_eigenpair(s.M2, n, alpha);
    s.z = p.z;
    s.h = p.h;
    s.hs = p.h.conjugate();
    s.solve2.col(0) = s.h;
    s.solve2.col(1) = Cplx(0.0, 2.0 * s.z.imag()) * s.hs;
    return s;
}

bool contraction_ok(const std::vector<double>& inc) {
    if (inc.size() < 5) return true;  // converged before ratios were observable
    for (std::size_t i = 3; i + 1 < inc.size(); ++i) {
        if (inc[i] > 1e-14 && inc[i + 1] / inc[i] >= 0.9) return false;
    }
    return true;
}

}  // namespace

CorrectedEigenpair solve_fixed_point_sub(const AnnularVortex& v, const Mollifier& moll,
                                         int n, double alpha, double eps, int N,
                                         double tol, int max_iter) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("solve_fixed_point_sub: alpha must lie in [0,1)");
    const Setup s = make_setup(v, n, alpha);
    const RescaledOperators op = assemble_A_eps(v, moll, n, alpha, eps, N);
    const int M = 2 * N;

    // diagonal operator D and constant-valued operator C of the A = D + C split
    Eigen::Vector2d dvals;
    for (int j = 0; j < 2; ++j) {
        double d = 0.0;
        for (int k = 0; k < 2; ++k)
            d -= op.c[k] * std::pow(op.r[k], 1.0 - alpha) / op.r[j] *
                 ((j == k) ? eval_I_at_1(1, alpha) : kernel_I(1, alpha, op.r[j] / op.r[k]));
        dvals[j] = d;
    }
    Eigen::Matrix2d Cn;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            Cn(j, k) = op.c[k] * std::pow(op.r[k], 1.0 - alpha) / op.r[j] *
                       ((j == k) ? eval_I_at_1(n, alpha) : kernel_I(n, alpha, op.r[j] / op.r[k]));

    const Eigen::MatrixXcd Am = op.A0 + op.A1;
    const Eigen::MatrixXcd dA = op.A_eps - Am;
    const Eigen::VectorXcd hvec = op.constant(s.h);
    const Eigen::VectorXcd hsvec = op.constant(s.hs);
    const Eigen::VectorXcd B0h = op.B0 * hvec;

    CorrectedEigenpair out;
    out.z = s.z;
    out.eps_used = eps;
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(M);
    Cplx y = 0.0, gamma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd f = -B0h + eps * y * g - dA * g;
        for (int j = 0; j < 2; ++j)
            f.segment(j * N, N) /= (dvals[j] - s.z);
        const Eigen::Vector2cd fm = op.eta_mean(f);
        const Eigen::Vector2cd Cf = Cn.cast<Cplx>() * fm;
        const Eigen::Vector2cd sol = s.solve2.fullPivLu().solve(Cf);
        const Cplx y_new = sol[0], gamma_new = sol[1];
        const Eigen::VectorXcd g_new = f + gamma_new * hsvec;
        const double inc = (g_new - g).norm() + std::abs(y_new - y);
        out.increments.push_back(inc);
        g = g_new;
        y = y_new;
        gamma = gamma_new;
        out.iterations = it + 1;
        if (inc < tol) break;
    }
    out.y = y;
    out.gamma = gamma;
    out.z_eps = s.z + eps * y;
    out.profile = g;
    out.residual = out.increments.back();
    out.contracted = contraction_ok(out.increments);
    const Eigen::VectorXcd heps = hvec + eps * g;
    out.equation_residual = (op.A_eps * heps - out.z_eps * heps).norm() / heps.norm();
    return out;
}

CorrectedEigenpair solve_fixed_point_sqg(const AnnularVortex& v, const Mollifier& moll,
                                         int n, double eps, int N, double tol,
                                         int max_iter) {
    if (!(eps > 0.0) || std::abs(std::log(eps)) < 10.0)
        throw std::domain_error("solve_fixed_point_sqg: need |log eps| >= 10");
    const double alpha = 1.0;
    const Setup s = make_setup(v, n, alpha);
    const RescaledOperators op = assemble_A_eps(v, moll, n, alpha, eps, N);
    const int M = 2 * N;
    const double le = std::log(eps);

    Eigen::Vector2d Dv;
    for (int j = 0; j < 2; ++j) Dv[j] = 2.0 * op.c[j] / op.r[j];

    const Eigen::VectorXcd hvec = op.constant(s.h);
    const Eigen::VectorXcd hsvec = op.constant(s.hs);
    const Eigen::VectorXcd B0h = op.B0 * hvec;

    CorrectedEigenpair out;
    out.z = s.z;
    out.eps_used = eps;
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(M);
    Cplx y = 0.0, gamma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd mu_vec = gamma * hsvec;
        // exact bracket from (A^eps - z^eps) h^eps = 0, including the
        // (A0 + eps B0) f term dropped in the displayed equation
        const Eigen::VectorXcd t1 =
            (s.z * f - op.B1 * f - op.A0 * f - eps * (op.B0 * f) + eps * y * f) / le;
        const Eigen::Vector2cd P =
            op.eta_mean(B0h - eps * (y * mu_vec - op.B0 * mu_vec) - t1);
        const Eigen::Vector2cd sol = s.solve2.fullPivLu().solve(P);
        const Cplx y_new = sol[0], gamma_new = sol[1];
        mu_vec = gamma_new * hsvec;
        Eigen::VectorXcd rhs = y_new * hvec - B0h - (op.A0 * mu_vec - s.z * mu_vec) +
                               eps * (y_new * mu_vec - op.B0 * mu_vec) + t1;
        const Eigen::Vector2cd rm = op.eta_mean(rhs);
        Eigen::VectorXcd f_new(M);
        for (int j = 0; j < 2; ++j)
            f_new.segment(j * N, N) =
                (rhs.segment(j * N, N).array() - rm[j]) / Dv[j];
        const double inc =
            (f_new - f).norm() + std::abs(y_new - y) + std::abs(gamma_new - gamma);
        out.increments.push_back(inc);
        f = f_new;
        y = y_new;
        gamma = gamma_new;
        out.iterations = it + 1;
        if (inc < tol) break;
    }
    out.y = y;
    out.gamma = gamma;
    out.z_eps = s.z + eps * y;
    out.profile = f;
    out.mu = gamma * s.hs;
    out.residual = out.increments.back();
    out.contracted = contraction_ok(out.increments);
    const Eigen::VectorXcd g = op.constant(out.mu) + f / le;
    const Eigen::VectorXcd heps = hvec + eps * g;
    out.equation_residual =
        ((op.A0_eps + op.A1_eps) * heps - out.z_eps * heps).norm() / heps.norm();
    return out;
}

double choose_eps(const AnnularVortex& v, const Mollifier& moll, int n, double alpha,
                  int N, int max_halvings) {
    double eps = 0.05 * std::min(v.sigma, 1.0 - v.sigma);
    if (alpha == 1.0) eps = std::min(eps, 0.999 * std::exp(-10.0));
    for (int k = 0; k < max_halvings; ++k, eps *= 0.5) {
        const CorrectedEigenpair r =
            (alpha == 1.0) ? solve_fixed_point_sqg(v, moll, n, eps, N)
                           : solve_fixed_point_sub(v, moll, n, alpha, eps, N);
        if (r.contracted && r.residual < 1e-10 && r.z_eps.imag() > 0.0) return eps;
    }
    throw std::runtime_error("choose_eps: no contracting eps found");
}

}  // namespace sqglab
