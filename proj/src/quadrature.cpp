#include "sqglab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqglab {
namespace {

// Kronrod-15 abscissae (positive half) and weights, with the embedded
// Gauss-7 weights on the shared nodes.
constexpr double kx[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kw[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double gw[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double k15;
    double err;
};

PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk[8][2];
    for (int i = 0; i < 7; ++i) {
        fk[i][0] = f(c - h * kx[i]);
        fk[i][1] = f(c + h * kx[i]);
    }
    fk[7][0] = f(c);
    fk[7][1] = 0.0;
    double k15 = kw[7] * fk[7][0];
    for (int i = 0; i < 7; ++i) k15 += kw[i] * (fk[i][0] + fk[i][1]);
    double g7 = gw[3] * fk[7][0];
    for (int i = 0; i < 3; ++i) g7 += gw[i] * (fk[2 * i + 1][0] + fk[2 * i + 1][1]);
    k15 *= h;
    g7 *= h;
    // QUADPACK-style sharpened error estimate
    const double diff = std::abs(k15 - g7);
    const double err = std::min(diff, 200.0 * diff * std::sqrt(std::max(diff, 1e-300)));
    return {k15, std::max(err, std::abs(k15) * 1e-16)};
}

void gk_recurse(const std::function<double(double)>& f, double a, double b,
                double abs_tol, double rel_tol, int depth, int max_depth,
                double& value, double& err_acc) {
    const PanelEstimate e = gk15_panel(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(e.k15));
    if (e.err <= tol || depth >= max_depth || (b - a) < 1e-15 * (std::abs(a) + 1.0)) {
        value += e.k15;
        err_acc += e.err;
        return;
    }
    const double c = 0.5 * (a + b);
    gk_recurse(f, a, c, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, value, err_acc);
    gk_recurse(f, c, b, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, value, err_acc);
}

}  // namespace

QuadResult gk_adaptive(const std::function<double(double)>& f, double a, double b,
                       double abs_tol, double rel_tol, int max_depth) {
    QuadResult r;
    if (a == b) return r;
    gk_recurse(f, a, b, abs_tol, rel_tol, 0, max_depth, r.value, r.abs_err);
    return r;
}

QuadResult gk_adaptive_panels(const std::function<double(double)>& f,
                              const std::vector<double>& edges, double abs_tol,
                              double rel_tol, int max_depth) {
    QuadResult r;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const QuadResult p = gk_adaptive(f, edges[i], edges[i + 1], abs_tol, rel_tol, max_depth);
        r.value += p.value;
        r.abs_err += p.abs_err;
    }
    return r;
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    nodes.resize(n);
    weights.resize(n);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes,
                    Eigen::VectorXd& weights) {
    gauss_legendre(n, nodes, weights);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    nodes = (nodes.array() * half + mid).matrix();
    weights *= half;
}

void log_gauss_rule(Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    static const double x[12] = {
        0.0065487222790800587893, 0.038946809560449959162, 0.098150263106006628862,
        0.18113858159063157735,   0.2832200676673725547,   0.3984344351634366437,
        0.51995262679235266273,   0.6405109167161064543,   0.75286501205183057837,
        0.85024002416230220067,   0.92674968322391410105,  0.97775612968999747917};
    static const double w[12] = {
        0.093192691443931324491,  0.14975182757632236417,  0.16655745436459300532,
        0.15963355943698765116,   0.13842483186483562107,  0.11001657063572116234,
        0.079961821770828970265,  0.05240695482464177065,  0.030071088873761187124,
        0.014249245587998279107,  0.004899924582321760939, 0.00083402903805690336469};
    nodes = Eigen::Map<const Eigen::VectorXd>(x, 12);
    weights = Eigen::Map<const Eigen::VectorXd>(w, 12);
}

double integrate_log_kernel(const std::function<double(double)>& f, double a,
                            double b, double s) {
    if (!(s >= a && s <= b)) throw std::invalid_argument("integrate_log_kernel: s outside [a,b]");
    Eigen::VectorXd xl, wl;
    log_gauss_rule(xl, wl);
    double acc = 0.0;
    // int_0^h f(s +- t) log t dt = -h sum w_i f(s +- h x_i) + log(h) int_0^h f
    for (const double side : {-1.0, +1.0}) {
        const double h = (side < 0) ? s - a : b - s;
        if (h <= 0) continue;
        double singular = 0.0;
        for (int i = 0; i < 12; ++i) singular += wl[i] * f(s + side * h * xl[i]);
        singular *= -h;
        Eigen::VectorXd xg, wg;
        gauss_legendre(16, 0.0, h, xg, wg);
        double smooth = 0.0;
        for (int i = 0; i < xg.size(); ++i) smooth += wg[i] * f(s + side * xg[i]);
        acc += singular + std::log(h) * smooth;
    }
    return acc;
}

}  // namespace sqglab
