#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace sqglab {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a, b].
/// Bisects until the K15-G7 estimate meets abs_tol or rel_tol per panel.
QuadResult gk_adaptive(const std::function<double(double)>& f, double a, double b,
                       double abs_tol = 1e-12, double rel_tol = 1e-10,
                       int max_depth = 60);

/// Adaptive Gauss-Kronrod over a list of panel edges (sorted, deduplicated by
/// the caller). Each panel is integrated adaptively; errors add.
QuadResult gk_adaptive_panels(const std::function<double(double)>& f,
                              const std::vector<double>& edges,
                              double abs_tol = 1e-12, double rel_tol = 1e-10,
                              int max_depth = 60);

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Gauss-Legendre nodes/weights mapped to [a, b].
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes,
                    Eigen::VectorXd& weights);

/// 12-point Gauss rule for int_0^1 f(x) * (-log x) dx.
/// Exact for polynomials up to degree 23 against the log weight.
void log_gauss_rule(Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// int_a^b f(x) log|x - s| dx with s inside [a, b]: the log singularity is
/// integrated with the log-weighted Gauss rule on each side of s, the smooth
/// remainder with plain Gauss-Legendre.
double integrate_log_kernel(const std::function<double(double)>& f, double a,
                            double b, double s);

}  // namespace sqglab
