#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace sqglab {

/// Piecewise-constant zero-mean vortex: value c on (0, sigma], -1 on
/// (sigma, 1], 0 beyond, with (1+c) sigma^2 = 1.
struct AnnularVortex {
    double sigma;  // inner radius r1, in (1/2, 1)
    double c;      // inner level, sigma^{-2} - 1
    static constexpr double r2 = 1.0;
    static constexpr double outer_level = -1.0;
};

AnnularVortex build_vortex(double sigma);

/// 2x2 stability matrix of the two-interface problem and its invariants.
struct StabilityMatrix {
    Eigen::Matrix2d A;
    double trace;
    double det;
    double discriminant;
};

StabilityMatrix build_matrix(const AnnularVortex& v, int n, double alpha);

/// Discriminant through the factored closed form
/// sigma^2 Delta = (X - 2(I_1+I_n)) (X - 2 J_n(sigma)),
/// X = (sigma + sigma^{-(1+alpha)}) J_n(1); stable at alpha = 1 near sigma = 1.
double discriminant(int n, double alpha, double sigma);

struct ScanPoint {
    double sigma;
    double delta;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    bool sign_change_found = false;
    double sigma_star = 0.0;   // argmin of Delta over the scanned grid
    double delta_min = 0.0;
    double onset = 0.0;        // bisected boundary of the Delta < 0 window, if any
};

/// Scans Delta(sigma) on a uniform grid over (lo, hi); refines the first sign
/// change by bisection to 1e-8 when one exists.
ScanResult scan_discriminant(int n, double alpha, int points, double lo = 0.5,
                             double hi = 1.0 - 1e-6);

/// Unstable eigenpair of the 2x2 system: z = (tr A + i sqrt(-Delta))/2 and a
/// unit null vector h of (A - z); lambda = -i n C_alpha z.
struct EigenPair {
    std::complex<double> z;
    Eigen::Vector2cd h;
    std::complex<double> lambda;
};

EigenPair unstable_eigenpair(const StabilityMatrix& m, int n, double alpha);

}  // namespace sqglab
