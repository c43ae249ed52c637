#pragma once

#include <vector>

namespace sqglab {

/// Addresses one evaluation of the parametric singular integrals
/// I_{n,alpha}, K_{n,alpha}, J_{n,alpha} at the ratio sigma = R/S.
struct KernelQuery {
    int n = 1;            // angular frequency, n >= 1
    double alpha = 0.0;   // interpolation exponent, 0 <= alpha < 2 (J: < 3)
    double sigma = 0.0;   // radius ratio, >= 0
};

/// Tagged evaluation: `divergent` marks a query whose limit is +infinity
/// (alpha >= 1 at sigma = 1 for I/K, alpha >= 3 for J). Callers such as the
/// discriminant scan must distinguish divergence from overflow.
struct KernelResult {
    double value = 0.0;
    double abs_err = 0.0;
    bool divergent = false;
};

/// I_{n,alpha}(sigma) = (1/alpha) int_{-pi}^{pi} cos(n b)/|sigma-e^{ib}|^alpha db,
/// with the K-form (sigma/n) int sin(b) sin(nb)/|sigma-e^{ib}|^2 db at alpha = 0.
KernelResult eval_I(const KernelQuery& q);

/// Same integral parametrized by the exact offset d = 1 - sigma. The oracle
/// extrapolations need offsets down to 1e-10, where forming sigma first would
/// lose the digits that matter.
KernelResult eval_I_offset(int n, double alpha, double one_minus_sigma);

/// K_{n,alpha}(sigma) = int sin(b) sin(nb)/|sigma-e^{ib}|^{2+alpha} db.
/// Equals (n/sigma) I_{n,alpha}(sigma) for alpha > 0, and is finite at sigma=0.
KernelResult eval_K(const KernelQuery& q);

/// J_{n,alpha} = I_{1,alpha} - I_{n,alpha}, evaluated as one integral of the
/// cosine difference; finite at sigma = 1 for alpha < 3.
KernelResult eval_J(const KernelQuery& q);
KernelResult eval_J_offset(int n, double alpha, double one_minus_sigma);

/// D_alpha = 2 sqrt(pi) Gamma((3-alpha)/2) / (2^alpha Gamma(2-alpha/2)).
double gamma_D(double alpha);

/// F_n(alpha) = prod_{k=1}^{n-1} (2k+alpha)/(2k+2-alpha), F_1 = 1.
double gamma_F(int n, double alpha);

/// Closed form I_{n,alpha}(1) = D_alpha F_n(alpha)/(1-alpha), alpha < 1 only.
double eval_I_at_1(int n, double alpha);

/// Closed form J_{n,alpha}(1) = D_alpha (1-F_n(alpha))/(1-alpha) for alpha < 3,
/// with the alpha -> 1 limit D_1 sum_{k=1}^{n-1} (4k+2)/(2k+1)^2.
double eval_J_at_1(int n, double alpha);

/// J'_{n,alpha}(1) = -(alpha/2) J_{n,alpha}(1).
double eval_J_prime_at_1(int n, double alpha);

/// R(sigma) = I_{n,1}(sigma) + (2/sqrt(sigma)) log|1-sigma| on 0 < |sigma-1| <= 1/2,
/// evaluated in the cancellation-free split form.
double log_expansion_remainder(int n, double sigma);

}  // namespace sqglab
