#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "sqglab/mollifier.hpp"
#include "sqglab/quadrature.hpp"
#include "sqglab/selfsimilar.hpp"
#include "sqglab/vortex.hpp"

using namespace sqglab;
using Cplx = std::complex<double>;

TEST_CASE("coordinate transforms round trip at machine precision") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> ut(1e-6, 10.0), ux(-5.0, 5.0),
        uab(0.05, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double t = ut(rng), a = uab(rng), b = uab(rng);
        const Eigen::Vector2d x{ux(rng), ux(rng)};
        double tau;
        Eigen::Vector2d X;
        to_selfsimilar(t, x, a, b, tau, X);
        double t2;
        Eigen::Vector2d x2;
        from_selfsimilar(tau, X, a, b, t2, x2);
        CHECK(std::abs(t2 - t) <= 1e-14 * t);
        CHECK((x2 - x).norm() <= 1e-13 * (1.0 + x.norm()));
    }
    CHECK_THROWS_AS(
        [] {
            double tau;
            Eigen::Vector2d X;
            to_selfsimilar(-1.0, {0, 0}, 0.5, 0.5, tau, X);
        }(),
        std::domain_error);
}

TEST_CASE("t = 1 maps to tau = 0 and t = e^{-abk} to tau = -k") {
    double tau;
    Eigen::Vector2d X;
    to_selfsimilar(1.0, {1.0, 0.0}, 0.3, 0.7, tau, X);
    CHECK(tau == 0.0);
    CHECK(X[0] == doctest::Approx(1.0 / std::pow(0.21, 1.0 / 0.3)).epsilon(1e-14));
    for (int k : {1, 3, 10}) {
        to_selfsimilar(std::exp(-0.21 * k), {0.0, 0.0}, 0.3, 0.7, tau, X);
        CHECK(tau == doctest::Approx(double(-k)).epsilon(1e-12));
    }
}

TEST_CASE("scaling exponents") {
    ScalingLaw law{0.0, 0.5, 0.1, 0.0, 2.0};
    CHECK(law.exponent_theta() == doctest::Approx(1.0).epsilon(1e-14));
    // boundary a = alpha + 2/p - s: the norm is constant in t
    ScalingLaw boundary{0.5, 1.0, 0.1, 0.5, 2.0};
    CHECK(boundary.exponent_theta() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sobolev_scaling(3.0, 0.01, boundary) == doctest::Approx(3.0).epsilon(1e-14));
    // monotone vanishing as t -> 0 iff the exponent is positive
    CHECK(sobolev_scaling(1.0, 1e-6, law) < sobolev_scaling(1.0, 1e-3, law));
    // force time integral finite iff a < alpha + 2/p - s
    CHECK(law.force_integrable());
    CHECK(std::isfinite(force_time_integral(1.0, 0.5, law)));
    ScalingLaw bad{0.0, 1.0, 0.1, 0.2, 2.0};  // a = 1 > 2/p - s = 0.8
    CHECK_FALSE(bad.force_integrable());
    CHECK(std::isinf(force_time_integral(1.0, 0.5, bad)));
    // denominator structure of the corollary formula
    const double e = law.exponent_theta();
    CHECK(force_time_integral(2.0, 0.3, law) ==
          doctest::Approx(std::pow(0.05 * 0.3, e) / (0.05 * e) * 2.0).epsilon(1e-13));
    CHECK(default_parameter_a(0.0, 0.0, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(default_parameter_a(1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Vishik force structure") {
    const Mollifier m;
    const SmoothVortex sv(build_vortex(0.8), m, 0.05);
    // b = 0 -> F == 0
    for (double R : {0.1, 0.8, 1.0, 1.3})
        CHECK(vishik_force_at(sv, 0.5, 0.0, 0.3, R) == 0.0);
    // constant theta near the origin: F(0+) = -b (a - alpha) theta(0+)
    const double F0 = vishik_force_at(sv, 0.5, 0.1, 0.3, 1e-6);
    CHECK(F0 == doctest::Approx(-0.1 * 0.2 * sv.theta(1e-6)).epsilon(1e-10));
    // compact support: theta and d_theta vanish beyond r2 + eps
    CHECK(vishik_force_at(sv, 0.5, 0.1, 0.3, 1.2) == doctest::Approx(0.0).epsilon(1e-12));
    // stationarity residual: V . grad Theta vanishes for radial fields, so
    // the self-similar equation reduces to the definition of F
    for (double R : {0.3, 0.81, 1.02}) {
        const double resid = -0.1 * ((0.5 - 0.3) * sv.theta(R) + R * sv.d_theta(R)) -
                             vishik_force_at(sv, 0.5, 0.1, 0.3, R);
        CHECK(std::abs(resid) <= 1e-14);
    }
}

TEST_CASE("Golovkin force: W = 0 gives G = F") {
    const Mollifier m;
    const SmoothVortex sv(build_vortex(0.8), m, 0.05);
    RadialGrid g = make_radial_grid({0.7, 1.1}, {8}, 6);
    const RadialField W0(g, Eigen::VectorXcd::Zero(g.nodes.size()));
    const GolovkinForce G(sv, W0, {0.2, -0.1}, 2, 0.5, 0.1, 0.0);
    for (double R : {0.3, 0.9, 1.02}) {
        CHECK(G(R, 0.7, -2.0) ==
              doctest::Approx(vishik_force_at(sv, 0.5, 0.1, 0.0, R)).epsilon(1e-5));
    }
}

namespace {
GolovkinForce demo_force(const SmoothVortex& sv, Cplx lambda, int n) {
    RadialGrid g = make_radial_grid({0.7, 1.1}, {10}, 6);
    Eigen::VectorXcd w(g.nodes.size());
    for (int i = 0; i < g.nodes.size(); ++i)
        w[i] = Cplx(1.0, 0.4) * std::exp(-std::pow((g.nodes[i] - 0.9) / 0.08, 2));
    return GolovkinForce(sv, RadialField(g, w), lambda, n, 0.5, 0.0, 0.0);
}
}  // namespace

TEST_CASE("Golovkin force: angular content {0, +-2n} only") {
    const Mollifier m;
    const SmoothVortex sv(build_vortex(0.8), m, 0.05);
    const int n = 2;
    const GolovkinForce G = demo_force(sv, {0.2, -0.14}, n);
    // exact ring sampling + DFT in phi
    const int NP = 64;
    for (double R : {0.5, 0.9, 1.05}) {
        std::vector<double> ring(NP);
        double scale = 0.0;
        for (int j = 0; j < NP; ++j) {
            ring[j] = G(R, 2.0 * std::numbers::pi * j / NP, -1.0);
            scale = std::max(scale, std::abs(ring[j]));
        }
        for (int k = 0; k < NP / 2; ++k) {
            Cplx c = 0.0;
            for (int j = 0; j < NP; ++j)
                c += ring[j] *
                     std::exp(Cplx(0.0, -2.0 * std::numbers::pi * k * j / NP));
            c /= double(NP);
            if (k == 0 || k == 2 * n) continue;
            CHECK(std::abs(c) <= 1e-10 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("Golovkin force decays like e^{2 Re lambda tau} toward tau = -inf") {
    const Mollifier m;
    const SmoothVortex sv(build_vortex(0.8), m, 0.05);
    const Cplx lambda{0.2, -0.14};
    const GolovkinForce G = demo_force(sv, lambda, 2);
    // ||G(tau) - F|| over a polar grid; b = 0 so F = 0
    const auto norm_at = [&](double tau) {
        double acc = 0.0;
        for (double R = 0.05; R < 1.4; R += 0.02) {
            for (int j = 0; j < 32; ++j) {
                const double phi = 2.0 * std::numbers::pi * j / 32;
                const double val = G(R, phi, tau) - G.vishik_part(R);
                acc += val * val * R;
            }
        }
        return std::sqrt(acc);
    };
    std::vector<double> taus{-10.0, -8.0, -6.5, -5.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double t : taus) {
        sx += t;
        sy += std::log(norm_at(t));
        sxx += t * t;
        sxy += t * std::log(norm_at(t));
    }
    const double slope =
        (taus.size() * sxy - sx * sy) / (taus.size() * sxx - sx * sx);
    CHECK(std::abs(slope - 2.0 * lambda.real()) <= 0.03 * 2.0 * lambda.real());
}
