#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "sqglab/mollifier.hpp"
#include "sqglab/radial_ops.hpp"
#include "sqglab/selfsimilar.hpp"

namespace sqglab {

/// Periodic N x N box of side L centered at the origin, with the circular
/// 2/3 dealias mask (alias-free quadratic products) and an optional
/// exponential tail filter for long alpha = 1 runs.
struct SpectralGrid {
    int N = 0;
    double L = 0.0;
    double alpha = 0.0;
    bool filter_on = false;
    Eigen::ArrayXXd kx, ky, k2;      // wavenumbers
    Eigen::ArrayXXd mult;            // |k|^{alpha-2}, zero at k = 0
    Eigen::ArrayXXd dealias;         // 0/1 circular 2/3 mask
    Eigen::ArrayXXd filter;          // exponential cutoff profile (1 if off)
    Eigen::ArrayXXd x, y, r, phi;    // physical coordinates
    double dx() const { return L / N; }
    double cell_area() const { return (L / N) * (L / N); }
};

std::shared_ptr<SpectralGrid> make_grid(int N, double L, double alpha,
                                        bool filter_on = false);

/// Fourier-space scalar state. Reality and zero mean are enforced exactly
/// after every step; dealiased modes are exactly zero.
struct SpectralState {
    std::shared_ptr<SpectralGrid> grid;
    Eigen::ArrayXXcd hat;
    double tau = 0.0;
};

SpectralState make_state(std::shared_ptr<SpectralGrid> grid,
                         const std::function<double(double, double)>& field,
                         double tau0 = 0.0);

Eigen::ArrayXXd to_physical(const SpectralState& s);
double l2_norm(const SpectralState& s);
double l2_norm_field(const SpectralGrid& g, const Eigen::ArrayXXd& f);

/// V = -grad^perp Lambda^{alpha-2} Theta via the spectral multiplier:
/// V^(k) = -i k^perp |k|^{alpha-2} Theta^(k).
void biot_savart_spectral(const SpectralState& s, Eigen::ArrayXXd& vx,
                          Eigen::ArrayXXd& vy);

/// Real-space force sampled on the grid at time tau; empty = unforced.
using Forcing = std::function<void(double tau, const SpectralGrid& g,
                                   Eigen::ArrayXXd& out)>;

/// One RK4 step of d Theta/d tau = -V . grad Theta + F with in-stage
/// dealiasing; throws on CFL breach (dt > cfl_max * dx / max|V|).
void step_rk4(SpectralState& s, const Forcing& forcing, double dt,
              double cfl_max = 0.55);

double max_velocity(const SpectralState& s);

struct DiagnosticsRow {
    double tau = 0.0;
    double l2_dev = 0.0;        // ||Theta - Theta_bar|| (static profile)
    double dev_pair = 0.0;      // (1/2)||Theta_+ - Theta_-|| for paired runs
    double hamiltonian = 0.0;
    double e2 = 0.0;
    double e4 = 0.0;
    double fit_rate_running = 0.0;
    double pairing = 0.0;       // <F, Theta>_{H^{(alpha-2)/2}} (forced runs)
    std::complex<double> mode_proj;  // <dev, conj(W)> projection
};

struct DiagnosticSeries {
    std::vector<DiagnosticsRow> rows;
    double fitted_rate = 0.0;
    double fit_window_lo = 0.0, fit_window_hi = 0.0;
    double hamiltonian_residual_max = 0.0;  // |dH/dtau - pairing| / |H|
    double tracking_error_max = 0.0;        // Golovkin: ||D - 2 Theta_lin|| / ||2 Theta_lin||
};

/// Hamiltonian (1/2)||Theta||^2_{H^{(alpha-2)/2}} and q-energies.
double hamiltonian(const SpectralState& s);
double q_energy(const SpectralState& s, int q);
double sobolev_pairing(const SpectralState& s, const Eigen::ArrayXXd& f_phys);

/// Angular off-family energy fraction for even-n families via the parity
/// decomposition (exact for n = 2).
double offparity_energy_fraction(const SpectralState& s);

/// Growth of the unstable mode: the symmetric pair Theta_bar +- eps_amp W
/// is evolved without forcing and the deviation is read from the pair
/// difference (the common discrete base drift and even-order nonlinearities
/// cancel); the static ||Theta - Theta_bar|| is recorded alongside.
DiagnosticSeries run_linear_growth(const SmoothVortex& v, const RadialField& W,
                                   std::complex<double> lambda, int n_mode,
                                   double eps_amp, double tau0, double tau1,
                                   std::shared_ptr<SpectralGrid> grid,
                                   double phase = 0.0, int record_every = 4);

/// Golovkin two-solution demo: both branches Theta_bar +- Theta_lin(tau0)
/// share the force G; the difference must track 2 Theta_lin.
DiagnosticSeries run_golovkin_pair(const SmoothVortex& v, const RadialField& W,
                                   std::complex<double> lambda, int n_mode,
                                   const GolovkinForce& G, double tau0, double tau1,
                                   std::shared_ptr<SpectralGrid> grid,
                                   int record_every = 4);

/// Leading eigenmode of the dealiased torus system linearized around the
/// frozen base: power iteration on the linearized flow seeded with the radial
/// mode, returning the invariant-plane fields A = Theta_lin(0),
/// B = (d Theta_lin(0) - Re(lambda) A)/Im(lambda) and lambda itself.
struct DiscreteMode {
    std::complex<double> lambda;
    Eigen::ArrayXXd A, B;  // Theta_lin(tau) = e^{Re l tau}(cos(Im l tau) A + sin(Im l tau) B)
};
DiscreteMode discrete_unstable_mode(const SmoothVortex& v, const RadialField& seed,
                                    int n_mode, std::shared_ptr<SpectralGrid> grid,
                                    double settle_tau = 40.0);

/// Desk-scale Golovkin surrogate inside the discrete system itself: the mode
/// comes from `discrete_unstable_mode` and the shared force absorbs both the
/// base's discrete residual and the quadratic self-interaction, so the
/// branches are exact solutions of the simulated equations and their
/// difference must track 2 Theta_lin to time-integration accuracy.
DiagnosticSeries run_golovkin_pair_discrete(const SmoothVortex& v,
                                            const DiscreteMode& mode,
                                            double amp0, double tau_span,
                                            std::shared_ptr<SpectralGrid> grid,
                                            int record_every = 4);

}  // namespace sqglab
