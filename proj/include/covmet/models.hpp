#pragma once

#include <array>

#include "covmet/expansion.hpp"
#include "covmet/lindblad.hpp"

namespace covmet {

// Post-Markovian qubit model with memory rate gamma, dissipation constant
// gamma0 and mean bath excitation n_bath; R = (gamma0/gamma)(2 n_bath + 1).
struct SlParams {
  double gamma = 0.0;
  double gamma0 = 0.0;
  double n_bath = 0.0;
};

// Closed-form trajectory with analytic derivatives; CPTP for all t >= 0,
// identity at t = 0. tau_char = 1/gamma.
MapTrajectory sl_trajectory(const SlParams& p, double t_max = 0.0);

// (alpha_perp, alpha_par, alpha_kappa) =
// (g g0 (2n+1)/4, g g0 (2n+1)/2, -g g0 / 2), all betas 2.
ShortTimeExpansion sl_expansion(const SlParams& p);

// Closed-form time-local rates of the model (h = 0).
TlmeRates sl_rates(const SlParams& p);

// Constant-rate semigroup: eta_par = exp(-(g+ + g-) t),
// eta_perp = exp(-(g+ + g- + 4 gz) t / 2),
// kappa = (g+ - g-)/(g+ + g-) (1 - exp(-(g+ + g-) t)).
MapTrajectory semigroup_trajectory(double g_plus, double g_minus, double g_z,
                                   double t_max = 0.0);

ShortTimeExpansion semigroup_expansion(double g_plus, double g_minus, double g_z);

// Gaussian transverse decay eta_perp = exp(-(a t)^2), eta_par = 1, kappa = 0;
// the quadratic-decay regime in its simplest form. Requires a > 0.
MapTrajectory zeno_dephasing_trajectory(double a, double t_max = 0.0);

ShortTimeExpansion zeno_dephasing_expansion(double a);

struct ExtractedExpansion {
  ShortTimeExpansion exp;
  std::array<double, 3> r_squared{1.0, 1.0, 1.0};  // perp, par, kappa fits
  bool flagged = false;  // set when any fit has R^2 < 0.9999
};

// Log-log regression of (1 - eta_perp), (1 - eta_par), |kappa| against t on
// 30 points in [1e-6, 1e-3] * tau_char. Components that stay at zero are
// reported with alpha = 0, beta = +infinity.
ExtractedExpansion extract_exponents(const MapTrajectory& traj);

}  // namespace covmet
