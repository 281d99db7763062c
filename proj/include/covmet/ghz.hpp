#pragma once

#include "covmet/bounds.hpp"
#include "covmet/channel.hpp"
#include "covmet/expansion.hpp"
#include "covmet/lindblad.hpp"

namespace covmet {

// Exact QFI of the N-qubit GHZ state after N independent copies of the map:
//   F = t^2 N^2 eta_perp^(2N) / (2^(-1-N) sum_{s1,s2} (1 + s1 eta_par + s2 kappa)^N).
// Powers are evaluated in log space with explicit signs so large N and
// negative eta_par stay exact. Throws when all four denominator terms vanish.
double ghz_qfi(const PhaseCovariantMap& m, double N, double t);

struct GhzRecord {
  double N = 0.0;
  double t_opt = 0.0;
  double qfi = 0.0;
  double mse_T = 0.0;
  double rescaled_const = 0.0;
  bool converged = false;
};

// Minimizes t / F_ghz over the bracket (log grid + golden section) and
// rescales the optimum with the given exponent: mse_T * N^scaling_exponent.
GhzRecord ghz_optimize_time(const MapTrajectory& traj, double N, double t_lo,
                            double t_hi, double scaling_exponent);

struct GhzAsym {
  double alpha_t = 0.0;
  double constant = 0.0;
};

// Asymptotic GHZ constant: alpha_t solves
//   alpha_t / beta_perp = (ak/2) tanh(ak / (2 alpha_t)) + 2 a_perp - a_par/2
// by bisection on the guaranteed bracket
//   beta_perp [2 a_perp - a_par/2, 2 a_perp - a_par/2 + |ak|/2],
// with ak = alpha_kappa treated as 0 when beta_perp < beta_kappa (the kappa
// term is asymptotically irrelevant then); likewise a_par = 0 when
// beta_perp < beta_par. The limiting rescaled MSE constant is
//   alpha_t^(1/b) exp(2 a_perp/alpha_t) exp(-a_par/(2 alpha_t)) cosh(ak/(2 alpha_t)).
GhzAsym ghz_asymptotic_constant(const ShortTimeExpansion& e);

}  // namespace covmet
