#pragma once

#include <functional>

#include "covmet/channel.hpp"
#include "covmet/expansion.hpp"
#include "covmet/lindblad.hpp"

namespace covmet {

// QFI upper bound N^2 t^2 / (1 + N l) for a unital map (kappa = 0) with
// l = (1 + eta_par - 2 eta_perp^2) / (2 eta_perp^2). Throws when eta_perp
// vanishes (no phase information survives; callers handle that branch).
double f_upper_unital(double eta_perp, double eta_par, double N, double t);

// QFI upper bound N^2 t^2 / (1 + N r) for amplitude damping with
// r = kappa / (4 (1 - kappa)). Valid for N >= 2 (the generator ansatz
// behind it needs at least two probes); N = 1 uses f_upper_ad_n1.
double f_upper_ad(double kappa, double N, double t);

// Single-probe amplitude-damping bound 4 t^2 (1-kappa)/(2-kappa)^2 from the
// same generator family with its N = 1 constraint; valid though not tight.
double f_upper_ad_n1(double kappa, double t);

struct PRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Valid mixing probabilities for the unital/amplitude-damping split of the
// (normalized, kappa >= 0) map.
PRange p_range(const PhaseCovariantMap& m);

struct MixtureDecomposition {
  double p = 0.0;
  double eta_perp_u = 0.0;  // may be negative; sign equals a pi rotation
  double eta_par_u = 0.0;
  double kappa_ad = 0.0;
};

// Components of the mixture at probability p; throws when p lies outside
// p_range (message carries the valid interval).
MixtureDecomposition decompose_mixture(const PhaseCovariantMap& m, double p);

struct PPolicy {
  int scan_points = 33;
  bool golden_refine = true;
};

// Mixture bound min over p of p F_unital + (1-p) F_ad, scanned over
// p_range (the upper endpoint, the approximately optimal choice, is always
// a scan point) and refined by golden section around the best sample.
double f_upper_general(const PhaseCovariantMap& m, double N, double t,
                       const PPolicy& policy = {});

struct TimeOpt {
  double t_opt = 0.0;
  double mse_T = 0.0;
  bool converged = false;
  // Diagnostic only: large-N standard-quantum-limit coefficient c with
  // F -> N t^2 / c at the optimal time; reported, not stored anywhere.
  double sql_const = 0.0;
};

// Minimizes t -> t / f_upper_general(traj(t), N, t) over a 200-point
// log-spaced grid refined by golden section (relative tolerance 1e-8).
// Edge minima are reported with converged = false.
TimeOpt optimize_time(const MapTrajectory& traj, double N, double t_lo, double t_hi);

struct AsymptoticConstant {
  double alpha = 0.0;
  double D = 0.0;
  double scaling_exponent = 0.0;  // (2 beta_perp - 1) / beta_perp
};

// Leading coefficient alpha of the combined noise function, the asymptotic
// MSE constant D = alpha^(1/b) b / (b-1)^((b-1)/b) with b = beta_perp, and
// the scaling exponent. Throws on constraint-violating expansions.
AsymptoticConstant asymptotic_constant(const ShortTimeExpansion& e);

// Asymptotically optimal interrogation time (alpha N (b - 1))^(-1/b).
double t_bar(const ShortTimeExpansion& e, double N);

struct GridMin {
  double x = 0.0;
  double value = 0.0;
  bool interior = false;
};

// Shared 1-d minimizer: log-spaced grid scan plus golden-section refinement
// between the neighbours of the best grid point.
GridMin minimize_on_log_grid(const std::function<double(double)>& f, double lo,
                             double hi, int grid_points, double rel_tol = 1e-8);

}  // namespace covmet
