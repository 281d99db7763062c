#include "covmet/ghz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace covmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double ghz_qfi(const PhaseCovariantMap& m, double N, double t) {
  const PhaseCovariantMap n = normalized(m);
  const double terms[4] = {1.0 - n.eta_par - n.kappa, 1.0 + n.eta_par - n.kappa,
                           1.0 - n.eta_par + n.kappa, 1.0 + n.eta_par + n.kappa};
  // signed log-space sum of the four N-th powers
  double logs[4];
  double signs[4];
  double max_log = -kInf;
  for (int i = 0; i < 4; ++i) {
    if (terms[i] == 0.0) {
      logs[i] = -kInf;
      signs[i] = 0.0;
    } else {
      logs[i] = N * std::log(std::abs(terms[i]));
      signs[i] = terms[i] > 0.0 ? 1.0 : (std::fmod(N, 2.0) == 0.0 ? 1.0 : -1.0);
      max_log = std::max(max_log, logs[i]);
    }
  }
  if (max_log == -kInf) {
    throw std::domain_error("ghz_qfi: degenerate denominator (all terms zero)");
  }
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (signs[i] != 0.0) acc += signs[i] * std::exp(logs[i] - max_log);
  }
  if (!(acc > 0.0)) {
    throw std::domain_error("ghz_qfi: denominator not positive");
  }
  const double log_den = max_log + std::log(acc) - (N + 1.0) * M_LN2;
  if (n.eta_perp <= 0.0) return 0.0;
  const double log_num = 2.0 * N * std::log(n.eta_perp);
  return t * t * N * N * std::exp(log_num - log_den);
}

GhzRecord ghz_optimize_time(const MapTrajectory& traj, double N, double t_lo,
                            double t_hi, double scaling_exponent) {
  auto mse = [&](double t) {
    const double f = ghz_qfi(traj.eval(t), N, t);
    return f > 0.0 ? t / f : kInf;
  };
  const GridMin gm = minimize_on_log_grid(mse, t_lo, t_hi, 200, 1e-8);
  GhzRecord out;
  out.N = N;
  out.t_opt = gm.x;
  out.mse_T = gm.value;
  out.qfi = ghz_qfi(traj.eval(gm.x), N, gm.x);
  out.rescaled_const = gm.value * std::pow(N, scaling_exponent);
  out.converged = gm.interior;
  return out;
}

GhzAsym ghz_asymptotic_constant(const ShortTimeExpansion& e) {
  std::string why;
  if (!expansion_constraints_ok(e, &why)) {
    throw std::domain_error("ghz_asymptotic_constant: " + why);
  }
  const double b = e.beta_perp;
  const double a_perp = e.alpha_perp;
  const double a_par = e.beta_par > b ? 0.0 : e.alpha_par;
  const double a_kap = e.beta_kappa > b ? 0.0 : e.alpha_kappa;

  const double base = 2.0 * a_perp - a_par / 2.0;
  const double width = std::abs(a_kap) / 2.0;
  if (!(base >= 0.0)) {
    throw std::domain_error("ghz_asymptotic_constant: empty bracket");
  }
  auto residual = [&](double at) {
    return at / b - (a_kap / 2.0) * std::tanh(a_kap / (2.0 * at)) - base;
  };
  double at;
  if (width == 0.0 || base == 0.0) {
    at = b * base;
  } else {
    double lo = b * base, hi = b * (base + width);
    // residual(lo) <= 0 <= residual(hi); bisection is unconditionally safe
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (residual(mid) <= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-15 * hi) break;
    }
    at = 0.5 * (lo + hi);
  }
  GhzAsym out;
  out.alpha_t = at;
  if (at <= 0.0) {
    throw std::domain_error("ghz_asymptotic_constant: vanishing alpha_t");
  }
  out.constant = std::pow(at, 1.0 / b) * std::exp(2.0 * a_perp / at) *
                 std::exp(-a_par / (2.0 * at)) * std::cosh(a_kap / (2.0 * at));
  return out;
}

}  // namespace covmet
