#include "covmet/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace covmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// expm1(x)/x with the removable singularity at x = 0 expanded in series.
double em1_over_x(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + x / 2.0 + x * x / 6.0;
  return std::expm1(x) / x;
}

// f(R, tau) = (1 - R) / (1 - exp(-(1-R) tau) R) written as
// 1 / (1 + R tau expm1((R-1) tau)/((R-1) tau)), total in R including the
// removable singularity at R = 1. Decays to 0 for R > 1, tau -> inf.
double f_memory(double r, double tau) {
  return 1.0 / (1.0 + r * tau * em1_over_x((r - 1.0) * tau));
}

// q(R, tau) = exp(-R tau) / f(R, tau); the split form avoids the 0 * inf
// product of the naive expression at large tau.
double q_decay(double r, double tau) {
  const double x = (r - 1.0) * tau;
  if (std::abs(x) < 1e-8) {
    return std::exp(-r * tau) * (1.0 + r * tau * em1_over_x(x));
  }
  return std::exp(-r * tau) + r * (std::exp(-tau) - std::exp(-r * tau)) / (r - 1.0);
}

void check_sl(const SlParams& p) {
  if (!(p.gamma > 0.0) || !(p.gamma0 > 0.0) || !(p.n_bath >= 0.0)) {
    throw std::invalid_argument("sl model: gamma, gamma0 must be positive, n_bath >= 0");
  }
}

double sl_R(const SlParams& p) { return p.gamma0 / p.gamma * (2.0 * p.n_bath + 1.0); }

}  // namespace

MapTrajectory sl_trajectory(const SlParams& p, double t_max) {
  check_sl(p);
  const double R = sl_R(p);
  const double g = p.gamma;
  const double inv2n1 = 1.0 / (2.0 * p.n_bath + 1.0);
  MapTrajectory traj;
  traj.tau_char = 1.0 / g;
  traj.t_max = t_max > 0.0 ? t_max : 40.0 * traj.tau_char;
  traj.analytic_derivatives = true;
  traj.eval = [R, g, inv2n1](double t) {
    const double tau = g * t;
    PhaseCovariantMap m;
    m.eta_perp = q_decay(R / 2.0, tau);
    m.eta_par = q_decay(R, tau);
    m.kappa = -inv2n1 * (1.0 - m.eta_par);
    m.phi = 0.0;
    return m;
  };
  traj.derivs = [R, g, inv2n1](double t) -> std::array<double, 4> {
    const double tau = g * t;
    const double ep = q_decay(R / 2.0, tau);
    const double el = q_decay(R, tau);
    const double dep = g * ep * (f_memory(R / 2.0, tau) - 1.0);
    const double del = g * el * (f_memory(R, tau) - 1.0);
    return {dep, del, del * inv2n1, 0.0};
  };
  return traj;
}

ShortTimeExpansion sl_expansion(const SlParams& p) {
  check_sl(p);
  const double gg0 = p.gamma * p.gamma0;
  ShortTimeExpansion e;
  e.alpha_perp = gg0 * (2.0 * p.n_bath + 1.0) / 4.0;
  e.beta_perp = 2.0;
  e.alpha_par = gg0 * (2.0 * p.n_bath + 1.0) / 2.0;
  e.beta_par = 2.0;
  e.alpha_kappa = -gg0 / 2.0;
  e.beta_kappa = 2.0;
  return e;
}

TlmeRates sl_rates(const SlParams& p) {
  check_sl(p);
  const double R = sl_R(p);
  const double g = p.gamma;
  const double n = p.n_bath;
  const double inv2n1 = 1.0 / (2.0 * n + 1.0);
  TlmeRates r;
  r.h = [](double) { return 0.0; };
  r.gamma_plus = [R, g, n, inv2n1](double t) {
    return g * n * inv2n1 * (1.0 - f_memory(R, g * t));
  };
  r.gamma_minus = [R, g, n, inv2n1](double t) {
    return g * (n + 1.0) * inv2n1 * (1.0 - f_memory(R, g * t));
  };
  r.gamma_z = [R, g](double t) {
    return g / 4.0 * (1.0 - 2.0 * f_memory(R / 2.0, g * t) + f_memory(R, g * t));
  };
  return r;
}

MapTrajectory semigroup_trajectory(double g_plus, double g_minus, double g_z,
                                   double t_max) {
  if (g_plus < 0.0 || g_minus < 0.0 || g_z < 0.0) {
    throw std::invalid_argument("semigroup_trajectory: rates must be nonnegative");
  }
  const double gpm = g_plus + g_minus;
  const double rate_perp = gpm / 2.0 + 2.0 * g_z;
  const double diff = g_plus - g_minus;
  MapTrajectory traj;
  traj.tau_char = rate_perp > 0.0 ? 1.0 / rate_perp : 1.0;
  traj.t_max = t_max > 0.0 ? t_max : 40.0 * traj.tau_char;
  traj.analytic_derivatives = true;
  traj.eval = [gpm, rate_perp, diff](double t) {
    PhaseCovariantMap m;
    m.eta_par = std::exp(-gpm * t);
    m.eta_perp = std::exp(-rate_perp * t);
    m.kappa = diff * t * em1_over_x(-gpm * t);
    m.phi = 0.0;
    return m;
  };
  traj.derivs = [gpm, rate_perp, diff](double t) -> std::array<double, 4> {
    return {-rate_perp * std::exp(-rate_perp * t), -gpm * std::exp(-gpm * t),
            diff * std::exp(-gpm * t), 0.0};
  };
  return traj;
}

ShortTimeExpansion semigroup_expansion(double g_plus, double g_minus, double g_z) {
  const double gpm = g_plus + g_minus;
  const double rate_perp = gpm / 2.0 + 2.0 * g_z;
  ShortTimeExpansion e;
  e.alpha_perp = rate_perp;
  e.beta_perp = rate_perp > 0.0 ? 1.0 : kInf;
  e.alpha_par = gpm;
  e.beta_par = gpm > 0.0 ? 1.0 : kInf;
  e.alpha_kappa = g_plus - g_minus;
  e.beta_kappa = gpm > 0.0 ? 1.0 : kInf;
  return e;
}

MapTrajectory zeno_dephasing_trajectory(double a, double t_max) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("zeno_dephasing_trajectory: a must be positive");
  }
  MapTrajectory traj;
  traj.tau_char = 1.0 / a;
  traj.t_max = t_max > 0.0 ? t_max : 40.0 * traj.tau_char;
  traj.analytic_derivatives = true;
  traj.eval = [a](double t) {
    PhaseCovariantMap m;
    m.eta_perp = std::exp(-(a * t) * (a * t));
    return m;
  };
  traj.derivs = [a](double t) -> std::array<double, 4> {
    return {-2.0 * a * a * t * std::exp(-(a * t) * (a * t)), 0.0, 0.0, 0.0};
  };
  return traj;
}

ShortTimeExpansion zeno_dephasing_expansion(double a) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("zeno_dephasing_expansion: a must be positive");
  }
  ShortTimeExpansion e;
  e.alpha_perp = a * a;
  e.beta_perp = 2.0;
  e.alpha_par = 0.0;
  e.beta_par = kInf;
  e.alpha_kappa = 0.0;
  e.beta_kappa = kInf;
  return e;
}

namespace {

struct Fit {
  double alpha = 0.0;
  double beta = kInf;
  double r2 = 1.0;
  bool present = false;
};

Fit fit_power_law(const std::vector<double>& ts, const std::vector<double>& ys) {
  Fit out;
  double ymax = 0.0;
  for (double y : ys) ymax = std::max(ymax, std::abs(y));
  if (ymax < 1e-300) return out;  // component stays at zero
  out.present = true;
  const int n = static_cast<int>(ts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(ts[i]);
    const double y = std::log(std::abs(ys[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - beta * sx) / n;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(ts[i]);
    const double y = std::log(std::abs(ys[i]));
    const double d = y - (beta * x + intercept);
    ss_res += d * d;
  }
  const double ss_tot = syy - sy * sy / n;
  out.alpha = std::exp(intercept);
  out.beta = std::round(beta * 1000.0) / 1000.0;
  out.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return out;
}

}  // namespace

ExtractedExpansion extract_exponents(const MapTrajectory& traj) {
  const int n = 30;
  std::vector<double> ts(n), y_perp(n), y_par(n), y_kappa(n);
  const double lo = 1e-6 * traj.tau_char, hi = 1e-3 * traj.tau_char;
  double kappa_mid = 0.0;
  for (int i = 0; i < n; ++i) {
    ts[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    const PhaseCovariantMap m = traj.eval(ts[i]);
    y_perp[i] = 1.0 - m.eta_perp;
    y_par[i] = 1.0 - m.eta_par;
    y_kappa[i] = m.kappa;
    if (i == n / 2) kappa_mid = m.kappa;
  }
  const Fit fp = fit_power_law(ts, y_perp);
  const Fit fl = fit_power_law(ts, y_par);
  const Fit fk = fit_power_law(ts, y_kappa);

  ExtractedExpansion out;
  out.exp.alpha_perp = fp.alpha;
  out.exp.beta_perp = fp.beta;
  out.exp.alpha_par = fl.alpha;
  out.exp.beta_par = fl.beta;
  out.exp.alpha_kappa = kappa_mid < 0.0 ? -fk.alpha : fk.alpha;
  out.exp.beta_kappa = fk.beta;
  out.r_squared = {fp.r2, fl.r2, fk.r2};
  const double min_r2 = 0.9999;
  out.flagged = (fp.present && fp.r2 < min_r2) || (fl.present && fl.r2 < min_r2) ||
                (fk.present && fk.r2 < min_r2);
  return out;
}

bool expansion_constraints_ok(const ShortTimeExpansion& e, std::string* why) {
  auto fail = [why](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!(e.alpha_perp >= 0.0) || !(e.alpha_par >= 0.0)) {
    return fail("alphas for eta components must be nonnegative");
  }
  if (!(e.beta_perp >= 1.0) || !(e.beta_par >= 1.0) || !(e.beta_kappa >= 1.0)) {
    return fail("betas must be >= 1");
  }
  if (e.beta_perp > e.beta_par) return fail("beta_perp must not exceed beta_par");
  if (e.beta_perp == e.beta_par && e.alpha_par > 2.0 * e.alpha_perp + 1e-12) {
    return fail("alpha_par must not exceed 2 alpha_perp when beta_perp = beta_par");
  }
  if (e.beta_par > e.beta_kappa) return fail("beta_par must not exceed beta_kappa");
  if (e.beta_par == e.beta_kappa &&
      std::abs(e.alpha_kappa) > e.alpha_par + 1e-12) {
    return fail("|alpha_kappa| must not exceed alpha_par when beta_par = beta_kappa");
  }
  return true;
}

}  // namespace covmet
