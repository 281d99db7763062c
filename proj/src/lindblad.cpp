#include "covmet/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace covmet {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= 20 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Scale-setting pass: relative tolerance against the crude estimate,
  // floored to avoid chasing exact zeros of antisymmetric integrands.
  const double scale = std::max({std::abs(whole), std::abs(b - a) * std::abs(fm),
                                 1e-300});
  return simpson_step(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 0);
}

RateValues rates_from_trajectory(const MapTrajectory& traj, double t) {
  const PhaseCovariantMap at = traj.eval(t);
  if (std::abs(at.eta_perp) < 1e-300 || std::abs(at.eta_par) < 1e-300) {
    throw std::domain_error("rates_from_trajectory: map singular at t=" +
                            std::to_string(t));
  }
  std::array<double, 4> d{};
  if (traj.analytic_derivatives && traj.derivs) {
    d = traj.derivs(t);
  } else {
    const double step = 1e-6 * traj.tau_char;
    if (t >= step) {
      const PhaseCovariantMap lo = traj.eval(t - step);
      const PhaseCovariantMap hi = traj.eval(t + step);
      d = {(hi.eta_perp - lo.eta_perp) / (2.0 * step),
           (hi.eta_par - lo.eta_par) / (2.0 * step),
           (hi.kappa - lo.kappa) / (2.0 * step),
           (hi.phi - lo.phi) / (2.0 * step)};
    } else {
      const PhaseCovariantMap hi = traj.eval(t + step);
      d = {(hi.eta_perp - at.eta_perp) / step, (hi.eta_par - at.eta_par) / step,
           (hi.kappa - at.kappa) / step, (hi.phi - at.phi) / step};
    }
  }
  const double rel_par = d[1] / at.eta_par;
  const double rel_perp = d[0] / at.eta_perp;
  RateValues r;
  r.h = d[3];
  r.gamma_plus = 0.5 * (d[2] - rel_par * (at.kappa + 1.0));
  r.gamma_minus = -0.5 * (d[2] + rel_par * (1.0 - at.kappa));
  r.gamma_z = 0.25 * (rel_par - 2.0 * rel_perp);
  return r;
}

MapTrajectory trajectory_from_rates(const TlmeRates& rates,
                                    const std::vector<double>& grid,
                                    double tau_char) {
  if (grid.empty() || grid.back() <= 0.0) {
    throw std::invalid_argument("trajectory_from_rates: empty or invalid grid");
  }
  for (double t : grid) {
    const double vals[4] = {rates.h(t), rates.gamma_plus(t), rates.gamma_minus(t),
                            rates.gamma_z(t)};
    for (double v : vals) {
      if (!std::isfinite(v)) {
        throw std::domain_error("trajectory_from_rates: divergent rate at t=" +
                                std::to_string(t));
      }
    }
  }

  TlmeRates r = rates;  // captured by value below
  MapTrajectory traj;
  traj.t_max = grid.back();
  traj.tau_char = tau_char;
  traj.analytic_derivatives = false;
  traj.eval = [r](double t) -> PhaseCovariantMap {
    if (t == 0.0) return {};
    auto sum_pm = [&r](double s) { return r.gamma_plus(s) + r.gamma_minus(s); };
    const double theta = integrate(r.h, 0.0, t);
    const double ipm_t = integrate(sum_pm, 0.0, t);
    const double half = integrate(
        [&r](double s) {
          return 0.5 * (r.gamma_plus(s) + r.gamma_minus(s) + 4.0 * r.gamma_z(s));
        },
        0.0, t);
    const double kappa = integrate(
        [&](double s) {
          const double ipm_s = integrate(sum_pm, 0.0, s, 1e-12);
          return (r.gamma_plus(s) - r.gamma_minus(s)) * std::exp(ipm_s - ipm_t);
        },
        0.0, t);
    PhaseCovariantMap m;
    m.eta_par = std::exp(-ipm_t);
    m.eta_perp = std::exp(-half);
    m.kappa = kappa;
    m.phi = theta;
    return m;
  };
  return traj;
}

CpDivisibility is_cp_divisible(const TlmeRates& rates,
                               const std::vector<double>& grid) {
  for (double t : grid) {
    if (rates.gamma_plus(t) < -kRateTol || rates.gamma_minus(t) < -kRateTol ||
        rates.gamma_z(t) < -kRateTol) {
      return {false, t};
    }
  }
  return {true, 0.0};
}

}  // namespace covmet
