#include "covmet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace covmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double rel_tol, double* x_out = nullptr) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(b - a) < rel_tol * (std::abs(a) + std::abs(b) + 1e-30)) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  if (x_out) *x_out = 0.5 * (a + b);
  return std::min(fc, fd);
}

double b_plus_minus(double ep, double el, double k, double sign) {
  const double num = 2.0 * (1.0 - k) * (2.0 + el + sign * 2.0 * ep) -
                     (2.0 * ep + sign * el) * (2.0 * ep + sign * el) -
                     (1.0 - k) * (1.0 - k);
  return num / (4.0 * (1.0 + el + sign * 2.0 * ep));
}

struct TildeParams {
  double ep, el, kt;
};

TildeParams mixture_params(double ep, double el, double k, double p) {
  TildeParams tp{};
  tp.kt = k / (1.0 - p);
  tp.ep = (ep - (1.0 - p) * std::sqrt(std::max(0.0, 1.0 - tp.kt))) / p;
  tp.el = (p - 1.0 + el + k) / p;
  return tp;
}

bool unital_part_cptp(double ep_abs, double el) {
  return 1.0 - el >= -kCptpTol && 1.0 + el - 2.0 * ep_abs >= -kCptpTol;
}

double ad_bound(double kt, double N, double t) {
  if (kt < 1e-15) return N * N * t * t;
  if (kt >= 1.0 - 1e-12) return 0.0;
  return N >= 2.0 ? f_upper_ad(kt, N, t) : f_upper_ad_n1(kt, t);
}

// p F_unital(tilde) + (1-p) F_ad(tilde); +inf when the decomposition at p
// is invalid.
double mixture_value(double ep, double el, double k, double N, double t, double p) {
  if (p <= 1e-14) return ad_bound(k, N, t);
  if (!(p >= 0.0 && p <= 1.0 - k)) return kInf;
  const TildeParams tp = mixture_params(ep, el, k, p);
  if (!std::isfinite(tp.ep) || !std::isfinite(tp.el) || !std::isfinite(tp.kt)) {
    return kInf;
  }
  if (tp.kt < -1e-9 || tp.kt > 1.0 + 1e-9) return kInf;
  const double ep_abs = std::abs(tp.ep);
  if (!unital_part_cptp(ep_abs, tp.el)) return kInf;
  const double fu = ep_abs > 1e-15 ? f_upper_unital(ep_abs, tp.el, N, t) : 0.0;
  const double fa = ad_bound(std::clamp(tp.kt, 0.0, 1.0), N, t);
  return p * fu + (1.0 - p) * fa;
}

}  // namespace

double f_upper_unital(double eta_perp, double eta_par, double N, double t) {
  if (!(eta_perp > 0.0)) {
    throw std::domain_error("f_upper_unital: eta_perp must be positive");
  }
  const double l =
      std::max(0.0, (1.0 + eta_par - 2.0 * eta_perp * eta_perp) /
                        (2.0 * eta_perp * eta_perp));
  return N * N * t * t / (1.0 + N * l);
}

double f_upper_ad(double kappa, double N, double t) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw std::domain_error("f_upper_ad: kappa must lie in [0, 1)");
  }
  if (!(N >= 2.0)) {
    throw std::domain_error("f_upper_ad: needs N >= 2 (use f_upper_ad_n1)");
  }
  const double r = kappa / (4.0 * (1.0 - kappa));
  return N * N * t * t / (1.0 + N * r);
}

double f_upper_ad_n1(double kappa, double t) {
  return 4.0 * t * t * (1.0 - kappa) / ((2.0 - kappa) * (2.0 - kappa));
}

PRange p_range(const PhaseCovariantMap& m) {
  const PhaseCovariantMap n = normalized(m);
  const double ep = n.eta_perp, el = n.eta_par, k = n.kappa;
  const double eta_bar = (1.0 + el - k) / 2.0;
  double lo = b_plus_minus(ep, el, k, +1.0);
  double hi = ep < eta_bar ? 1.0 - k : b_plus_minus(ep, el, k, -1.0);
  lo = std::isfinite(lo) ? std::max(lo, 0.0) : 0.0;
  hi = std::isfinite(hi) ? std::min(hi, 1.0 - k) : 1.0 - k;
  if (hi < lo) std::swap(lo, hi);
  return {lo, hi};
}

MixtureDecomposition decompose_mixture(const PhaseCovariantMap& m, double p) {
  const PhaseCovariantMap n = normalized(m);
  const PRange pr = p_range(n);
  if (!(p >= pr.lo - 1e-12 && p <= pr.hi + 1e-12)) {
    std::ostringstream os;
    os << "decompose_mixture: p=" << p << " outside valid interval [" << pr.lo
       << ", " << pr.hi << "]";
    throw std::domain_error(os.str());
  }
  MixtureDecomposition d;
  d.p = p;
  if (p <= 1e-14) {
    d.kappa_ad = n.kappa;
    d.eta_perp_u = 0.0;
    d.eta_par_u = 1.0;
    return d;
  }
  if (p >= 1.0) {
    d.eta_perp_u = n.eta_perp;
    d.eta_par_u = n.eta_par;
    d.kappa_ad = 0.0;
    return d;
  }
  const TildeParams tp = mixture_params(n.eta_perp, n.eta_par, n.kappa, p);
  d.eta_perp_u = tp.ep;
  d.eta_par_u = tp.el;
  d.kappa_ad = tp.kt;
  return d;
}

double f_upper_general(const PhaseCovariantMap& m, double N, double t,
                       const PPolicy& policy) {
  const PhaseCovariantMap n = normalized(m);
  if (!validate_cptp(n).is_cptp) {
    throw std::domain_error("f_upper_general: map is not CPTP");
  }
  const double ep = n.eta_perp, el = n.eta_par, k = n.kappa;
  if (ep < 1e-300) return 0.0;
  if (k < 1e-12) return f_upper_unital(ep, el, N, t);
  if (k > 1.0 - 1e-12) return 0.0;

  const PRange pr = p_range(n);
  auto val = [&](double p) { return mixture_value(ep, el, k, N, t, p); };

  const int ns = std::max(policy.scan_points, 2);
  std::vector<double> ps(ns), vals(ns);
  double best = kInf;
  int best_i = -1;
  for (int i = 0; i < ns; ++i) {
    ps[i] = pr.lo + (pr.hi - pr.lo) * i / (ns - 1);
    vals[i] = val(ps[i]);
    if (vals[i] < best) {
      best = vals[i];
      best_i = i;
    }
  }
  if (best_i < 0) return ad_bound(k, N, t);  // degenerate interval
  if (policy.golden_refine) {
    const double a = ps[std::max(0, best_i - 1)];
    const double b = ps[std::min(ns - 1, best_i + 1)];
    best = std::min(best, golden_min(val, a, b, 1e-12));
  }
  return best;
}

GridMin minimize_on_log_grid(const std::function<double(double)>& f, double lo,
                             double hi, int grid_points, double rel_tol) {
  if (!(lo > 0.0 && hi > lo)) {
    throw std::invalid_argument("minimize_on_log_grid: need 0 < lo < hi");
  }
  const int n = std::max(grid_points, 3);
  std::vector<double> xs(n), vals(n);
  double best = kInf;
  int best_i = -1;
  for (int i = 0; i < n; ++i) {
    xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    vals[i] = f(xs[i]);
    if (std::isfinite(vals[i]) && vals[i] < best) {
      best = vals[i];
      best_i = i;
    }
  }
  if (best_i < 0) {
    throw std::domain_error("minimize_on_log_grid: objective non-finite everywhere");
  }
  double x = xs[best_i];
  const double a = xs[std::max(0, best_i - 1)];
  const double b = xs[std::min(n - 1, best_i + 1)];
  double x_ref = x;
  const double refined = golden_min(f, a, b, rel_tol, &x_ref);
  GridMin out;
  if (refined < best) {
    out.x = x_ref;
    out.value = refined;
  } else {
    out.x = x;
    out.value = best;
  }
  out.interior = best_i > 0 && best_i < n - 1;
  return out;
}

TimeOpt optimize_time(const MapTrajectory& traj, double N, double t_lo, double t_hi) {
  auto mse = [&](double t) {
    const double f = f_upper_general(traj.eval(t), N, t);
    return f > 0.0 ? t / f : kInf;
  };
  const GridMin gm = minimize_on_log_grid(mse, t_lo, t_hi, 200, 1e-8);
  TimeOpt out;
  out.t_opt = gm.x;
  out.mse_T = gm.value;
  out.converged = gm.interior;
  const double big_n = 1e8;
  const double f_big = f_upper_general(traj.eval(gm.x), big_n, gm.x);
  out.sql_const = f_big > 0.0 ? big_n * gm.x * gm.x / f_big : kInf;
  return out;
}

AsymptoticConstant asymptotic_constant(const ShortTimeExpansion& e) {
  std::string why;
  if (!expansion_constraints_ok(e, &why)) {
    throw std::domain_error("asymptotic_constant: " + why);
  }
  const double b = e.beta_perp;
  double alpha;
  if (e.beta_perp < e.beta_par) {
    alpha = 2.0 * e.alpha_perp;
  } else if (e.beta_par < e.beta_kappa) {
    alpha = 2.0 * e.alpha_perp - e.alpha_par / 2.0;
  } else {
    alpha = std::max(2.0 * e.alpha_perp - e.alpha_par / 2.0 -
                         std::abs(e.alpha_kappa) / 2.0,
                     std::abs(e.alpha_kappa) / 4.0);
  }
  AsymptoticConstant out;
  out.alpha = alpha;
  out.D = std::pow(alpha, 1.0 / b) * b / std::pow(b - 1.0, (b - 1.0) / b);
  out.scaling_exponent = (2.0 * b - 1.0) / b;
  return out;
}

double t_bar(const ShortTimeExpansion& e, double N) {
  const AsymptoticConstant ac = asymptotic_constant(e);
  const double b = e.beta_perp;
  if (!(b > 1.0)) {
    throw std::domain_error("t_bar: needs beta_perp > 1 (no finite local optimum)");
  }
  return std::pow(ac.alpha * N * (b - 1.0), -1.0 / b);
}

}  // namespace covmet
