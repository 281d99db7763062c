#include "covmet/kraus_opt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace covmet {

namespace {

constexpr int kDim = 16;  // 4 real diagonals + 6 complex off-diagonals
const std::complex<double> kI(0.0, 1.0);

using Params = std::array<double, kDim>;

CMat4 unpack(const Params& x) {
  CMat4 g;
  for (int i = 0; i < 4; ++i) g(i, i) = x[i];
  int k = 4;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      g(i, j) = std::complex<double>(x[k], x[k + 1]);
      g(j, i) = std::conj(g(i, j));
      k += 2;
    }
  }
  return g;
}

Params pack(const CMat4& g) {
  Params x{};
  for (int i = 0; i < 4; ++i) x[i] = g(i, i).real();
  int k = 4;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      x[k] = g(i, j).real();
      x[k + 1] = g(i, j).imag();
      k += 2;
    }
  }
  return x;
}

double eval_params(const Params& x, const KrausObjective& obj) {
  const double v = objective(unpack(x), obj);
  // map any non-finite value to +inf so the simplex ordering stays strict
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct NmResult {
  double f = 0.0;
  Params x{};
  bool converged = false;
  long evals = 0;
};

// Standard Nelder-Mead on the 16 generator parameters. Stops when the best
// value improved by less than 1e-10 (relative) over 50 iterations, or when
// the evaluation budget runs out.
NmResult nelder_mead(const Params& x0, const KrausObjective& obj, long max_evals) {
  constexpr int n = kDim;
  std::array<Params, n + 1> pts;
  std::array<double, n + 1> fs;
  long evals = 0;
  auto eval = [&](const Params& p) {
    ++evals;
    return eval_params(p, obj);
  };

  pts[0] = x0;
  fs[0] = eval(x0);
  for (int i = 0; i < n; ++i) {
    Params p = x0;
    p[i] += std::abs(p[i]) > 1e-12 ? 0.05 * std::abs(p[i]) : 0.1;
    pts[i + 1] = p;
    fs[i + 1] = eval(p);
  }

  std::array<int, n + 1> order;
  auto sort_simplex = [&] {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
  };
  sort_simplex();

  std::array<double, 51> history;
  history.fill(fs[order[0]]);
  int hist_pos = 0;
  long iters = 0;
  bool converged = false;

  while (evals < max_evals) {
    ++iters;
    const int best = order[0], worst = order[n], second = order[n - 1];
    Params centroid{};
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < n; ++d) centroid[d] += pts[i][d];
    }
    for (int d = 0; d < n; ++d) centroid[d] /= n;

    auto blend = [&](double coef) {
      Params p;
      for (int d = 0; d < n; ++d) {
        p[d] = centroid[d] + coef * (centroid[d] - pts[worst][d]);
      }
      return p;
    };

    const Params refl = blend(1.0);
    const double f_refl = eval(refl);
    if (f_refl < fs[best]) {
      const Params expd = blend(2.0);
      const double f_expd = eval(expd);
      if (f_expd < f_refl) {
        pts[worst] = expd;
        fs[worst] = f_expd;
      } else {
        pts[worst] = refl;
        fs[worst] = f_refl;
      }
    } else if (f_refl < fs[second]) {
      pts[worst] = refl;
      fs[worst] = f_refl;
    } else {
      const bool outside = f_refl < fs[worst];
      const Params contr = blend(outside ? 0.5 : -0.5);
      const double f_contr = eval(contr);
      if (f_contr < (outside ? f_refl : fs[worst])) {
        pts[worst] = contr;
        fs[worst] = f_contr;
      } else {
        // shrink toward the best vertex
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int d = 0; d < n; ++d) {
            pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
          }
          fs[i] = eval(pts[i]);
        }
      }
    }
    sort_simplex();

    const double f_best = fs[order[0]];
    const double f_old = history[hist_pos];
    history[hist_pos] = f_best;
    hist_pos = (hist_pos + 1) % 51;
    // test only once a full 51-iteration window has elapsed: early
    // iterations rarely move the best vertex and must not trigger a stop
    if (iters > 51 && f_old - f_best < 1e-10 * std::max(std::abs(f_best), 1e-300)) {
      converged = true;
      break;
    }
  }

  sort_simplex();
  return {fs[order[0]], pts[order[0]], converged, evals};
}

}  // namespace

double objective(const CMat4& gen, const KrausObjective& obj) {
  const std::complex<double> mit = -kI * obj.t;
  Mat2 a = Mat2::Zero();
  Mat2 b = Mat2::Zero();
  for (int i = 0; i < 4; ++i) {
    Mat2 dkp = obj.base.dk[i];
    for (int j = 0; j < 4; ++j) {
      dkp.noalias() += (mit * gen(i, j)) * obj.base.k[j];
    }
    a.noalias() += dkp.adjoint() * dkp;
    b.noalias() += dkp.adjoint() * obj.base.k[i];
  }
  return 4.0 * obj.N * (opnorm_herm2(a) + (obj.N - 1.0) * opnorm2_sq(b));
}

CMat4 unital_ansatz_generator(double eta_perp, double eta_par, double N) {
  const double ep2 = eta_perp * eta_perp;
  const double q = 1.0 + eta_par - 2.0 * ep2;
  double h, g;
  if (std::abs(q) < 1e-9) {
    // noiseless limit: both numerators vanish linearly with q
    h = 0.5 * (N - 1.0);
    g = 0.0;
  } else {
    const double b = ep2 / (N * (1.0 + eta_par) - 2.0 * ep2 * (N - 1.0));
    h = (ep2 - b * (1.0 + eta_par)) / q;
    g = std::sqrt(std::max(0.0, (1.0 + eta_par) * (1.0 + eta_par) / 4.0 - ep2)) *
        (1.0 - 2.0 * b) / q;
  }
  CMat4 gen = CMat4::Zero();
  gen(0, 0) = h;
  gen(1, 1) = -h;
  gen(2, 2) = 0.5;
  gen(3, 3) = 0.5;
  gen(2, 3) = g;
  gen(3, 2) = g;
  return gen;
}

CMat4 ad_ansatz_generator(double kappa, double N) {
  const double b = N >= 2.0
                       ? 2.0 * (1.0 - kappa) / ((N - 1.0) * kappa + 4.0 - 3.0 * kappa)
                       : (1.0 - kappa) / (2.0 - kappa);
  const double h = ((1.0 - kappa) - b * (2.0 - kappa)) / kappa;
  CMat4 gen = CMat4::Zero();
  gen(0, 0) = h;
  gen(2, 2) = b;
  return gen;
}

std::vector<CMat4> ansatz_seeds(const PhaseCovariantMap& m, double N) {
  const PhaseCovariantMap n = normalized(m);
  std::vector<CMat4> seeds;
  if (n.eta_perp > 1e-12) {
    seeds.push_back(unital_ansatz_generator(n.eta_perp, n.eta_par, N));
  }
  if (n.kappa > 1e-12) {
    seeds.push_back(ad_ansatz_generator(n.kappa, N));
  }
  seeds.push_back(CMat4::Zero());
  return seeds;
}

MinimizeResult minimize(const KrausObjective& obj, const MinimizeOptions& opts) {
  std::vector<Params> starts;
  for (const CMat4& g : opts.warm_seeds) starts.push_back(pack(g));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, opts.random_scale);
  while (static_cast<int>(starts.size()) < opts.restarts) {
    Params p;
    for (double& v : p) v = gauss(rng);
    starts.push_back(p);
  }
  if (static_cast<int>(starts.size()) > opts.restarts) {
    starts.resize(std::max(opts.restarts, 1));
  }

  const long per_start = std::max<long>(opts.max_evals / starts.size(), 200);
  MinimizeResult out;
  out.f_num = std::numeric_limits<double>::infinity();
  long used = 0;
  for (const Params& x0 : starts) {
    const long budget = std::min<long>(per_start, opts.max_evals - used);
    if (budget < 200) break;
    const NmResult r = nelder_mead(x0, obj, budget);
    used += r.evals;
    if (r.f < out.f_num) {
      out.f_num = r.f;
      out.gen_opt = unpack(r.x);
      out.converged = r.converged;
    }
  }
  out.evals = used;
  return out;
}

MinimizeResult minimize_for_map(const PhaseCovariantMap& m, double N, double t,
                                const MinimizeOptions& opts) {
  KrausObjective obj;
  obj.base = canonical_kraus(m, t);
  obj.N = N;
  obj.t = t;
  MinimizeOptions o = opts;
  std::vector<CMat4> seeds = ansatz_seeds(m, N);
  seeds.insert(seeds.end(), opts.warm_seeds.begin(), opts.warm_seeds.end());
  o.warm_seeds = std::move(seeds);
  return minimize(obj, o);
}

}  // namespace covmet
