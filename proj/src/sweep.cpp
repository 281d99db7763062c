#include "covmet/sweep.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "covmet/ghz.hpp"
#include "covmet/kraus_opt.hpp"
#include "covmet/oracle.hpp"

namespace covmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (a + 1)) ^
               (0xBF58476D1CE4E5B9ULL * (b + 1));
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  return x;
}

struct Bracket {
  double lo, hi;
};

Bracket bracket_for(const SweepConfig& cfg, const MapTrajectory& traj) {
  Bracket b;
  b.lo = cfg.t_lo_abs > 0.0 ? cfg.t_lo_abs : cfg.t_lo_factor * traj.tau_char;
  b.hi = cfg.t_hi_abs > 0.0 ? cfg.t_hi_abs : cfg.t_hi_factor * traj.tau_char;
  if (!(b.lo > 0.0 && b.hi > b.lo)) {
    throw std::invalid_argument("sweep: invalid time bracket");
  }
  return b;
}

// Numerically optimized bound at one N: a log-spaced t grid with the
// simplex optimizer warm-started from the previous grid point, then golden
// refinement around the best point. Deterministic for a fixed seed since
// each evaluation draws its RNG stream from (seed, n_index, eval counter).
struct NumericCurvePoint {
  double t_opt, mse_T;
  bool interior, minimizer_converged;
};

NumericCurvePoint numeric_bound_point(const MapTrajectory& traj, double N,
                                      const Bracket& br, uint64_t seed,
                                      uint64_t n_index) {
  const int grid_n = 200;
  long counter = 0;
  CMat4 warm = CMat4::Zero();
  bool have_warm = false;
  bool last_converged = false;

  auto mse = [&](double t) {
    MinimizeOptions opts;
    opts.restarts = 5;
    opts.max_evals = 30000;
    opts.seed = mix_seed(seed, n_index, static_cast<uint64_t>(counter++));
    if (have_warm) opts.warm_seeds.push_back(warm);
    const MinimizeResult r = minimize_for_map(traj.eval(t), N, t, opts);
    warm = r.gen_opt;
    have_warm = true;
    last_converged = r.converged;
    return r.f_num > 0.0 ? t / r.f_num : kInf;
  };

  const GridMin gm = minimize_on_log_grid(mse, br.lo, br.hi, grid_n, 1e-6);
  return {gm.x, gm.value, gm.interior, last_converged};
}

SweepRow compute_row(const SweepConfig& cfg, const ModelBundle& model,
                     const Bracket& br, double N, uint64_t n_index) {
  SweepRow row;
  row.N = N;
  row.method = cfg.method;
  const double exponent =
      (2.0 * model.expansion.beta_perp - 1.0) / model.expansion.beta_perp;

  if (cfg.method == "bound-analytic") {
    const TimeOpt to = optimize_time(model.traj, N, br.lo, br.hi);
    row.t_opt = to.t_opt;
    row.mse_T = to.mse_T;
    row.rescaled_const = to.mse_T * std::pow(N, exponent);
    if (!to.converged) row.flag = "edge";
  } else if (cfg.method == "bound-numeric") {
    const NumericCurvePoint pt =
        numeric_bound_point(model.traj, N, br, cfg.seed, n_index);
    row.t_opt = pt.t_opt;
    row.mse_T = pt.mse_T;
    row.rescaled_const = pt.mse_T * std::pow(N, exponent);
    if (!pt.interior) {
      row.flag = "edge";
    } else if (!pt.minimizer_converged) {
      row.flag = "minimizer";
    }
  } else if (cfg.method == "ghz") {
    const GhzRecord rec = ghz_optimize_time(model.traj, N, br.lo, br.hi, exponent);
    row.t_opt = rec.t_opt;
    row.mse_T = rec.mse_T;
    row.rescaled_const = rec.rescaled_const;
    if (!rec.converged) row.flag = "edge";
  } else if (cfg.method == "oracle") {
    const int nq = static_cast<int>(N);
    const CMatX ghz = ghz_state(nq);
    std::vector<int> probes(nq);
    for (int i = 0; i < nq; ++i) probes[i] = i;
    auto mse = [&](double t) {
      const CMatX out = evolve(ghz, model.traj.eval(t), t, probes);
      const double f = qfi(out, omega_derivative(out, t, probes));
      return f > 0.0 ? t / f : kInf;
    };
    const GridMin gm = minimize_on_log_grid(mse, br.lo, br.hi, 200, 1e-8);
    row.t_opt = gm.x;
    row.mse_T = gm.value;
    row.rescaled_const = gm.value * std::pow(N, exponent);
    if (!gm.interior) row.flag = "edge";
  } else {
    throw std::invalid_argument("sweep: unknown method " + cfg.method);
  }
  return row;
}

}  // namespace

ModelBundle make_model(const SweepConfig& cfg) {
  ModelBundle mb;
  if (cfg.model == "sl") {
    mb.traj = sl_trajectory(cfg.sl);
    mb.expansion = sl_expansion(cfg.sl);
  } else if (cfg.model == "semigroup") {
    mb.traj = semigroup_trajectory(cfg.g_plus, cfg.g_minus, cfg.g_z);
    mb.expansion = semigroup_expansion(cfg.g_plus, cfg.g_minus, cfg.g_z);
  } else if (cfg.model == "zeno") {
    mb.traj = zeno_dephasing_trajectory(cfg.zeno_a);
    mb.expansion = zeno_dephasing_expansion(cfg.zeno_a);
  } else {
    throw std::invalid_argument("sweep: unknown model " + cfg.model);
  }
  return mb;
}

std::vector<double> make_n_grid(const SweepConfig& cfg) {
  if (!(cfg.n_min >= 1.0) || !(cfg.n_max >= cfg.n_min) || cfg.n_points < 1) {
    throw std::invalid_argument("sweep: invalid N grid");
  }
  std::vector<double> grid(cfg.n_points);
  for (int i = 0; i < cfg.n_points; ++i) {
    const double frac =
        cfg.n_points == 1 ? 0.0 : static_cast<double>(i) / (cfg.n_points - 1);
    grid[i] = std::round(cfg.n_min * std::pow(cfg.n_max / cfg.n_min, frac));
  }
  return grid;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COVMET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  const ModelBundle model = make_model(cfg);
  const std::vector<double> grid = make_n_grid(cfg);
  if (cfg.method != "bound-analytic" && cfg.method != "bound-numeric" &&
      cfg.method != "ghz" && cfg.method != "oracle") {
    throw std::invalid_argument("sweep: unknown method " + cfg.method);
  }
  if (cfg.method == "oracle" && cfg.n_max > 6.0) {
    throw std::invalid_argument("sweep: oracle method needs n_max <= 6");
  }
  const Bracket br = bracket_for(cfg, model.traj);

  std::vector<SweepRow> rows(grid.size());
  if (cfg.serial) {
    for (size_t i = 0; i < grid.size(); ++i) {
      rows[i] = compute_row(cfg, model, br, grid[i], i);
    }
  } else {
    const int nthreads = resolve_threads(cfg.threads);
    const int count = static_cast<int>(grid.size());
    // exceptions must not unwind out of the parallel region
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (int i = 0; i < count; ++i) {
      try {
        rows[i] = compute_row(cfg, model, br, grid[i], i);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "N,t_opt,mse_T,rescaled_const,method,flag\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.0f,%.12g,%.12g,%.12g,%s,%s\n", r.N, r.t_opt,
                  r.mse_T, r.rescaled_const, r.method.c_str(), r.flag.c_str());
    out += buf;
  }
  return out;
}

}  // namespace covmet
