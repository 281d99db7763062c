#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covmet/bounds.hpp"
#include "covmet/expansion.hpp"
#include "covmet/lindblad.hpp"
#include "covmet/models.hpp"

namespace covmet {

// Precision-curve sweep over an N grid. Rows are computed independently
// per grid point (OpenMP worker pool); a serial reference path runs the
// identical per-row code for testing and benchmarking.
struct SweepConfig {
  std::string model = "sl";  // sl | semigroup | zeno
  SlParams sl{0.2, 0.1, 10.0};
  double g_plus = 0.0, g_minus = 0.0, g_z = 0.5;
  double zeno_a = 1.0;

  // bound-analytic | bound-numeric | ghz | oracle
  std::string method = "bound-analytic";

  int n_points = 40;
  double n_min = 10.0;
  double n_max = 1e6;

  double t_lo_factor = 1e-8;  // bracket = factors * tau_char
  double t_hi_factor = 10.0;
  double t_lo_abs = 0.0;  // absolute overrides when positive
  double t_hi_abs = 0.0;

  uint64_t seed = 0;
  int threads = 0;  // 0: COVMET_THREADS env var, else hardware default
  bool serial = false;
};

struct SweepRow {
  double N = 0.0;
  double t_opt = 0.0;
  double mse_T = 0.0;
  double rescaled_const = 0.0;
  std::string method;
  std::string flag;  // empty when converged
};

struct ModelBundle {
  MapTrajectory traj;
  ShortTimeExpansion expansion;
};

ModelBundle make_model(const SweepConfig& cfg);

std::vector<double> make_n_grid(const SweepConfig& cfg);

// Validates the config (throws std::invalid_argument) and computes all rows.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

// CSV with header N,t_opt,mse_T,rescaled_const,method,flag; LF endings,
// 12 significant digits; byte-stable for a fixed config and seed.
std::string to_csv(const std::vector<SweepRow>& rows);

int resolve_threads(int requested);

}  // namespace covmet
