#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "covmet/ghz.hpp"
#include "covmet/models.hpp"
#include "covmet/oracle.hpp"
#include "test_util.hpp"

using namespace covmet;
using testutil::random_cptp;
using testutil::rel_err;

TEST_CASE("noiseless ghz information is heisenberg") {
  for (double n : {1.0, 2.0, 7.0, 100.0}) {
    CHECK(ghz_qfi(PhaseCovariantMap{}, n, 0.9) ==
          doctest::Approx(n * n * 0.81).epsilon(1e-13));
  }
}

TEST_CASE("frozen two-probe value") {
  // eta_perp 0.9, eta_par 0.8, kappa 0.1, t 1, N 2:
  // numerator 4 * 0.9^4, denominator 2^-3 (0.1^2 + 1.7^2 + 0.3^2 + 1.9^2)
  const PhaseCovariantMap m{0.9, 0.8, 0.1, 0.0};
  CHECK(ghz_qfi(m, 2.0, 1.0) == doctest::Approx(2.6244 / 0.825).epsilon(1e-13));
}

TEST_CASE("formula matches the dense oracle") {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    const PhaseCovariantMap m = random_cptp(rng);
    const double t = 0.1 + 2.0 * uni(rng);
    for (int n = 1; n <= 4; ++n) {
      std::vector<int> probes(n);
      for (int i = 0; i < n; ++i) probes[i] = i;
      const CMatX rho = evolve(ghz_state(n), m, t, probes);
      const double want = qfi(rho, omega_derivative(rho, t, probes));
      CHECK(rel_err(ghz_qfi(m, n, t), want) < 1e-9);
    }
  }
}

TEST_CASE("large probe numbers stay exact in log space") {
  // gaussian dephasing at its optimal time: F = (N/4) exp(-1/2) exactly
  const double N = 1e5;
  const double t = 1.0 / (2.0 * std::sqrt(N));
  const PhaseCovariantMap m{std::exp(-t * t), 1.0, 0.0, 0.0};
  // the eta_perp input rounding is amplified by 2N in the exponent
  CHECK(ghz_qfi(m, N, t) ==
        doctest::Approx(N / 4.0 * std::exp(-0.5)).epsilon(1e-9));
  // far past the optimum the value underflows gracefully to zero
  const double tiny = ghz_qfi({0.5, 1.0, 0.0, 0.0}, 2000.0, 1.0);
  CHECK(tiny >= 0.0);
  CHECK(std::isfinite(tiny));
}

TEST_CASE("time optimization on gaussian dephasing matches the closed form") {
  // F = N^2 t^2 exp(-2 N (a t)^2): optimum t* = 1/(2 a sqrt(N)),
  // rescaled constant 2 a sqrt(e)
  const double a = 1.0, N = 1e4;
  const MapTrajectory traj = zeno_dephasing_trajectory(a);
  const GhzRecord rec = ghz_optimize_time(traj, N, 1e-8, 10.0, 1.5);
  CHECK(rec.converged);
  CHECK(rel_err(rec.t_opt, 1.0 / (2.0 * a * std::sqrt(N))) < 1e-4);
  CHECK(rel_err(rec.rescaled_const, 2.0 * a * std::sqrt(M_E)) < 1e-6);
  CHECK(rec.qfi == doctest::Approx(ghz_qfi(traj.eval(rec.t_opt), N, rec.t_opt)));
}

TEST_CASE("asymptotic constant solves the stationarity condition") {
  const ShortTimeExpansion sl = sl_expansion({0.2, 0.1, 10.0});
  const GhzAsym ga = ghz_asymptotic_constant(sl);
  CHECK(ga.alpha_t == doctest::Approx(0.210237781121).epsilon(1e-9));
  CHECK(ga.constant == doctest::Approx(0.755753).epsilon(1e-5));
  // residual of the transcendental equation at the returned root
  const double b = sl.beta_perp;
  const double base = 2.0 * sl.alpha_perp - 0.5 * sl.alpha_par;
  const double res = ga.alpha_t / b -
                     0.5 * sl.alpha_kappa *
                         std::tanh(sl.alpha_kappa / (2.0 * ga.alpha_t)) -
                     base;
  CHECK(std::abs(res) < 1e-12);

  // pure gaussian dephasing collapses to the closed form 2 a sqrt(e)
  const GhzAsym gz = ghz_asymptotic_constant(zeno_dephasing_expansion(1.0));
  CHECK(gz.alpha_t == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(gz.constant == doctest::Approx(2.0 * std::sqrt(M_E)).epsilon(1e-12));

  // semigroup dephasing gives the classic 2 gamma e
  const GhzAsym gs = ghz_asymptotic_constant(semigroup_expansion(0.0, 0.0, 0.5));
  CHECK(gs.constant == doctest::Approx(2.0 * M_E).epsilon(1e-12));
}

TEST_CASE("finite-size curve approaches its own asymptote") {
  const SlParams p{0.2, 0.1, 10.0};
  const MapTrajectory traj = sl_trajectory(p);
  const GhzAsym ga = ghz_asymptotic_constant(sl_expansion(p));
  const GhzRecord rec = ghz_optimize_time(traj, 1e5, 1e-8 * traj.tau_char,
                                          10.0 * traj.tau_char, 1.5);
  CHECK(rec.converged);
  CHECK(rel_err(rec.rescaled_const, ga.constant) < 0.02);
}

TEST_CASE("degenerate corners") {
  // two of the four denominator terms may vanish without harm
  CHECK(std::isfinite(ghz_qfi({0.0, -1.0, 0.0, 0.0}, 2.0, 1.0)));
  // a fully dephased map carries no phase information at all
  CHECK(ghz_qfi({0.0, 0.5, 0.0, 0.0}, 3.0, 1.0) == 0.0);
}
