#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "covmet/bounds.hpp"
#include "covmet/models.hpp"
#include "covmet/oracle.hpp"
#include "test_util.hpp"

using namespace covmet;
using testutil::random_cptp;
using testutil::rel_err;

namespace {

PhaseCovariantMap random_unital(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    PhaseCovariantMap m{0.05 + 0.95 * uni(rng), -1.0 + 2.0 * uni(rng), 0.0,
                        2.0 * M_PI * uni(rng)};
    if (validate_cptp(m).margins[2] >= 1e-6) return m;
  }
}

PhaseCovariantMap pure_damping(double kappa) {
  return {std::sqrt(1.0 - kappa), 1.0 - kappa, kappa, 0.0};
}

}  // namespace

TEST_CASE("unital closed form") {
  const double ep = 0.8, el = 0.6, N = 100.0, t = 0.7;
  const double l = (1.0 + el - 2.0 * ep * ep) / (2.0 * ep * ep);
  CHECK(f_upper_unital(ep, el, N, t) ==
        doctest::Approx(N * N * t * t / (1.0 + N * l)).epsilon(1e-14));
  // pure dephasing reduces to the textbook form
  const double ld = (1.0 - ep * ep) / (ep * ep);
  CHECK(f_upper_unital(ep, 1.0, N, t) ==
        doctest::Approx(N * N * t * t / (1.0 + N * ld)).epsilon(1e-14));
  // noiseless: heisenberg growth
  CHECK(f_upper_unital(1.0, 1.0, N, t) == doctest::Approx(N * N * t * t));
  CHECK_THROWS_AS(f_upper_unital(0.0, 0.5, 2.0, 1.0), std::domain_error);
}

TEST_CASE("damping closed form") {
  const double k = 0.3, N = 50.0, t = 1.2;
  const double r = k / (4.0 * (1.0 - k));
  CHECK(f_upper_ad(k, N, t) ==
        doctest::Approx(N * N * t * t / (1.0 + N * r)).epsilon(1e-14));
  CHECK_THROWS_AS(f_upper_ad(k, 1.0, t), std::domain_error);
  CHECK(f_upper_ad_n1(k, t) ==
        doctest::Approx(4.0 * t * t * (1.0 - k) / ((2.0 - k) * (2.0 - k)))
            .epsilon(1e-14));
}

TEST_CASE("mixture decomposition recomposes the original map") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int tested = 0;
  while (tested < 50) {
    PhaseCovariantMap m = normalized(random_cptp(rng));
    if (m.kappa < 1e-3) continue;  // needs a genuine damping part
    const PRange pr = p_range(m);
    if (!(pr.hi > pr.lo + 1e-6)) continue;
    ++tested;
    for (double f : {0.0, 0.5, 1.0}) {
      const double p = pr.lo + f * (pr.hi - pr.lo);
      if (p <= 1e-14) continue;
      const MixtureDecomposition d = decompose_mixture(m, p);
      const double kad = std::min(d.kappa_ad, 1.0);
      CHECK(std::abs((1.0 - p) * kad - m.kappa) < 1e-10);
      CHECK(std::abs(p * d.eta_par_u + (1.0 - p) * (1.0 - kad) - m.eta_par) < 1e-10);
      CHECK(std::abs(p * d.eta_perp_u + (1.0 - p) * std::sqrt(1.0 - kad) -
                     m.eta_perp) < 1e-10);
      CHECK(kad >= -1e-12);
      CHECK(kad <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("mixture decomposition rejects out-of-range weights") {
  const PhaseCovariantMap m = normalized({0.5, 0.4, 0.3, 0.0});
  const PRange pr = p_range(m);
  CHECK_THROWS_AS(decompose_mixture(m, pr.hi + 0.05), std::domain_error);
  CHECK_THROWS_AS(decompose_mixture(m, 1.01), std::domain_error);
}

TEST_CASE("general bound reduces to the closed forms on the pure families") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const PhaseCovariantMap u = random_unital(rng);
    const double N = 1.0 + std::floor(6.0 * uni(rng));
    const double t = 0.1 + 2.0 * uni(rng);
    CHECK(rel_err(f_upper_general(u, N, t), f_upper_unital(u.eta_perp, u.eta_par, N, t)) <
          1e-12);

    const double k = 0.05 + 0.9 * uni(rng);
    const PhaseCovariantMap ad = pure_damping(k);
    const double want = N >= 2.0 ? f_upper_ad(k, N, t) : f_upper_ad_n1(k, t);
    CHECK(rel_err(f_upper_general(ad, N, t), want) < 1e-12);
  }
}

TEST_CASE("general bound dominates the oracle information") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const PhaseCovariantMap m = random_cptp(rng);
    const double t = 0.2 + 1.5 * uni(rng);
    for (int n = 1; n <= 2; ++n) {
      const double bound = f_upper_general(m, n, t);
      std::vector<int> probes(n);
      for (int i = 0; i < n; ++i) probes[i] = i;
      const int dim = 1 << (2 * n);  // probes plus equally many ancillae
      for (int s = 0; s < 15; ++s) {
        CVecX psi(dim);
        for (int i = 0; i < dim; ++i) psi(i) = std::complex<double>(g(rng), g(rng));
        psi.normalize();
        const CMatX rho = evolve(pure_density(psi), m, t, probes);
        const double f = qfi(rho, omega_derivative(rho, t, probes));
        CHECK(bound - f >= -1e-9);
      }
    }
  }
}

TEST_CASE("general bound is convex under channel mixing") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const PhaseCovariantMap a = random_cptp(rng);
    const PhaseCovariantMap b = random_cptp(rng);
    const double w = uni(rng);
    const std::complex<double> ca =
        a.eta_perp * std::exp(std::complex<double>(0, a.phi));
    const std::complex<double> cb =
        b.eta_perp * std::exp(std::complex<double>(0, b.phi));
    const std::complex<double> cm = w * ca + (1.0 - w) * cb;
    PhaseCovariantMap mix;
    mix.eta_perp = std::abs(cm);
    mix.phi = std::arg(cm);
    mix.eta_par = w * a.eta_par + (1.0 - w) * b.eta_par;
    mix.kappa = w * a.kappa + (1.0 - w) * b.kappa;
    const double N = 1.0 + std::floor(5.0 * uni(rng));
    const double t = 0.2 + 1.5 * uni(rng);
    const double lhs = f_upper_general(mix, N, t);
    const double rhs =
        w * f_upper_general(a, N, t) + (1.0 - w) * f_upper_general(b, N, t);
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("grid minimizer finds interior and edge minima") {
  const GridMin inner = minimize_on_log_grid(
      [](double x) { return (std::log(x) - 0.5) * (std::log(x) - 0.5); }, 0.1, 10.0,
      50);
  CHECK(inner.interior);
  CHECK(inner.x == doctest::Approx(std::exp(0.5)).epsilon(1e-6));
  const GridMin edge =
      minimize_on_log_grid([](double x) { return x; }, 0.1, 10.0, 50);
  CHECK_FALSE(edge.interior);
  CHECK(edge.x == doctest::Approx(0.1));
}

TEST_CASE("asymptotic constants for the three model families") {
  // memory model golden values
  const ShortTimeExpansion sl = sl_expansion({0.2, 0.1, 10.0});
  const AsymptoticConstant a = asymptotic_constant(sl);
  CHECK(std::abs(a.alpha - 0.1) < 1e-12);
  CHECK(std::abs(a.D - std::sqrt(0.4)) < 1e-12);
  CHECK(a.scaling_exponent == doctest::Approx(1.5));
  CHECK(t_bar(sl, 1e4) == doctest::Approx(1.0 / std::sqrt(0.1 * 1e4)).epsilon(1e-12));

  // gaussian dephasing: combined coefficient doubles the transverse one
  const AsymptoticConstant z = asymptotic_constant(zeno_dephasing_expansion(1.0));
  CHECK(std::abs(z.alpha - 2.0) < 1e-12);
  CHECK(std::abs(z.D - 2.0 * std::sqrt(2.0)) < 1e-12);
  CHECK(z.scaling_exponent == doctest::Approx(1.5));

  // semigroup dephasing: linear decay, scaling exponent 1
  const AsymptoticConstant s = asymptotic_constant(semigroup_expansion(0.0, 0.0, 0.5));
  CHECK(std::abs(s.alpha - 2.0) < 1e-12);
  CHECK(std::abs(s.D - 2.0) < 1e-12);
  CHECK(s.scaling_exponent == doctest::Approx(1.0));

  // constraint violations are rejected
  ShortTimeExpansion bad = sl;
  bad.beta_par = 1.0;
  CHECK_THROWS_AS(asymptotic_constant(bad), std::domain_error);
}

TEST_CASE("time optimization approaches the asymptotic law") {
  const MapTrajectory traj = zeno_dephasing_trajectory(1.0);
  const ShortTimeExpansion e = zeno_dephasing_expansion(1.0);
  const AsymptoticConstant ac = asymptotic_constant(e);
  const double N = 1e6;
  const TimeOpt to = optimize_time(traj, N, 1e-8, 10.0);
  CHECK(to.converged);
  const double rescaled = to.mse_T * std::pow(N, ac.scaling_exponent);
  CHECK(rel_err(rescaled, ac.D) < 0.03);
  CHECK(rel_err(to.t_opt, t_bar(e, N)) < 0.05);
  CHECK(to.sql_const > 0.0);
}
