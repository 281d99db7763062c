#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "covmet/channel.hpp"
#include "test_util.hpp"

using namespace covmet;
using testutil::random_cptp;

namespace {

Eigen::Vector4d affine_apply(const PhaseCovariantMap& m, const BlochVector& v) {
  return to_affine_matrix(m) * Eigen::Vector4d(1.0, v.x, v.y, v.z);
}

BlochVector bloch_of(const Mat2& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

Mat2 density_of(const BlochVector& v) {
  Mat2 rho;
  rho << std::complex<double>(1.0 + v.z, 0.0), std::complex<double>(v.x, -v.y),
      std::complex<double>(v.x, v.y), std::complex<double>(1.0 - v.z, 0.0);
  return 0.5 * rho;
}

}  // namespace

TEST_CASE("identity map validates and acts trivially") {
  PhaseCovariantMap id;
  const ValidationReport r = validate_cptp(id);
  CHECK(r.is_cptp);
  CHECK(std::abs(r.margins[0]) < 1e-15);
  CHECK(std::abs(r.margins[1]) < 1e-15);
  CHECK(std::abs(r.margins[2]) < 1e-15);
  const BlochVector v{0.3, -0.2, 0.5};
  const BlochVector w = apply(id, v);
  CHECK(w.x == doctest::Approx(v.x));
  CHECK(w.y == doctest::Approx(v.y));
  CHECK(w.z == doctest::Approx(v.z));
}

TEST_CASE("affine matrix layout") {
  const PhaseCovariantMap m{0.7, 0.5, 0.2, 0.3};
  const Mat4 a = to_affine_matrix(m);
  const double c = std::cos(0.3), s = std::sin(0.3);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(0, 1) == 0.0);
  CHECK(a(1, 1) == doctest::Approx(0.7 * c));
  CHECK(a(1, 2) == doctest::Approx(-0.7 * s));
  CHECK(a(2, 1) == doctest::Approx(0.7 * s));
  CHECK(a(2, 2) == doctest::Approx(0.7 * c));
  CHECK(a(3, 0) == doctest::Approx(0.2));
  CHECK(a(3, 3) == doctest::Approx(0.5));
  CHECK(a(3, 1) == 0.0);
  CHECK(a(1, 3) == 0.0);
}

TEST_CASE("choi diagonal and corners") {
  const PhaseCovariantMap m{0.6, 0.4, 0.1, 0.25};
  const CMat4 c = choi(m);
  CHECK(c(0, 0).real() == doctest::Approx((1 + 0.4 + 0.1) / 2));
  CHECK(c(1, 1).real() == doctest::Approx((1 - 0.4 + 0.1) / 2));
  CHECK(c(2, 2).real() == doctest::Approx((1 - 0.4 - 0.1) / 2));
  CHECK(c(3, 3).real() == doctest::Approx((1 + 0.4 - 0.1) / 2));
  CHECK(std::abs(c(0, 3) - 0.6 * std::exp(std::complex<double>(0, -0.25))) < 1e-14);
  CHECK(std::abs(c(3, 0) - 0.6 * std::exp(std::complex<double>(0, 0.25))) < 1e-14);
  CHECK(c.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("cptp boundary behaviour") {
  // eta_par + kappa = 1 sits exactly on the boundary
  CHECK(validate_cptp({0.3, 0.6, 0.4, 0.0}).is_cptp);
  // just outside, beyond the 1e-9 tolerance
  CHECK_FALSE(validate_cptp({0.3, 0.6, 0.4 + 1e-7, 0.0}).is_cptp);
  // transverse contraction too weak relative to longitudinal
  CHECK_FALSE(validate_cptp({0.9, 0.5, 0.0, 0.0}).is_cptp);
  // choi positivity equals the margin conditions on random draws
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    PhaseCovariantMap m;
    m.eta_perp = uni(rng);
    m.eta_par = -1.0 + 2.0 * uni(rng);
    m.kappa = -1.0 + 2.0 * uni(rng);
    m.phi = 2.0 * M_PI * uni(rng);
    Eigen::SelfAdjointEigenSolver<CMat4> es(choi(m));
    const bool psd = es.eigenvalues().minCoeff() >= -1e-12;
    CHECK(validate_cptp(m).is_cptp == psd);
  }
}

TEST_CASE("kraus completeness and action") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const PhaseCovariantMap m = random_cptp(rng);
    const double t = 0.1 + 2.0 * uni(rng);
    const KrausSet ks = canonical_kraus(m, t);

    Mat2 sum = Mat2::Zero();
    for (const Mat2& k : ks.k) sum += k.adjoint() * k;
    CHECK((sum - Mat2::Identity()).norm() < 1e-12);

    const BlochVector v{uni(rng) - 0.5, uni(rng) - 0.5, uni(rng) - 0.5};
    Mat2 rho_out = Mat2::Zero();
    for (const Mat2& k : ks.k) rho_out += k * density_of(v) * k.adjoint();
    const BlochVector got = bloch_of(rho_out);
    const BlochVector want = apply(m, v);
    CHECK(std::abs(got.x - want.x) < 1e-12);
    CHECK(std::abs(got.y - want.y) < 1e-12);
    CHECK(std::abs(got.z - want.z) < 1e-12);
  }
}

TEST_CASE("kraus frequency derivative matches finite differences") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    PhaseCovariantMap m = random_cptp(rng);
    const double t = 0.7;
    const KrausSet ks = canonical_kraus(m, t);
    const double dw = 1e-6;
    PhaseCovariantMap mp = m, mm = m;
    mp.phi += dw * t;
    mm.phi -= dw * t;
    const KrausSet kp = canonical_kraus(mp, t);
    const KrausSet km = canonical_kraus(mm, t);
    for (int j = 0; j < 4; ++j) {
      const Mat2 fd = (kp.k[j] - km.k[j]) / (2.0 * dw);
      CHECK((fd - ks.dk[j]).norm() < 1e-7);
    }
  }
}

TEST_CASE("kraus throws on non-cptp input") {
  CHECK_THROWS_AS(canonical_kraus({0.3, 0.6, 0.5, 0.0}, 1.0), std::domain_error);
}

TEST_CASE("composition multiplies affine forms") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const PhaseCovariantMap a = random_cptp(rng);
    const PhaseCovariantMap b = random_cptp(rng);
    const PhaseCovariantMap ab = compose(a, b);
    const Mat4 want = to_affine_matrix(a) * to_affine_matrix(b);
    CHECK((to_affine_matrix(ab) - want).norm() < 1e-12);
  }
}

TEST_CASE("normalization flips signs without changing validity") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 50; ++i) {
    PhaseCovariantMap m = random_cptp(rng);
    m.kappa = -std::abs(m.kappa);
    m.eta_perp = -m.eta_perp;
    const PhaseCovariantMap n = normalized(m);
    CHECK(n.kappa >= 0.0);
    CHECK(n.eta_perp >= 0.0);
    CHECK(n.kappa == doctest::Approx(std::abs(m.kappa)));
    CHECK(n.eta_perp == doctest::Approx(std::abs(m.eta_perp)));
    CHECK(std::abs(n.eta_par) == doctest::Approx(std::abs(m.eta_par)));
    CHECK(validate_cptp(n).is_cptp == validate_cptp({std::abs(m.eta_perp), m.eta_par,
                                                     std::abs(m.kappa), m.phi})
                                          .is_cptp);
  }
}

TEST_CASE("operator norms match dense eigensolves") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    Mat2 b;
    b << std::complex<double>(g(rng), g(rng)), std::complex<double>(g(rng), g(rng)),
        std::complex<double>(g(rng), g(rng)), std::complex<double>(g(rng), g(rng));
    const Mat2 h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat2> eh(h);
    const double want_h = eh.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(opnorm_herm2(h) == doctest::Approx(want_h).epsilon(1e-12));
    Eigen::JacobiSVD<Mat2> svd(b);
    const double want_s = svd.singularValues()(0);
    CHECK(std::sqrt(opnorm2_sq(b)) == doctest::Approx(want_s).epsilon(1e-10));
  }
}
