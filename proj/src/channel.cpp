#include "covmet/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace covmet {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

ValidationReport validate_cptp(const PhaseCovariantMap& m) {
  ValidationReport r;
  if (!std::isfinite(m.eta_perp) || !std::isfinite(m.eta_par) ||
      !std::isfinite(m.kappa) || !std::isfinite(m.phi)) {
    throw std::domain_error("validate_cptp: non-finite map parameters");
  }
  r.margins[0] = 1.0 - m.eta_par - m.kappa;
  r.margins[1] = 1.0 - m.eta_par + m.kappa;
  r.margins[2] =
      1.0 + m.eta_par - std::sqrt(4.0 * m.eta_perp * m.eta_perp + m.kappa * m.kappa);
  r.is_cptp = r.margins[0] >= -kCptpTol && r.margins[1] >= -kCptpTol &&
              r.margins[2] >= -kCptpTol;
  return r;
}

Mat4 to_affine_matrix(const PhaseCovariantMap& m) {
  const double c = std::cos(m.phi), s = std::sin(m.phi);
  Mat4 a = Mat4::Zero();
  a(0, 0) = 1.0;
  a(1, 1) = m.eta_perp * c;
  a(1, 2) = -m.eta_perp * s;
  a(2, 1) = m.eta_perp * s;
  a(2, 2) = m.eta_perp * c;
  a(3, 0) = m.kappa;
  a(3, 3) = m.eta_par;
  return a;
}

BlochVector apply(const PhaseCovariantMap& m, const BlochVector& v) {
  const double c = std::cos(m.phi), s = std::sin(m.phi);
  BlochVector out;
  out.x = m.eta_perp * (c * v.x - s * v.y);
  out.y = m.eta_perp * (s * v.x + c * v.y);
  out.z = m.kappa + m.eta_par * v.z;
  return out;
}

BlochVector rotate_z(const BlochVector& v, double delta) {
  const double c = std::cos(delta), s = std::sin(delta);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

CMat4 choi(const PhaseCovariantMap& m) {
  CMat4 ch = CMat4::Zero();
  ch(0, 0) = (1.0 + m.eta_par + m.kappa) / 2.0;
  ch(1, 1) = (1.0 - m.eta_par + m.kappa) / 2.0;
  ch(2, 2) = (1.0 - m.eta_par - m.kappa) / 2.0;
  ch(3, 3) = (1.0 + m.eta_par - m.kappa) / 2.0;
  ch(0, 3) = m.eta_perp * std::exp(-kI * m.phi);
  ch(3, 0) = m.eta_perp * std::exp(kI * m.phi);
  return ch;
}

KrausSet canonical_kraus(const PhaseCovariantMap& m, double t) {
  const PhaseCovariantMap n = [&] {
    PhaseCovariantMap c = m;
    if (c.eta_perp < 0.0) {
      c.eta_perp = -c.eta_perp;
      c.phi += M_PI;
    }
    return c;
  }();

  const double w1 = (1.0 - n.eta_par + n.kappa) / 2.0;
  const double w2 = (1.0 - n.eta_par - n.kappa) / 2.0;
  const double s = std::sqrt(n.kappa * n.kappa + 4.0 * n.eta_perp * n.eta_perp);
  const double lp = (1.0 + n.eta_par + s) / 2.0;
  const double lm = (1.0 + n.eta_par - s) / 2.0;
  if (w1 < -kCptpTol || w2 < -kCptpTol || lm < -kCptpTol) {
    throw std::domain_error("canonical_kraus: map is not CPTP");
  }
  double ct, st;
  if (s > 1e-300) {
    ct = std::sqrt(std::max((s + n.kappa) / (2.0 * s), 0.0));
    st = std::sqrt(std::max((s - n.kappa) / (2.0 * s), 0.0));
  } else {
    ct = st = M_SQRT1_2;
  }
  const std::complex<double> eip = std::exp(kI * n.phi);
  const double r1 = std::sqrt(std::max(w1, 0.0));
  const double r2 = std::sqrt(std::max(w2, 0.0));
  const double rp = std::sqrt(std::max(lp, 0.0));
  const double rm = std::sqrt(std::max(lm, 0.0));

  KrausSet ks;
  for (auto& k : ks.k) k.setZero();
  for (auto& k : ks.dk) k.setZero();
  ks.k[0](0, 1) = r1;
  ks.k[1](1, 0) = r2;
  ks.k[2](0, 0) = rp * ct;
  ks.k[2](1, 1) = rp * st * eip;
  ks.k[3](0, 0) = -rm * st;
  ks.k[3](1, 1) = rm * ct * eip;
  ks.dk[2](1, 1) = kI * t * rp * st * eip;
  ks.dk[3](1, 1) = kI * t * rm * ct * eip;
  return ks;
}

PhaseCovariantMap compose(const PhaseCovariantMap& a, const PhaseCovariantMap& b) {
  PhaseCovariantMap out;
  out.eta_perp = a.eta_perp * b.eta_perp;
  out.eta_par = a.eta_par * b.eta_par;
  out.kappa = a.kappa + a.eta_par * b.kappa;
  out.phi = a.phi + b.phi;
  return out;
}

PhaseCovariantMap normalized(const PhaseCovariantMap& m) {
  PhaseCovariantMap out = m;
  if (out.eta_perp < 0.0) {
    out.eta_perp = -out.eta_perp;
    out.phi += M_PI;
  }
  if (out.kappa < 0.0) out.kappa = -out.kappa;
  return out;
}

double opnorm_herm2(const Mat2& a) {
  const double c = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double d = 0.5 * (a(0, 0).real() - a(1, 1).real());
  const double r = std::sqrt(d * d + std::norm(a(0, 1)));
  return std::abs(c) + r;
}

double opnorm2_sq(const Mat2& b) {
  const double g11 = std::norm(b(0, 0)) + std::norm(b(1, 0));
  const double g22 = std::norm(b(0, 1)) + std::norm(b(1, 1));
  const std::complex<double> g12 =
      std::conj(b(0, 0)) * b(0, 1) + std::conj(b(1, 0)) * b(1, 1);
  const double c = 0.5 * (g11 + g22);
  const double d = 0.5 * (g11 - g22);
  return c + std::sqrt(d * d + std::norm(g12));
}

}  // namespace covmet
