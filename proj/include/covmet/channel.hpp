#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace covmet {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;

// Phase-covariant qubit map: commutes with rotations about z.
// eta_perp contracts the xy plane, eta_par the z axis, kappa displaces
// along z, phi is the total rotation angle about z (omega*t plus any
// noise-induced rotation).
struct PhaseCovariantMap {
  double eta_perp = 1.0;
  double eta_par = 1.0;
  double kappa = 0.0;
  double phi = 0.0;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ValidationReport {
  bool is_cptp = false;
  // margins[0] = 1 - eta_par - kappa
  // margins[1] = 1 - eta_par + kappa
  // margins[2] = 1 + eta_par - sqrt(4 eta_perp^2 + kappa^2)
  std::array<double, 3> margins{};
};

// Canonical Kraus operators K[0..3] of the map at interrogation time t
// together with their derivatives with respect to the encoded frequency
// (only phi depends on it, d phi / d omega = t).
struct KrausSet {
  std::array<Mat2, 4> k;
  std::array<Mat2, 4> dk;
};

inline constexpr double kCptpTol = 1e-9;
inline constexpr double kChoiEigFloor = -1e-10;

ValidationReport validate_cptp(const PhaseCovariantMap& m);

// 4x4 affine form acting on (1, x, y, z)^T.
Mat4 to_affine_matrix(const PhaseCovariantMap& m);

BlochVector apply(const PhaseCovariantMap& m, const BlochVector& v);

BlochVector rotate_z(const BlochVector& v, double delta);

CMat4 choi(const PhaseCovariantMap& m);

// Throws std::domain_error on non-CPTP input (negative radicand).
KrausSet canonical_kraus(const PhaseCovariantMap& m, double t);

// Parameters of "a after b".
PhaseCovariantMap compose(const PhaseCovariantMap& a, const PhaseCovariantMap& b);

// Estimation-equivalent representative with kappa >= 0 and eta_perp >= 0:
// a z-flip absorbs the sign of kappa, a pi rotation the sign of eta_perp.
// Bound computations use this form.
PhaseCovariantMap normalized(const PhaseCovariantMap& m);

// Operator norm of a Hermitian 2x2 matrix (max |eigenvalue|), closed form.
double opnorm_herm2(const Mat2& a);

// Squared operator norm (max eigenvalue of b^dagger b) of any 2x2 matrix.
double opnorm2_sq(const Mat2& b);

}  // namespace covmet
