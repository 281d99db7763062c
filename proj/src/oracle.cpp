#include "covmet/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace covmet {

namespace {

int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;
  if ((Eigen::Index(1) << n) != dim) {
    throw std::invalid_argument("oracle: state dimension is not a power of two");
  }
  return n;
}

// rho -> (K on qubit q) rho (K on qubit q)^dagger, accumulated into out.
void accumulate_kraus(const CMatX& rho, const Mat2& k, int q, int nq, CMatX& out) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index bit = Eigen::Index(1) << (nq - 1 - q);
  // left action: rows, then right action: columns of the intermediate.
  CMatX tmp(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & bit) continue;
    const Eigen::Index r1 = r | bit;
    tmp.row(r) = k(0, 0) * rho.row(r) + k(0, 1) * rho.row(r1);
    tmp.row(r1) = k(1, 0) * rho.row(r) + k(1, 1) * rho.row(r1);
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & bit) continue;
    const Eigen::Index c1 = c | bit;
    const CVecX col0 = tmp.col(c) * std::conj(k(0, 0)) + tmp.col(c1) * std::conj(k(0, 1));
    const CVecX col1 = tmp.col(c) * std::conj(k(1, 0)) + tmp.col(c1) * std::conj(k(1, 1));
    out.col(c) += col0;
    out.col(c1) += col1;
  }
}

}  // namespace

CMatX evolve(const CMatX& state, const PhaseCovariantMap& m, double t,
             const std::vector<int>& probe_indices) {
  const int nq = qubit_count(state.rows());
  if (nq > kOracleMaxQubits) {
    throw std::invalid_argument("oracle: more than 12 qubits");
  }
  const KrausSet ks = canonical_kraus(m, t);
  CMatX rho = state;
  for (int q : probe_indices) {
    if (q < 0 || q >= nq) throw std::invalid_argument("oracle: bad probe index");
    CMatX next = CMatX::Zero(rho.rows(), rho.cols());
    for (const Mat2& k : ks.k) accumulate_kraus(rho, k, q, nq, next);
    rho = std::move(next);
  }
  return rho;
}

CMatX omega_derivative(const CMatX& state_out, double t,
                       const std::vector<int>& probe_indices) {
  const int nq = qubit_count(state_out.rows());
  const Eigen::Index dim = state_out.rows();
  std::vector<double> jz(dim, 0.0);
  for (Eigen::Index r = 0; r < dim; ++r) {
    double d = 0.0;
    for (int q : probe_indices) {
      const Eigen::Index bit = Eigen::Index(1) << (nq - 1 - q);
      d += (r & bit) ? -1.0 : 1.0;
    }
    jz[r] = d;
  }
  CMatX out(dim, dim);
  const std::complex<double> factor(0.0, -t / 2.0);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      out(r, c) = factor * (jz[r] - jz[c]) * state_out(r, c);
    }
  }
  return out;
}

double qfi(const CMatX& state, const CMatX& dstate) {
  Eigen::SelfAdjointEigenSolver<CMatX> es(state);
  const Eigen::VectorXd lam = es.eigenvalues();
  const CMatX g = es.eigenvectors().adjoint() * dstate * es.eigenvectors();
  const double cutoff = 1e-12 * std::abs(state.trace());
  double f = 0.0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    for (Eigen::Index l = 0; l < lam.size(); ++l) {
      const double den = lam(k) + lam(l);
      if (den > cutoff) f += std::norm(g(k, l)) / den;
    }
  }
  return 2.0 * f;
}

CMatX ghz_state(int n) {
  if (n < 1 || n > kOracleMaxQubits) {
    throw std::invalid_argument("oracle: qubit count out of range");
  }
  const Eigen::Index dim = Eigen::Index(1) << n;
  CVecX psi = CVecX::Zero(dim);
  psi(0) = M_SQRT1_2;
  psi(dim - 1) = M_SQRT1_2;
  return pure_density(psi);
}

CMatX pure_density(const CVecX& psi) { return psi * psi.adjoint(); }

}  // namespace covmet
