#pragma once

#include <vector>

#include <Eigen/Dense>

#include "covmet/channel.hpp"

namespace covmet {

using CMatX = Eigen::MatrixXcd;
using CVecX = Eigen::VectorXcd;

// Dense brute-force layer: states on M = probes + ancillae qubits, basis
// |0> = north pole (Bloch z = +1), qubit 0 = most significant bit.
// Capped at 12 qubits total (6 probes + 6 ancillae).

inline constexpr int kOracleMaxQubits = 12;

// Applies the channel via its canonical Kraus operators to each listed
// probe qubit; all other qubits are untouched.
CMatX evolve(const CMatX& state, const PhaseCovariantMap& m, double t,
             const std::vector<int>& probe_indices);

// d rho / d omega = -i (t/2) [J_z, rho] with J_z summed over the probes;
// exact because the frequency encoding commutes with the noise.
CMatX omega_derivative(const CMatX& state_out, double t,
                       const std::vector<int>& probe_indices);

// Quantum Fisher information from the eigen-decomposition of rho:
// F = 2 sum_{kl} |<k|drho|l>|^2 / (lambda_k + lambda_l), pairs with
// lambda_k + lambda_l <= 1e-12 * trace dropped.
double qfi(const CMatX& state, const CMatX& dstate);

// (|0...0> + |1...1>)/sqrt(2) on n qubits, as a density matrix.
CMatX ghz_state(int n);

CMatX pure_density(const CVecX& psi);

}  // namespace covmet
