#pragma once

#include <cstdint>
#include <vector>

#include "covmet/channel.hpp"

namespace covmet {

// Channel-extension objective 4N(||A|| + (N-1)||B||^2) with
// A = sum K'^dag K', B = sum K'^dag K over a Kraus representation shifted
// by a Hermitian generator: K'_i = dK_i - i t sum_j h_ij K_j.
struct KrausObjective {
  KrausSet base;
  double N = 1.0;
  double t = 1.0;
};

double objective(const CMat4& gen, const KrausObjective& obj);

// Analytic generators that reproduce the closed-form bounds: the unital one
// for kappa = 0 maps, the damping one for the amplitude-damping family.
// Both also serve as optimizer seeds on nearby channels.
CMat4 unital_ansatz_generator(double eta_perp, double eta_par, double N);
CMat4 ad_ansatz_generator(double kappa, double N);

// Seeds appropriate for the given map (unital ansatz always; damping ansatz
// when kappa is significant).
std::vector<CMat4> ansatz_seeds(const PhaseCovariantMap& m, double N);

struct MinimizeOptions {
  int restarts = 8;         // includes the seeded starts
  long max_evals = 100000;  // total objective-evaluation budget
  uint64_t seed = 0;        // RNG seed for the random restarts
  double random_scale = 0.1;
  std::vector<CMat4> warm_seeds;  // tried first, before random restarts
};

struct MinimizeResult {
  double f_num = 0.0;
  CMat4 gen_opt;
  bool converged = false;
  long evals = 0;
};

// Derivative-free simplex minimization over the 16 real parameters of the
// Hermitian generator. Restarts: warm seeds first, then random Gaussian
// starts. Convergence: relative improvement < 1e-10 over 50 iterations;
// exceeding the evaluation budget returns the best value found, flagged.
MinimizeResult minimize(const KrausObjective& obj, const MinimizeOptions& opts = {});

// Convenience wrapper: builds the canonical Kraus set of the map at t and
// minimizes with the matching analytic seeds included.
MinimizeResult minimize_for_map(const PhaseCovariantMap& m, double N, double t,
                                const MinimizeOptions& opts = {});

}  // namespace covmet
