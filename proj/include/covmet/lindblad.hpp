#pragma once

#include <array>
#include <functional>
#include <vector>

#include "covmet/channel.hpp"

namespace covmet {

// Time-local master equation rates: Hamiltonian part h(t) and the three
// dissipator rates gamma_plus (absorption), gamma_minus (emission),
// gamma_z (dephasing).
struct TlmeRates {
  std::function<double(double)> h;
  std::function<double(double)> gamma_plus;
  std::function<double(double)> gamma_minus;
  std::function<double(double)> gamma_z;
};

struct RateValues {
  double h = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double gamma_z = 0.0;
};

// Map-parameter trajectory t -> PhaseCovariantMap with Lambda(0) = identity.
// The phi field carries only the noise-induced rotation theta(t); the
// frequency encoding is handled separately by the estimation layer.
// If analytic_derivatives is set, derivs(t) returns
// {d eta_perp, d eta_par, d kappa, d phi} / dt.
struct MapTrajectory {
  std::function<PhaseCovariantMap(double)> eval;
  double t_max = 0.0;
  bool analytic_derivatives = false;
  std::function<std::array<double, 4>(double)> derivs;
  double tau_char = 1.0;
};

struct CpDivisibility {
  bool divisible = true;
  double first_violation = 0.0;  // meaningful only when !divisible
};

inline constexpr double kRateTol = 1e-12;

// Rates at time t from the trajectory. Uses analytic derivatives when the
// trajectory provides them, otherwise central finite differences with step
// 1e-6 * tau_char. Throws std::domain_error when eta_perp or eta_par
// vanish at t (map not invertible there).
RateValues rates_from_trajectory(const MapTrajectory& traj, double t);

// Integrates the quadrature formulas
//   theta(t)    = int_0^t h
//   eta_par(t)  = exp(-int_0^t (g+ + g-))
//   eta_perp(t) = exp(-int_0^t (g+ + g- + 4 gz) / 2)
//   kappa(t)    = int_0^t (g+ - g-)(s) exp(-int_s^t (g+ + g-)) ds
// with adaptive Simpson quadrature (relative tolerance 1e-10). The grid
// fixes the domain [0, grid.back()] and is pre-checked for finite rates;
// a non-finite rate raises std::domain_error naming the first bad point.
MapTrajectory trajectory_from_rates(const TlmeRates& rates,
                                    const std::vector<double>& grid,
                                    double tau_char = 1.0);

// True iff gamma_plus, gamma_minus, gamma_z >= -1e-12 at every grid point;
// otherwise reports the earliest violating time.
CpDivisibility is_cp_divisible(const TlmeRates& rates, const std::vector<double>& grid);

// Adaptive Simpson quadrature of f over [a, b], relative tolerance rel_tol,
// recursion depth capped at 20 (2^20 subintervals).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

}  // namespace covmet
