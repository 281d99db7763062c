#pragma once

#include <string>

namespace covmet {

// Short-time expansion of the noise parameters:
//   eta_perp(t) = 1 - alpha_perp t^beta_perp + o(t^beta_perp)
//   eta_par(t)  = 1 - alpha_par  t^beta_par  + o(t^beta_par)
//   kappa(t)    =     alpha_kappa t^beta_kappa + o(t^beta_kappa)
// A vanishing alpha is encoded with the matching beta set to +infinity
// (the component never turns on at leading order).
struct ShortTimeExpansion {
  double alpha_perp = 0.0;
  double beta_perp = 1.0;
  double alpha_par = 0.0;
  double beta_par = 1.0;
  double alpha_kappa = 0.0;
  double beta_kappa = 1.0;
};

// CPTP-induced constraints: beta_perp <= beta_par (with alpha_par <= 2
// alpha_perp at equality) and beta_par <= beta_kappa (with |alpha_kappa| <=
// alpha_par at equality). Returns false and fills `why` on violation.
bool expansion_constraints_ok(const ShortTimeExpansion& e, std::string* why = nullptr);

}  // namespace covmet
