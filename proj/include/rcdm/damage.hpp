#pragma once

#include "rcdm/hyperelastic.hpp"

namespace rcdm {

// Exponential damage function D(beta) = Dinf (1 - exp(-beta/D0)).
double damage(double beta, const MaterialParams& p);

// Antiderivative, normalized so Dbar(0) = 0:
//   Dbar(beta) = Dinf (beta + D0 exp(-beta/D0)) - Dinf D0.
double damage_antiderivative(double beta, const MaterialParams& p);

// Discontinuous-damage update of the internal variable on the uniaxial path:
// beta_{k+1} = max(beta_k, psi0(F_trial)).
double condense_beta(double F_trial, double beta_k, const MaterialParams& p);

// Converged state carried between increments; the (beta_k -> D_k -> Dbar_k)
// triple must stay consistent under the damage function.
struct IncrementAnchor {
  double F_k = 1.0;
  double beta_k = 0.0;
  double D_k = 0.0;
  double Dbar_k = 0.0;

  static IncrementAnchor make(double F_k, double beta_k, const MaterialParams& p);
};

// Condensed incremental stress potential
//   W(F) = psi(F,D) - psi(F_k,D_k) + beta D - beta_k D_k - Dbar + Dbar_k
// with beta = condense_beta(F, beta_k) and psi(F,D) = (1-D) psi0(F).
double incremental_potential(double F_trial, const IncrementAnchor& a,
                             const MaterialParams& p);

}  // namespace rcdm
