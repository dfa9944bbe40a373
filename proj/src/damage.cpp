#include "rcdm/damage.hpp"

#include <algorithm>
#include <cmath>

namespace rcdm {

double damage(double beta, const MaterialParams& p) {
  if (beta < 0.0) throw DomainError("damage: beta < 0");
  return p.Dinf * (1.0 - std::exp(-beta / p.D0));
}

double damage_antiderivative(double beta, const MaterialParams& p) {
  if (beta < 0.0) throw DomainError("damage_antiderivative: beta < 0");
  return p.Dinf * (beta + p.D0 * std::exp(-beta / p.D0)) - p.Dinf * p.D0;
}

double condense_beta(double F_trial, double beta_k, const MaterialParams& p) {
  return std::max(beta_k, psi0_uniaxial(F_trial, p));
}

IncrementAnchor IncrementAnchor::make(double F_k, double beta_k,
                                      const MaterialParams& p) {
  IncrementAnchor a;
  a.F_k = F_k;
  a.beta_k = beta_k;
  a.D_k = damage(beta_k, p);
  a.Dbar_k = damage_antiderivative(beta_k, p);
  return a;
}

double incremental_potential(double F_trial, const IncrementAnchor& a,
                             const MaterialParams& p) {
  const double beta = condense_beta(F_trial, a.beta_k, p);
  const double D = damage(beta, p);
  const double Dbar = damage_antiderivative(beta, p);
  const double psi = (1.0 - D) * psi0_uniaxial(F_trial, p);
  const double psi_k = (1.0 - a.D_k) * psi0_uniaxial(a.F_k, p);
  return psi - psi_k + beta * D - a.beta_k * a.D_k - Dbar + a.Dbar_k;
}

}  // namespace rcdm
