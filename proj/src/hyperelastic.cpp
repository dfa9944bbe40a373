#include "rcdm/hyperelastic.hpp"

#include <Eigen/LU>
#include <cmath>

namespace rcdm {

void MaterialParams::validate() const {
  if (kind == EnergyModel::NeoHooke) {
    if (mu <= 0.0) throw DomainError("MaterialParams: mu must be positive");
    if (lambda < 0.0) throw DomainError("MaterialParams: lambda must be non-negative");
  } else {
    if (c1 <= 0.0) throw DomainError("MaterialParams: c1 must be positive");
  }
  if (D0 <= 0.0) throw DomainError("MaterialParams: D0 must be positive");
  if (Dinf <= 0.0 || Dinf >= 1.0) throw DomainError("MaterialParams: Dinf must lie in (0,1)");
}

Invariants invariants(const Mat3& F) {
  const Mat3 C = F.transpose() * F;
  Invariants inv;
  inv.I1 = C.trace();
  inv.I3 = C.determinant();
  if (inv.I3 <= 0.0) throw InvalidDeformation("invariants: det C <= 0");
  inv.J = std::sqrt(inv.I3);
  return inv;
}

double psi0(const Mat3& F, const MaterialParams& p) {
  if (F.determinant() <= 0.0) throw InvalidDeformation("psi0: det F <= 0");
  const Invariants inv = invariants(F);
  if (p.kind == EnergyModel::NeoHooke) {
    const double lnJ = std::log(inv.J);
    return 0.5 * p.mu * (inv.I1 - 3.0) - p.mu * lnJ + 0.5 * p.lambda * lnJ * lnJ;
  }
  // Yeoh in the isochoric form of the first invariant.
  const double x = inv.I1 * std::pow(inv.I3, -1.0 / 3.0) - 3.0;
  return p.c1 * x + p.c2 * x * x + p.c3 * x * x * x;
}

double psi0_uniaxial(double F, const MaterialParams& p) {
  if (F <= 0.0) throw InvalidDeformation("psi0_uniaxial: F <= 0");
  if (p.kind == EnergyModel::NeoHooke) {
    const double lnF = std::log(F);
    return 0.5 * p.mu * (F * F - 1.0) - p.mu * lnF + 0.5 * p.lambda * lnF * lnF;
  }
  const double x = (F * F + 2.0) * std::pow(F, -2.0 / 3.0) - 3.0;
  return p.c1 * x + p.c2 * x * x + p.c3 * x * x * x;
}

double dpsi0_dF(double F, const MaterialParams& p) {
  if (F <= 0.0) throw InvalidDeformation("dpsi0_dF: F <= 0");
  if (p.kind == EnergyModel::NeoHooke) {
    return p.mu * (F - 1.0 / F) + p.lambda * std::log(F) / F;
  }
  const double x = (F * F + 2.0) * std::pow(F, -2.0 / 3.0) - 3.0;
  const double dx = 2.0 * std::pow(F, 1.0 / 3.0) -
                    (2.0 / 3.0) * (F * F + 2.0) * std::pow(F, -5.0 / 3.0);
  return (p.c1 + 2.0 * p.c2 * x + 3.0 * p.c3 * x * x) * dx;
}

double d2psi0_dF2(double F, const MaterialParams& p) {
  if (F <= 0.0) throw InvalidDeformation("d2psi0_dF2: F <= 0");
  if (p.kind == EnergyModel::NeoHooke) {
    const double lnF = std::log(F);
    return p.mu * (1.0 + 1.0 / (F * F)) + p.lambda * (1.0 - lnF) / (F * F);
  }
  const double x = (F * F + 2.0) * std::pow(F, -2.0 / 3.0) - 3.0;
  const double dx = 2.0 * std::pow(F, 1.0 / 3.0) -
                    (2.0 / 3.0) * (F * F + 2.0) * std::pow(F, -5.0 / 3.0);
  const double ddx = -(2.0 / 3.0) * std::pow(F, -2.0 / 3.0) +
                     (10.0 / 9.0) * (F * F + 2.0) * std::pow(F, -8.0 / 3.0);
  const double dpsi_dx = p.c1 + 2.0 * p.c2 * x + 3.0 * p.c3 * x * x;
  const double d2psi_dx2 = 2.0 * p.c2 + 6.0 * p.c3 * x;
  return d2psi_dx2 * dx * dx + dpsi_dx * ddx;
}

}  // namespace rcdm
