#pragma once

#include <string>

#include "rcdm/common.hpp"

namespace rcdm {

enum class EnergyModel { NeoHooke, Yeoh };

// Effective (undamaged) material constants plus the two damage parameters.
// lambda/mu are used by the neo-Hookean energy, c1..c3 by the Yeoh energy;
// all of them and D0 share one consistent energy-density unit, Dinf is
// dimensionless in (0,1).
struct MaterialParams {
  EnergyModel kind = EnergyModel::NeoHooke;
  double lambda = 0.0;
  double mu = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double D0 = 1.0;
  double Dinf = 0.0;

  void validate() const;
};

struct Invariants {
  double I1;  // tr C
  double I3;  // det C
  double J;   // sqrt(I3)
};

Invariants invariants(const Mat3& F);

// Effective strain-energy density psi^0(F).
double psi0(const Mat3& F, const MaterialParams& p);

// Uniaxial restriction F = diag[F, 1, 1] and its analytic derivatives.
double psi0_uniaxial(double F, const MaterialParams& p);
double dpsi0_dF(double F, const MaterialParams& p);
double d2psi0_dF2(double F, const MaterialParams& p);

}  // namespace rcdm
