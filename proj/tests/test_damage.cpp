#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rcdm/damage.hpp"

using namespace rcdm;

namespace {

MaterialParams nh05() {
  MaterialParams p;
  p.kind = EnergyModel::NeoHooke;
  p.mu = 0.5;
  p.D0 = 0.5;
  p.Dinf = 0.99;
  return p;
}

}  // namespace

TEST_CASE("damage function values") {
  MaterialParams p = nh05();
  CHECK(damage(0.0, p) == doctest::Approx(0.0));

  // beta = D0: Dinf (1 - 1/e), evaluated from the closed form.
  p.D0 = 1.0;
  const double expected = 0.99 * (1.0 - std::exp(-1.0));
  CHECK(damage(1.0, p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.62580).epsilon(1e-4));

  // Saturation: strictly below Dinf while exp(-beta/D0) is representable,
  // equal to it once the exponential underflows.
  CHECK(damage(50.0 * p.D0, p) > 0.9999 * p.Dinf);
  CHECK(damage(30.0 * p.D0, p) < p.Dinf);
  CHECK(damage(1e6, p) <= p.Dinf);
  CHECK_THROWS_AS(damage(-0.1, p), DomainError);
}

TEST_CASE("damage is monotone non-decreasing") {
  const MaterialParams p = nh05();
  double prev = -1.0;
  for (double b = 0.0; b < 10.0; b += 0.01) {
    const double D = damage(b, p);
    CHECK(D >= prev);
    CHECK(D < p.Dinf);
    prev = D;
  }
}

TEST_CASE("antiderivative normalization and closed form") {
  MaterialParams p = nh05();
  CHECK(damage_antiderivative(0.0, p) == doctest::Approx(0.0));

  p.D0 = 1.0;
  const double expected = 0.99 * (1.0 + std::exp(-1.0)) - 0.99;
  CHECK(damage_antiderivative(1.0, p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.36420).epsilon(1e-4));
  CHECK_THROWS_AS(damage_antiderivative(-1e-9, p), DomainError);
}

TEST_CASE("antiderivative differentiates to the damage function") {
  const MaterialParams p = nh05();
  for (double b : {0.1, 0.5, 1.0, 2.5, 7.0}) {
    const double h = 1e-5;
    const double fd =
        (damage_antiderivative(b + h, p) - damage_antiderivative(b - h, p)) / (2 * h);
    CHECK(fd == doctest::Approx(damage(b, p)).epsilon(1e-8));
  }
}

TEST_CASE("condensation takes the running maximum") {
  const MaterialParams p = nh05();
  CHECK(condense_beta(1.0, 0.7, p) == doctest::Approx(0.7));
  CHECK(condense_beta(1.2, 10.0, p) == doctest::Approx(10.0));  // no evolution
  const double psi2 = psi0_uniaxial(2.0, p);
  CHECK(condense_beta(2.0, 0.0, p) == doctest::Approx(psi2).epsilon(1e-12));
  CHECK(psi2 == doctest::Approx(0.40343).epsilon(1e-4));
}

TEST_CASE("condensation is non-decreasing along a load path") {
  const MaterialParams p = nh05();
  double beta = 0.0;
  for (double F : {1.1, 1.5, 1.2, 2.0, 1.0, 0.95, 3.0}) {
    const double next = condense_beta(F, beta, p);
    CHECK(next >= beta);
    beta = next;
  }
}

TEST_CASE("incremental potential vanishes for the increment of nothing") {
  const MaterialParams p = nh05();
  const IncrementAnchor a = IncrementAnchor::make(1.7, psi0_uniaxial(1.7, p), p);
  CHECK(incremental_potential(1.7, a, p) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("frozen-variable slope equals (1-D_k) dpsi0") {
  const MaterialParams p = nh05();
  const double beta_k = psi0_uniaxial(2.5, p);  // anchor beyond the probes
  const IncrementAnchor a = IncrementAnchor::make(2.5, beta_k, p);
  for (double F : {1.4, 1.9, 2.2}) {  // no evolution below the anchor
    const double h = 1e-7;
    const double fd = (incremental_potential(F + h, a, p) -
                       incremental_potential(F - h, a, p)) / (2 * h);
    CHECK(fd == doctest::Approx((1.0 - a.D_k) * dpsi0_dF(F, p)).epsilon(1e-6));
  }
}

TEST_CASE("incremental potential is C1 across the evolution threshold") {
  const MaterialParams p = nh05();
  const double F_thr = 1.6;
  const IncrementAnchor a = IncrementAnchor::make(F_thr, psi0_uniaxial(F_thr, p), p);
  const double h = 1e-7;
  const double slope_lo = (incremental_potential(F_thr, a, p) -
                           incremental_potential(F_thr - h, a, p)) / h;
  const double slope_hi = (incremental_potential(F_thr + h, a, p) -
                           incremental_potential(F_thr, a, p)) / h;
  CHECK(std::abs(slope_hi - slope_lo) < 1e-6 * std::max(1.0, std::abs(slope_lo)));
}

TEST_CASE("dissipation of an accepted increment is non-negative") {
  const MaterialParams p = nh05();
  double beta = 0.0;
  for (double F = 1.0; F <= 4.0; F += 0.05) {
    const double beta_new = condense_beta(F, beta, p);
    const double diss = psi0_uniaxial(F, p) * (damage(beta_new, p) - damage(beta, p));
    CHECK(diss >= 0.0);
    beta = beta_new;
  }
}
