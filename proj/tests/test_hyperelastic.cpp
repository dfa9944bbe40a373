#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rcdm/damage.hpp"

using namespace rcdm;

namespace {

MaterialParams neo_hooke(double lambda, double mu, double D0 = 0.5,
                         double Dinf = 0.99) {
  MaterialParams p;
  p.kind = EnergyModel::NeoHooke;
  p.lambda = lambda;
  p.mu = mu;
  p.D0 = D0;
  p.Dinf = Dinf;
  return p;
}

MaterialParams yeoh(double c1, double c2, double c3, double D0 = 1.0,
                    double Dinf = 0.99) {
  MaterialParams p;
  p.kind = EnergyModel::Yeoh;
  p.c1 = c1;
  p.c2 = c2;
  p.c3 = c3;
  p.D0 = D0;
  p.Dinf = Dinf;
  return p;
}

double fd_first(double F, const MaterialParams& p) {
  const double h = 1e-6 * std::max(1.0, F);
  return (psi0_uniaxial(F + h, p) - psi0_uniaxial(F - h, p)) / (2 * h);
}

double fd_second(double F, const MaterialParams& p) {
  const double h = 1e-6 * std::max(1.0, F);
  return (dpsi0_dF(F + h, p) - dpsi0_dF(F - h, p)) / (2 * h);
}

}  // namespace

TEST_CASE("invariants of the identity and a stretch") {
  const Invariants i0 = invariants(Mat3::Identity());
  CHECK(i0.I1 == doctest::Approx(3.0));
  CHECK(i0.I3 == doctest::Approx(1.0));
  CHECK(i0.J == doctest::Approx(1.0));

  Mat3 F = Mat3::Identity();
  F(0, 0) = 2.0;
  const Invariants i1 = invariants(F);
  CHECK(i1.I1 == doctest::Approx(6.0));
  CHECK(i1.J == doctest::Approx(2.0));
}

TEST_CASE("psi0 vanishes in the reference configuration") {
  CHECK(psi0(Mat3::Identity(), neo_hooke(0.3, 0.5)) == doctest::Approx(0.0));
  CHECK(psi0(Mat3::Identity(), yeoh(6, 1, 900)) == doctest::Approx(0.0));
  CHECK(psi0_uniaxial(1.0, neo_hooke(0.0, 0.5)) == doctest::Approx(0.0));
}

TEST_CASE("neo-Hooke closed-form value at F = diag[2,1,1]") {
  // mu/2 (I1-3) - mu ln J with lambda = 0, mu = 0.5.
  const double expected = 0.25 * (6.0 - 3.0) - 0.5 * std::log(2.0);
  CHECK(expected == doctest::Approx(0.40343).epsilon(1e-4));
  Mat3 F = Mat3::Identity();
  F(0, 0) = 2.0;
  CHECK(psi0(F, neo_hooke(0.0, 0.5)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(psi0_uniaxial(2.0, neo_hooke(0.0, 0.5)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Yeoh value from independent symbolic evaluation") {
  // I1 = 1.21 + 2, I3 = 1.21, x = I1 I3^{-1/3} - 3.
  const double I1 = 3.21, I3 = 1.21;
  const double x = I1 * std::pow(I3, -1.0 / 3.0) - 3.0;
  const double expected = 6 * x + 1 * x * x + 900 * x * x * x;
  Mat3 F = Mat3::Identity();
  F(0, 0) = 1.1;
  CHECK(psi0(F, yeoh(6, 1, 900)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(psi0_uniaxial(1.1, yeoh(6, 1, 900)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("uniaxial restriction equals the 3x3 energy on diag[F,1,1]") {
  for (double F : {0.85, 1.0, 1.3, 2.7, 6.0}) {
    Mat3 F3 = Mat3::Identity();
    F3(0, 0) = F;
    for (const auto& p : {neo_hooke(0.4, 0.7), yeoh(1.0, 0.2, 2.0)})
      CHECK(psi0_uniaxial(F, p) == doctest::Approx(psi0(F3, p)).epsilon(1e-13));
  }
}

TEST_CASE("stress-free reference and analytic first derivative") {
  const MaterialParams p = neo_hooke(0.0, 0.5);
  CHECK(dpsi0_dF(1.0, p) == doctest::Approx(0.0));
  CHECK(dpsi0_dF(2.0, p) == doctest::Approx(0.5 * (2.0 - 0.5)).epsilon(1e-12));
  CHECK(dpsi0_dF(1.0, yeoh(6, 1, 900)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("derivatives match central finite differences at random stretches") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uF(0.8, 5.0);
  for (const auto& p : {neo_hooke(0.0, 0.5), neo_hooke(0.5, 1.0), yeoh(6, 1, 900),
                        yeoh(1.0, 0.2, 2.0)}) {
    for (int i = 0; i < 20; ++i) {
      const double F = uF(rng);
      CHECK(dpsi0_dF(F, p) == doctest::Approx(fd_first(F, p)).epsilon(1e-6));
      CHECK(d2psi0_dF2(F, p) == doctest::Approx(fd_second(F, p)).epsilon(1e-6));
    }
  }
}

TEST_CASE("psi0 is strictly increasing in tension") {
  for (const auto& p : {neo_hooke(0.0, 0.5), neo_hooke(0.5, 1.0), yeoh(6, 1, 900),
                        yeoh(50, 200, 20000, 12.5, 0.88)}) {
    double prev = psi0_uniaxial(1.0, p);
    for (double F = 1.05; F < 10.0; F += 0.05) {
      const double v = psi0_uniaxial(F, p);
      CHECK(v > prev);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("invalid deformations are rejected") {
  CHECK_THROWS_AS(psi0_uniaxial(0.0, neo_hooke(0, 0.5)), InvalidDeformation);
  CHECK_THROWS_AS(psi0_uniaxial(-1.0, neo_hooke(0, 0.5)), InvalidDeformation);
  CHECK_THROWS_AS(dpsi0_dF(-0.3, yeoh(6, 1, 900)), InvalidDeformation);
  Mat3 F = Mat3::Identity();
  F(0, 0) = -1.0;
  CHECK_THROWS_AS(psi0(F, neo_hooke(0, 0.5)), InvalidDeformation);
}

TEST_CASE("parameter validation") {
  MaterialParams p = neo_hooke(0.0, 0.5);
  CHECK_NOTHROW(p.validate());
  p.Dinf = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.Dinf = 0.9;
  p.D0 = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  MaterialParams y = yeoh(0.0, 1.0, 1.0);
  CHECK_THROWS_AS(y.validate(), DomainError);
}
