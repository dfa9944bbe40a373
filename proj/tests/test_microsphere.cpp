#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rcdm/microsphere.hpp"

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

const std::vector<std::string> kSchemes = {"BazantOh-2x21", "BazantOh-61x2",
                                           "SpherialDesign-225"};

}  // namespace

TEST_CASE("scheme tables load, normalize, and satisfy the structural identities") {
  const int expected_sizes[] = {42, 122, 225};
  for (std::size_t i = 0; i < kSchemes.size(); ++i) {
    const SphereScheme s = scheme_by_name(kSchemes[i]);
    CHECK(s.size() == expected_sizes[i]);
    double wsum = 0.0;
    Mat3 dyad = Mat3::Zero();
    for (int a = 0; a < s.size(); ++a) {
      CHECK(std::abs(s.directions[a].norm() - 1.0) < 1e-12);
      wsum += s.weights[a];
      dyad += s.weights[a] * s.directions[a] * s.directions[a].transpose();
    }
    CHECK(std::abs(wsum - 1.0) < 1e-12);
    CHECK((dyad - Mat3::Identity() / 3.0).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK_THROWS_AS(scheme_by_name("nope"), InputError);
}

TEST_CASE("a scheme violating the dyad identity is rejected") {
  std::istringstream bad("1 0 0 0.5\n0 1 0 0.5\n");
  CHECK_THROWS_AS(load_scheme(bad, "bad"), InputError);
  std::istringstream malformed("1 0 0\n");
  CHECK_THROWS_AS(load_scheme(malformed, "malformed"), InputError);
}

TEST_CASE("fiber stretch") {
  Mat3 F = Mat3::Identity();
  CHECK(fiber_stretch(F, Vec3(0, 0, 1)) == doctest::Approx(1.0));
  F(0, 0) = 2.0;
  CHECK(fiber_stretch(F, Vec3(1, 0, 0)) == doctest::Approx(2.0));
  const Vec3 diag = Vec3(1, 1, 1).normalized();
  CHECK(fiber_stretch(F, diag) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("plane strain embedding") {
  CHECK((plane_strain_embed(Mat2::Identity()) - Mat3::Identity()).norm() ==
        doctest::Approx(0.0));
  Mat2 F2;
  F2 << 1.2, 0.0, 0.0, 0.9;
  const Mat3 F = plane_strain_embed(F2);
  CHECK(F(0, 0) == doctest::Approx(1.2));
  CHECK(F(1, 1) == doctest::Approx(0.9));
  CHECK(F(2, 2) == doctest::Approx(1.0));
  CHECK(F.determinant() == doctest::Approx(F2.determinant()));
  Mat2 bad;
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(plane_strain_embed(bad), InvalidDeformation);
}

TEST_CASE("stress-free reference state") {
  auto table = make_potential_table(nh05(), GridSpec{0.9, 20.0, 2001});
  for (const auto& name : kSchemes) {
    const SphereScheme s = scheme_by_name(name);
    const auto bundle = FiberBundleHistory::sized_for(s);
    const auto [r, b] =
        homogenize(Mat3::Identity(), bundle, s, *table, ModelVariant::Reconvexified);
    CHECK(r.P.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("uniaxial stretch with a symmetric scheme: diagonal P, P22 = P33") {
  auto table = make_potential_table(nh05(), GridSpec{0.9, 20.0, 2001});
  for (const auto& name : {std::string("BazantOh-2x21"), std::string("BazantOh-61x2")}) {
    const SphereScheme s = scheme_by_name(name);
    const auto bundle = FiberBundleHistory::sized_for(s);
    Mat3 F = Mat3::Identity();
    F(0, 0) = 1.5;
    const auto [r, b] = homogenize(F, bundle, s, *table, ModelVariant::Reconvexified);
    CHECK(std::abs(r.P(0, 1)) < 1e-8);
    CHECK(std::abs(r.P(0, 2)) < 1e-8);
    CHECK(std::abs(r.P(1, 0)) < 1e-8);
    CHECK(r.P(1, 1) == doctest::Approx(r.P(2, 2)).epsilon(1e-8));
    CHECK(r.P(0, 0) > 0.0);
  }
}

TEST_CASE("objectivity under 90 degree rotations") {
  auto table = make_potential_table(nh05(), GridSpec{0.9, 20.0, 2001});
  Mat3 F = Mat3::Identity();
  F(0, 0) = 1.4;
  F(0, 1) = 0.1;
  Mat3 Qz, Qx;
  Qz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  Qx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  for (const auto& name : {std::string("BazantOh-2x21"), std::string("BazantOh-61x2")}) {
    const SphereScheme s = scheme_by_name(name);
    const auto bundle = FiberBundleHistory::sized_for(s);
    const Mat3 P = homogenize(F, bundle, s, *table, ModelVariant::Reconvexified).first.P;
    for (const Mat3& Q : {Qz, Qx}) {
      const Mat3 PQ =
          homogenize(Q * F, bundle, s, *table, ModelVariant::Reconvexified).first.P;
      CHECK((PQ - Q * P).cwiseAbs().maxCoeff() < 1e-6 * P.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("homogenized tangent is consistent with the stress") {
  auto table = make_potential_table(nh05(), GridSpec{0.9, 20.0, 2001});
  const SphereScheme s = scheme_by_name("BazantOh-61x2");
  auto bundle = FiberBundleHistory::sized_for(s);

  // Load into a mixed convex/relaxed fiber population, then probe.
  Mat3 F = Mat3::Identity();
  for (double a = 1.02; a <= 1.62; a += 0.02) {
    F(0, 0) = a;
    bundle = homogenize(F, bundle, s, *table, ModelVariant::Reconvexified).second;
  }
  F(0, 0) = 1.63;
  F(0, 1) = 0.05;
  const auto [r, nb] = homogenize(F, bundle, s, *table, ModelVariant::Reconvexified);
  const double h = 1e-6;
  double max_rel = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      Mat3 Fp = F, Fm = F;
      Fp(k, l) += h;
      Fm(k, l) -= h;
      const Mat3 Pp = homogenize(Fp, bundle, s, *table, ModelVariant::Reconvexified).first.P;
      const Mat3 Pm = homogenize(Fm, bundle, s, *table, ModelVariant::Reconvexified).first.P;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double fd = (Pp(i, j) - Pm(i, j)) / (2 * h);
          const double an = r.A(i, j, k, l);
          max_rel = std::max(max_rel,
                             std::abs(fd - an) / std::max(1e-3, std::abs(fd)));
        }
    }
  CHECK(max_rel < 1e-4);
}

TEST_CASE("parallel map agrees bitwise with the fixed-order reduction") {
  auto table = make_potential_table(nh05(), GridSpec{0.9, 20.0, 2001});
  const SphereScheme s = scheme_by_name("SpherialDesign-225");
  auto bundle = FiberBundleHistory::sized_for(s);
  Mat3 F = Mat3::Identity();
  F(0, 0) = 1.5;
  F(1, 0) = 0.07;

  const auto a = homogenize(F, bundle, s, *table, ModelVariant::Reconvexified);
  const auto b = homogenize(F, bundle, s, *table, ModelVariant::Reconvexified);
  CHECK((a.first.P - b.first.P).cwiseAbs().maxCoeff() == 0.0);  // deterministic

  const auto ref = homogenize_reference(F, bundle, s, *table, ModelVariant::Reconvexified);
  CHECK((a.first.P - ref.first.P).cwiseAbs().maxCoeff() <
        1e-14 * std::max(1.0, ref.first.P.cwiseAbs().maxCoeff()));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          CHECK(a.first.A(i, j, k, l) ==
                doctest::Approx(ref.first.A(i, j, k, l)).epsilon(1e-12));
  // Fiber histories evolve identically.
  for (int f = 0; f < s.size(); ++f)
    CHECK(a.second.fibers[f].beta_k == ref.second.fibers[f].beta_k);
}

TEST_CASE("fiber errors are annotated with the direction index") {
  auto table = make_potential_table(nh05(), GridSpec{0.9, 20.0, 2001});
  const SphereScheme s = scheme_by_name("BazantOh-2x21");
  auto bundle = FiberBundleHistory::sized_for(s);
  Mat3 F = Mat3::Zero();  // det <= 0
  CHECK_THROWS_AS(homogenize(F, bundle, s, *table, ModelVariant::Reconvexified),
                  InvalidDeformation);
}
