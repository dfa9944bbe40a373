#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rcdm/material_point.hpp"

namespace rcdm {

// Unit-sphere quadrature: directions A_alpha and weights normalized to
// sum w = 1, so the dyad identity sum w A (x) A = I/3 holds for every
// admissible scheme (checked at load, 1e-6, else the scheme is rejected).
struct SphereScheme {
  std::string name;
  std::vector<Vec3> directions;
  std::vector<double> weights;

  int size() const { return static_cast<int>(directions.size()); }
  void normalize_and_validate();
};

// Plain-text table, one point per line: x y z w ('#' starts a comment).
SphereScheme load_scheme(std::istream& in, const std::string& name);
SphereScheme load_scheme_file(const std::string& path, const std::string& name);

// Resolves one of the shipped schemes (BazantOh-2x21, BazantOh-61x2,
// SpherialDesign-225) from the data directory (RCDM_DATA_DIR env overrides
// the compiled-in default).
SphereScheme scheme_by_name(const std::string& name);

// Elongation of a fiber with reference direction A: |F A|.
double fiber_stretch(const Mat3& F, const Vec3& A);

// Plane strain embedding: F2 in the upper block, F33 = 1.
Mat3 plane_strain_embed(const Mat2& F2);

struct FiberBundleHistory {
  std::vector<PointHistory> fibers;

  static FiberBundleHistory sized_for(const SphereScheme& s) {
    return FiberBundleHistory{std::vector<PointHistory>(s.size())};
  }
};

struct HomogenizedResponse {
  Mat3 P = Mat3::Zero();
  Tensor4 A;
  double energy = 0.0;
  double xi_avg = 0.0;
  double min_dissipation = 0.0;
  double max_gym_error = 0.0;
};

// Homogenization of the 1D fiber responses over the unit sphere.  Fiber
// evaluations run concurrently (OpenMP) into per-fiber slots; the reduction
// into P and A is a fixed-order serial sum, so the result is independent of
// the thread count.  energy_only skips the tangent assembly.
std::pair<HomogenizedResponse, FiberBundleHistory> homogenize(
    const Mat3& F, const FiberBundleHistory& bundle, const SphereScheme& scheme,
    const PotentialTable& table, ModelVariant variant, bool energy_only = false);

// Naive sequential implementation kept as the testing reference.
std::pair<HomogenizedResponse, FiberBundleHistory> homogenize_reference(
    const Mat3& F, const FiberBundleHistory& bundle, const SphereScheme& scheme,
    const PotentialTable& table, ModelVariant variant);

}  // namespace rcdm
