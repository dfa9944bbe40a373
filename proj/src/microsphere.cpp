#include "rcdm/microsphere.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rcdm {

void SphereScheme::normalize_and_validate() {
  if (directions.size() != weights.size() || directions.empty())
    throw InputError("SphereScheme '" + name + "': empty or mismatched table");
  double wsum = 0.0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const double n = directions[i].norm();
    if (n < 1e-8) throw InputError("SphereScheme '" + name + "': zero direction");
    directions[i] /= n;
    if (weights[i] <= 0.0)
      throw InputError("SphereScheme '" + name + "': non-positive weight");
    wsum += weights[i];
  }
  for (double& w : weights) w /= wsum;

  Mat3 dyad = Mat3::Zero();
  for (std::size_t i = 0; i < directions.size(); ++i)
    dyad += weights[i] * directions[i] * directions[i].transpose();
  const double err = (dyad - Mat3::Identity() / 3.0).cwiseAbs().maxCoeff();
  if (err > 1e-6)
    throw InputError("SphereScheme '" + name +
                     "': dyad identity violated (err = " + std::to_string(err) + ")");
}

SphereScheme load_scheme(std::istream& in, const std::string& name) {
  SphereScheme s;
  s.name = name;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y, z, w;
    if (!(ls >> x)) continue;  // blank/comment line
    if (!(ls >> y >> z >> w))
      throw InputError("scheme '" + name + "': malformed line " +
                       std::to_string(lineno));
    s.directions.emplace_back(x, y, z);
    s.weights.push_back(w);
  }
  s.normalize_and_validate();
  return s;
}

SphereScheme load_scheme_file(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scheme file: " + path);
  return load_scheme(in, name);
}

SphereScheme scheme_by_name(const std::string& name) {
  std::string file;
  if (name == "BazantOh-2x21")
    file = "bazant-oh-2x21.txt";
  else if (name == "BazantOh-61x2")
    file = "bazant-oh-61x2.txt";
  else if (name == "SpherialDesign-225" || name == "SphericalDesign-225")
    file = "spherical-design-225.txt";
  else
    throw InputError("unknown sphere scheme: " + name);

  std::string dir = RCDM_DATA_DIR;
  if (const char* env = std::getenv("RCDM_DATA_DIR")) dir = env;
  return load_scheme_file(dir + "/spheres/" + file, name);
}

double fiber_stretch(const Mat3& F, const Vec3& A) { return (F * A).norm(); }

Mat3 plane_strain_embed(const Mat2& F2) {
  if (F2.determinant() <= 0.0)
    throw InvalidDeformation("plane_strain_embed: det F2 <= 0");
  Mat3 F = Mat3::Identity();
  F.topLeftCorner<2, 2>() = F2;
  return F;
}

namespace {

struct FiberResult {
  double lambda = 1.0;
  double P = 0.0;
  double tang = 0.0;
  double energy = 0.0;
  double xi = 0.0;
  double dissipation = 0.0;
  double gym_error = 0.0;
  Vec3 m = Vec3::Zero();  // push-forward direction F A / |F A|
};

// Fixed-order reduction shared by both implementations.
HomogenizedResponse reduce(const std::vector<FiberResult>& res,
                           const SphereScheme& scheme, bool energy_only) {
  HomogenizedResponse out;
  Mat3 B = Mat3::Zero();  // coefficient of the delta_ik geometric term
  for (int a = 0; a < scheme.size(); ++a) {
    const FiberResult& f = res[a];
    const double w = scheme.weights[a];
    const Vec3& A = scheme.directions[a];
    out.P += (w * f.P) * (f.m * A.transpose());
    out.energy += w * f.energy;
    out.xi_avg += w * f.xi;
    out.min_dissipation = std::min(out.min_dissipation, f.dissipation);
    out.max_gym_error = std::max(out.max_gym_error, f.gym_error);
    if (energy_only) continue;

    // dP/dF = sum_a w [ tang (m x A)(m x A) + P/lambda (I - m m) x (A A) ]
    const double s1 = w * f.tang;
    const double s2 = w * f.P / f.lambda;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double u_ij = f.m[i] * A[j];
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            out.A(i, j, k, l) += s1 * u_ij * f.m[k] * A[l] -
                                 s2 * f.m[i] * f.m[k] * A[j] * A[l];
      }
    B += s2 * (A * A.transpose());
  }
  if (!energy_only) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) out.A(i, j, i, l) += B(j, l);
  }
  return out;
}

FiberResult eval_fiber(const Mat3& F, const Vec3& A, const PointHistory& hist,
                       PointHistory& out_hist, const PotentialTable& table,
                       ModelVariant variant) {
  FiberResult f;
  const Vec3 n = F * A;
  f.lambda = n.norm();
  f.m = n / f.lambda;
  auto [resp, hnew] = evaluate(f.lambda, hist, table, variant);
  out_hist = hnew;
  f.P = resp.P;
  f.tang = resp.A;
  f.energy = resp.energy;
  f.xi = resp.xi;
  f.dissipation = resp.dissipation;
  f.gym_error = resp.gym_error;
  return f;
}

}  // namespace

std::pair<HomogenizedResponse, FiberBundleHistory> homogenize(
    const Mat3& F, const FiberBundleHistory& bundle, const SphereScheme& scheme,
    const PotentialTable& table, ModelVariant variant, bool energy_only) {
  const int n = scheme.size();
  if (static_cast<int>(bundle.fibers.size()) != n)
    throw InputError("homogenize: bundle size does not match scheme");
  if (F.determinant() <= 0.0) throw InvalidDeformation("homogenize: det F <= 0");

  std::vector<FiberResult> res(n);
  FiberBundleHistory next = bundle;
  int bad = -1;
  std::string bad_msg;
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    try {
      res[a] = eval_fiber(F, scheme.directions[a], bundle.fibers[a],
                          next.fibers[a], table, variant);
    } catch (const std::exception& e) {
#pragma omp critical
      if (bad < 0) {
        bad = a;
        bad_msg = e.what();
      }
    }
  }
  if (bad >= 0)
    throw NumericalError("homogenize: fiber " + std::to_string(bad) + ": " + bad_msg);

  return {reduce(res, scheme, energy_only), std::move(next)};
}

std::pair<HomogenizedResponse, FiberBundleHistory> homogenize_reference(
    const Mat3& F, const FiberBundleHistory& bundle, const SphereScheme& scheme,
    const PotentialTable& table, ModelVariant variant) {
  const int n = scheme.size();
  if (static_cast<int>(bundle.fibers.size()) != n)
    throw InputError("homogenize_reference: bundle size does not match scheme");

  HomogenizedResponse out;
  FiberBundleHistory next = bundle;
  for (int a = 0; a < n; ++a) {
    const Vec3& A = scheme.directions[a];
    const double w = scheme.weights[a];
    const Vec3 nvec = F * A;
    const double lambda = nvec.norm();
    const Vec3 m = nvec / lambda;
    auto [resp, hnew] = evaluate(lambda, bundle.fibers[a], table, variant);
    next.fibers[a] = hnew;
    out.P += (w * resp.P) * (m * A.transpose());
    out.energy += w * resp.energy;
    out.xi_avg += w * resp.xi;
    out.min_dissipation = std::min(out.min_dissipation, resp.dissipation);
    out.max_gym_error = std::max(out.max_gym_error, resp.gym_error);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            out.A(i, j, k, l) +=
                w * resp.A * m[i] * A[j] * m[k] * A[l] +
                w * resp.P / lambda *
                    ((i == k ? 1.0 : 0.0) - m[i] * m[k]) * A[j] * A[l];
  }
  return {out, std::move(next)};
}

}  // namespace rcdm
