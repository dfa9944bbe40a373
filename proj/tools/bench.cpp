// Benchmark comparing the OpenMP kernels against the serial reference:
// microsphere homogenization and global FEM assembly.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rcdm/drivers.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench_homogenize() {
  rcdm::MaterialParams p;
  p.kind = rcdm::EnergyModel::NeoHooke;
  p.mu = 0.5;
  p.D0 = 0.5;
  p.Dinf = 0.99;
  const rcdm::GridSpec g{0.9, 20.0, 2001};
  const auto table = rcdm::make_potential_table(p, g);
  const auto scheme = rcdm::scheme_by_name("SpherialDesign-225");
  auto bundle = rcdm::FiberBundleHistory::sized_for(scheme);

  rcdm::Mat3 F = rcdm::Mat3::Identity();
  F(0, 0) = 1.6;
  F(0, 1) = 0.15;
  F(1, 1) = 0.95;

  const int reps = 400;
  rcdm::Mat3 P_ref, P_omp;

  auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r)
    P_ref = rcdm::homogenize_reference(F, bundle, scheme, *table,
                                       rcdm::ModelVariant::Reconvexified)
                .first.P;
  const double t_ref = ms_since(t0);

  t0 = Clock::now();
  for (int r = 0; r < reps; ++r)
    P_omp = rcdm::homogenize(F, bundle, scheme, *table,
                             rcdm::ModelVariant::Reconvexified)
                .first.P;
  const double t_omp = ms_since(t0);

  std::printf("homogenize (225 fibers, %d reps):  serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   |dP| %.2e\n",
              reps, t_ref, t_omp, t_ref / t_omp,
              (P_ref - P_omp).cwiseAbs().maxCoeff());
}

void bench_assembly() {
  rcdm::Scenario s;
  s.kind = "plate_hole";
  s.material.kind = rcdm::EnergyModel::NeoHooke;
  s.material.lambda = 0.5;
  s.material.mu = 1.0;
  s.material.D0 = 0.2;
  s.material.Dinf = 0.9;
  s.grid = {0.9, 8.0, 1201};
  s.scheme = "SpherialDesign-225";
  s.elements = 32;
  s.target = 0.1;
  s.steps = 2;

  rcdm::FemSolver solver(rcdm::build_fem_model(s));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(solver.n_dofs());
  for (int d = 0; d < solver.n_dofs(); ++d)
    u[d] = 1e-3 * std::sin(0.7 * d);  // deterministic nontrivial state

  const int reps = 10;
  auto t0 = Clock::now();
  double checksum = 0.0;
  for (int r = 0; r < reps; ++r) checksum += solver.assemble_at(u).energy;
  const double t = ms_since(t0);
  std::printf("assembly (plate, 32 Q9 elements, %d reps): %8.1f ms total, %.1f ms/assembly (checksum %.6g)\n",
              reps, t, t / reps, checksum);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both paths run serially\n");
#endif
  bench_homogenize();
  bench_assembly();
  return 0;
}
