#pragma once

#include "rcdm/curves.hpp"
#include "rcdm/fem.hpp"
#include "rcdm/scenario.hpp"

namespace rcdm {

struct PointTraceRow {
  int step = 0;
  double F = 1.0, sigma = 0.0, xi = 0.0, d = 0.0, beta = 0.0;
  double beta_plus = 0.0, beta_minus = 0.0, F_minus = 1.0, F_plus = 1.0;
  Regime regime = Regime::Convex;
};

struct PointRunResult {
  std::vector<PointTraceRow> trace;
  double min_dissipation = 0.0;
  double max_gym_error = 0.0;
};

// Drives a single material point through the scenario's load program
// (monotone or cyclic in stretch).
PointRunResult run_point_program(const Scenario& s);

// Builds the FEM model a scenario describes (bar1d / column3d / plate_hole /
// shear_cube).
FemModel build_fem_model(const Scenario& s);

struct RunArtifacts {
  Curve curve;                        // point: (F, sigma); fem: (u_D, reaction)
  std::vector<std::string> files;     // artifacts written
  double min_dissipation = 0.0;
  double max_gym_error = 0.0;
  bool solver_ok = true;
  std::string diagnostic;
};

// Runs a scenario and writes curve.csv (always), trace.csv (point runs with
// output.trace), nodes.csv / fields.csv (fem runs with output.fields) under
// out_dir.  Throws InputError for malformed input before any file is written.
RunArtifacts run_scenario(const Scenario& s, const std::string& out_dir);

struct FitReport {
  double rms = 0.0;
  double max_abs = 0.0;
  int n_points = 0;
};

// Evaluates the scenario's reconvexified model over the experiment's strain
// range (columns: strain, stress; engineering strain maps to F = 1 + eps) and
// reports the residuals.  No parameter optimization is performed.
FitReport fit_report(const std::string& experiment_csv, const Scenario& s,
                     const std::string& out_path);

}  // namespace rcdm
