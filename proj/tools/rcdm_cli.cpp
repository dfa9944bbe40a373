// Command-line front end: run scenarios, sweep parameters, compare curves,
// and evaluate a model fit against experimental data.
//
// Exit codes: 0 ok, 1 solver failure (or comparison above tolerance),
// 2 input error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rcdm/drivers.hpp"

namespace {

void configure_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("RCDM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

int do_run(const std::string& scenario_path, std::string out_dir) {
  const rcdm::Scenario s = rcdm::load_scenario_file(scenario_path);
  if (out_dir.empty()) out_dir = s.out_dir;
  const rcdm::RunArtifacts art = rcdm::run_scenario(s, out_dir);
  for (const auto& f : art.files) std::cout << "wrote " << f << "\n";
  std::cout << "scenario '" << s.name << "': " << art.curve.x.size()
            << " curve points, min dissipation " << art.min_dissipation
            << ", max GYM error " << art.max_gym_error << "\n";
  if (!art.solver_ok) {
    std::cerr << "solver failure: " << art.diagnostic << "\n";
    return 1;
  }
  return 0;
}

int do_sweep(const std::string& scenario_path, const std::string& param,
             std::string out_dir) {
  const auto eq = param.find('=');
  if (eq == std::string::npos)
    throw rcdm::InputError("sweep: --param must look like section.key=v1,v2,...");
  const std::string path = param.substr(0, eq);
  std::vector<std::string> values;
  std::string rest = param.substr(eq + 1);
  std::size_t pos;
  while ((pos = rest.find(',')) != std::string::npos) {
    values.push_back(rest.substr(0, pos));
    rest.erase(0, pos + 1);
  }
  if (!rest.empty()) values.push_back(rest);
  if (values.empty()) throw rcdm::InputError("sweep: no values given");

  const rcdm::Scenario base = rcdm::load_scenario_file(scenario_path);
  if (out_dir.empty()) out_dir = base.out_dir;
  int status = 0;
  std::string key = path;
  for (auto& c : key)
    if (c == '.') c = '_';
  for (const auto& v : values) {
    rcdm::Scenario s = base;
    rcdm::apply_override(s, path, v);
    const std::string dir = out_dir + "/" + s.name + "_" + key + "_" + v;
    const rcdm::RunArtifacts art = rcdm::run_scenario(s, dir);
    std::cout << path << " = " << v << " -> " << dir << "/curve.csv"
              << (art.solver_ok ? "" : "  [solver failure]") << "\n";
    if (!art.solver_ok) status = 1;
  }
  return status;
}

int do_compare(const std::string& ref_path, const std::vector<std::string>& cands,
               double tol) {
  const rcdm::Curve ref = rcdm::read_curve_csv(ref_path);
  bool ok = true;
  for (const auto& cand_path : cands) {
    const rcdm::Curve cand = rcdm::read_curve_csv(cand_path);
    const rcdm::CurveDeviation dev = rcdm::curve_deviation(ref, cand);
    const bool pass = dev.full <= tol;
    ok = ok && pass;
    std::cout << cand_path << ": max relative deviation " << dev.full
              << " (post-peak " << dev.post_peak << ") -> "
              << (pass ? "pass" : "FAIL") << "\n";
  }
  return ok ? 0 : 1;
}

int do_fit(const std::string& experiment, const std::string& scenario_path,
           std::string out_dir) {
  const rcdm::Scenario s = rcdm::load_scenario_file(scenario_path);
  if (out_dir.empty()) out_dir = s.out_dir;
  std::filesystem::create_directories(out_dir);
  const std::string out_path = out_dir + "/fit_report.csv";
  const rcdm::FitReport rep = rcdm::fit_report(experiment, s, out_path);
  std::cout << "fit over " << rep.n_points << " points: RMS residual " << rep.rms
            << ", max residual " << rep.max_abs << "\nwrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();

  CLI::App app{"relaxed continuum damage mechanics benchmarks"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, param, ref_path, experiment;
  std::vector<std::string> cand_paths;
  double tol = 1e-3;

  auto* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory override");

  auto* sweep = app.add_subcommand("sweep", "run a scenario over parameter values");
  sweep->add_option("scenario", scenario_path, "scenario file")->required();
  sweep->add_option("--param", param, "section.key=v1,v2,...")->required();
  sweep->add_option("--out", out_dir, "output directory override");

  auto* compare = app.add_subcommand("compare", "compare force-displacement curves");
  compare->add_option("reference", ref_path, "reference curve CSV")->required();
  compare->add_option("candidates", cand_paths, "candidate curve CSVs")->required();
  compare->add_option("--tol", tol, "max relative deviation");

  auto* fit = app.add_subcommand("fit", "residuals of the model against experiment data");
  fit->add_option("experiment", experiment, "experiment CSV (strain, stress)")->required();
  fit->add_option("scenario", scenario_path, "scenario file with material parameters")->required();
  fit->add_option("--out", out_dir, "output directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(scenario_path, out_dir);
    if (sweep->parsed()) return do_sweep(scenario_path, param, out_dir);
    if (compare->parsed()) return do_compare(ref_path, cand_paths, tol);
    if (fit->parsed()) return do_fit(experiment, scenario_path, out_dir);
  } catch (const rcdm::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const rcdm::GridRangeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
