#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rcdm/csv.hpp"
#include "rcdm/drivers.hpp"

using namespace rcdm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"([scenario]
name = t
kind = point
variant = reconvexified

[material]
model = neo_hooke
mu = 0.5
D0 = 0.5
Dinf = 0.99

[load]
target = 2.0
steps = 10
)";

}  // namespace

TEST_CASE("scenario parsing and validation") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.name == "t");
  CHECK(s.material.mu == doctest::Approx(0.5));
  CHECK(s.grid.n_points == 2001);  // default

  // Unknown keys and sections are hard errors.
  CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "typo = 1\n"), InputError);
  CHECK_THROWS_AS(parse_scenario("[nope]\nx = 1\n"), InputError);
  CHECK_THROWS_AS(parse_scenario("[material]\nmodel = magic\n"), InputError);
  CHECK_THROWS_AS(parse_scenario("x = 1\n"), InputError);  // key before section

  // Semantic validation.
  std::string bad = kMinimal;
  bad.replace(bad.find("Dinf = 0.99"), 11, "Dinf = 1.50");
  CHECK_THROWS_AS(parse_scenario(bad), InputError);
}

TEST_CASE("every bundled scenario round-trips through the parser") {
  for (const auto& entry : std::filesystem::directory_iterator("scenarios")) {
    if (entry.path().extension() != ".toml") continue;
    const Scenario s1 = parse_scenario(slurp(entry.path().string()));
    const std::string text = serialize_scenario(s1);
    const Scenario s2 = parse_scenario(text);
    CHECK(serialize_scenario(s2) == text);  // fixpoint
    CHECK(s2.name == s1.name);
    CHECK(s2.steps == s1.steps);
    CHECK(s2.material.D0 == s1.material.D0);
  }
}

TEST_CASE("parameter overrides rewrite one key") {
  Scenario s = parse_scenario(kMinimal);
  apply_override(s, "load.steps", "25");
  CHECK(s.steps == 25);
  apply_override(s, "material.mu", "0.75");
  CHECK(s.material.mu == doctest::Approx(0.75));
  CHECK_THROWS_AS(apply_override(s, "loadsteps", "3"), InputError);
}

TEST_CASE("csv round trip and formatting") {
  const std::string path = "/tmp/rcdm_test_csv.csv";
  write_csv(path, {"a", "b"},
            {{format_value(1.0), format_value(0.1)},
             {format_value(2.5), format_value(1e-17)}});
  const Table t = read_csv(path);
  REQUIRE(t.header.size() == 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == doctest::Approx(0.1).epsilon(1e-16));
  CHECK(t.rows[1][1] == doctest::Approx(1e-17).epsilon(1e-16));

  // 17 significant digits survive the round trip exactly.
  const double v = 0.1234567890123456789;
  CHECK(std::stod(format_value(v)) == v);
  std::remove(path.c_str());
}

TEST_CASE("deterministic outputs: identical bytes across runs") {
  Scenario s = parse_scenario(kMinimal);
  s.steps = 50;
  run_scenario(s, "/tmp/rcdm_det_a");
  run_scenario(s, "/tmp/rcdm_det_b");
  CHECK(slurp("/tmp/rcdm_det_a/curve.csv") == slurp("/tmp/rcdm_det_b/curve.csv"));
  CHECK(slurp("/tmp/rcdm_det_a/trace.csv") == slurp("/tmp/rcdm_det_b/trace.csv"));
  std::filesystem::remove_all("/tmp/rcdm_det_a");
  std::filesystem::remove_all("/tmp/rcdm_det_b");
}

TEST_CASE("curve comparison metric") {
  Curve ref;
  for (int i = 0; i <= 100; ++i) {
    ref.x.push_back(i * 0.01);
    ref.y.push_back(std::sin(3.0 * i * 0.01));
  }
  CHECK(curve_deviation(ref, ref).full == doctest::Approx(0.0));

  Curve cand = ref;
  for (double& y : cand.y) y += 0.01;
  const CurveDeviation dev = curve_deviation(ref, cand);
  CHECK(dev.full == doctest::Approx(0.01).epsilon(1e-6));

  Curve far;
  far.x = {10.0, 11.0};
  far.y = {0.0, 0.0};
  CHECK_THROWS_AS(curve_deviation(ref, far), InputError);
}

TEST_CASE("fit report: the model against itself has zero residual") {
  Scenario s;
  s.kind = "point";
  s.material.kind = EnergyModel::Yeoh;
  s.material.c1 = 50;
  s.material.c2 = 200;
  s.material.c3 = 20000;
  s.material.D0 = 12.5;
  s.material.Dinf = 0.88;
  s.grid = {0.9, 3.0, 2001};
  s.target = 1.35;
  s.steps = 700;

  // Export the model curve as a synthetic experiment, then fit to it.
  const PointRunResult run = run_point_program(s);
  std::vector<std::vector<std::string>> rows{{format_value(0.0), format_value(0.0)}};
  for (std::size_t i = 0; i < run.trace.size(); i += 10)
    rows.push_back({format_value(run.trace[i].F - 1.0), format_value(run.trace[i].sigma)});
  // Keep the final strain so the refit reproduces the exact load program.
  rows.push_back({format_value(run.trace.back().F - 1.0),
                  format_value(run.trace.back().sigma)});
  write_csv("/tmp/rcdm_fit_exp.csv", {"strain", "stress"}, rows);

  const FitReport rep = fit_report("/tmp/rcdm_fit_exp.csv", s, "");
  CHECK(rep.rms < 1e-12);
  CHECK(rep.max_abs < 1e-11);

  // Hand-fit parameters plateau near eps = 0.32.
  double plateau_eps = -1.0;
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    if (std::abs(run.trace[i].sigma - run.trace[i - 1].sigma) < 1e-9 &&
        run.trace[i].xi > 0.0) {
      plateau_eps = run.trace[i].F - 1.0;
      break;
    }
  }
  CHECK(plateau_eps == doctest::Approx(0.32).epsilon(0.05));
  std::remove("/tmp/rcdm_fit_exp.csv");
}

TEST_CASE("malformed scenario produces no outputs") {
  CHECK_THROWS_AS(parse_scenario("[scenario]\nkind = warp_drive\n"), InputError);
}
