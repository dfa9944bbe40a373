#include "rcdm/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "rcdm/csv.hpp"

namespace rcdm {

namespace {

std::vector<double> stretch_program(const Scenario& s) {
  std::vector<double> F;
  if (s.program == "monotone") {
    for (int i = 1; i <= s.steps; ++i)
      F.push_back(1.0 + (s.target - 1.0) * i / s.steps);
  } else {
    for (int c = 0; c < s.cycles; ++c) {
      for (int i = 1; i <= s.steps; ++i)
        F.push_back(1.0 + (s.target - 1.0) * i / s.steps);
      for (int i = 1; i <= s.steps; ++i)
        F.push_back(s.target - (s.target - 1.0) * i / s.steps);
    }
  }
  return F;
}

}  // namespace

PointRunResult run_point_program(const Scenario& s) {
  auto table = make_potential_table(s.material, s.grid);
  PointHistory h;
  PointRunResult out;
  const std::vector<double> program = stretch_program(s);
  out.trace.reserve(program.size());
  for (std::size_t i = 0; i < program.size(); ++i) {
    auto [r, hn] = evaluate(program[i], h, *table, s.variant);
    h = hn;
    PointTraceRow row;
    row.step = static_cast<int>(i) + 1;
    row.F = program[i];
    row.sigma = r.sigma;
    row.xi = r.xi;
    row.d = r.d;
    row.beta = r.beta;
    row.beta_plus = h.beta_plus_k;
    row.beta_minus = h.beta_minus_k;
    row.F_minus = h.F_minus_k;
    row.F_plus = h.F_plus_k;
    row.regime = r.regime;
    out.trace.push_back(row);
    out.min_dissipation = std::min(out.min_dissipation, r.dissipation);
    out.max_gym_error = std::max(out.max_gym_error, r.gym_error);
  }
  return out;
}

FemModel build_fem_model(const Scenario& s) {
  FemModel m;
  m.variant = s.variant;

  if (s.kind == "bar1d") {
    m.mesh = make_bar_mesh(s.kappa);
    m.bcs = {{"bottom", 0, 0.0}, {"top", 0, 1.0}};
  } else if (s.kind == "column3d") {
    m.mesh = make_column_mesh(s.kappa);
    m.bcs = {{"bottom", 0, 0.0}, {"bottom", 1, 0.0}, {"bottom", 2, 0.0},
             {"middle", 1, 0.0}, {"middle", 2, 0.0}, {"top", 0, 1.0},
             {"top", 1, 0.0},    {"top", 2, 0.0}};
  } else if (s.kind == "plate_hole") {
    m.mesh = make_plate_hole_mesh(s.elements, 1.0, s.r_over_L);
    m.bcs = {{"symmetry-x", 1, 0.0}, {"symmetry-y", 0, 0.0}, {"driven-edge", 0, 1.0}};
  } else if (s.kind == "shear_cube") {
    m.mesh = make_cube_mesh(s.n, s.family == "hex20" ? ElementFamily::Hex20
                                                     : ElementFamily::Hex8);
    m.bcs = {{"fixed-face", 0, 0.0},  {"fixed-face", 1, 0.0}, {"fixed-face", 2, 0.0},
             {"driven-face", 1, 1.0}, {"driven-face", 0, 0.0}, {"driven-face", 2, 0.0}};
  } else {
    throw InputError("build_fem_model: not a fem scenario kind: " + s.kind);
  }

  const int ne = m.mesh.n_elements();
  m.elem_params.assign(ne, s.material);
  if ((s.kind == "bar1d" || s.kind == "column3d") && s.perturbation != 0.0 && ne > 1)
    m.elem_params.back().Dinf -= s.perturbation;  // upper element

  // One shared table per distinct parameter set.
  m.elem_tables.resize(ne);
  std::shared_ptr<const PotentialTable> base;
  for (int e = 0; e < ne; ++e) {
    if (e > 0 && m.elem_params[e].Dinf == m.elem_params[0].Dinf && base) {
      m.elem_tables[e] = base;
    } else {
      m.elem_tables[e] = make_potential_table(m.elem_params[e], s.grid);
      if (e == 0) base = m.elem_tables[e];
    }
  }

  if (m.mesh.dim > 1)
    m.scheme = std::make_shared<SphereScheme>(scheme_by_name(s.scheme));
  return m;
}

RunArtifacts run_scenario(const Scenario& s, const std::string& out_dir) {
  s.validate();
  RunArtifacts art;
  std::filesystem::create_directories(out_dir);

  if (s.kind == "point") {
    const PointRunResult res = run_point_program(s);
    art.min_dissipation = res.min_dissipation;
    art.max_gym_error = res.max_gym_error;

    std::vector<std::vector<std::string>> curve_rows;
    for (const auto& row : res.trace) {
      art.curve.x.push_back(row.F);
      art.curve.y.push_back(row.sigma);
      curve_rows.push_back({format_value(row.F), format_value(row.sigma)});
    }
    const std::string curve_path = out_dir + "/curve.csv";
    write_csv(curve_path, {"F", "sigma"}, curve_rows);
    art.files.push_back(curve_path);

    if (s.trace) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& r : res.trace)
        rows.push_back({std::to_string(r.step), format_value(r.F),
                        format_value(r.sigma), format_value(r.xi), format_value(r.d),
                        format_value(r.beta), format_value(r.beta_plus),
                        format_value(r.beta_minus), format_value(r.F_minus),
                        format_value(r.F_plus), regime_name(r.regime)});
      const std::string trace_path = out_dir + "/trace.csv";
      write_csv(trace_path,
                {"step", "F", "sigma", "xi", "d", "beta", "beta_plus", "beta_minus",
                 "F_minus", "F_plus", "regime"},
                rows);
      art.files.push_back(trace_path);
    }
    return art;
  }

  FemModel model = build_fem_model(s);
  FemSolver solver(std::move(model));
  LoadProgram program{s.steps, s.target};
  const SolveReport rep = solver.run(program);
  art.solver_ok = rep.completed;
  art.diagnostic = rep.diagnostic;
  art.min_dissipation = rep.min_dissipation;
  art.max_gym_error = rep.max_gym_error;

  std::vector<std::vector<std::string>> curve_rows{{format_value(0.0), format_value(0.0)}};
  art.curve.x.push_back(0.0);
  art.curve.y.push_back(0.0);
  for (const auto& st : rep.steps) {
    art.curve.x.push_back(st.u_driven);
    art.curve.y.push_back(st.reaction);
    curve_rows.push_back({format_value(st.u_driven), format_value(st.reaction)});
  }
  const std::string curve_path = out_dir + "/curve.csv";
  write_csv(curve_path, {"displacement", "force"}, curve_rows);
  art.files.push_back(curve_path);

  if (s.fields && art.solver_ok) {
    const Mesh& mesh = solver.mesh();
    std::vector<std::vector<std::string>> node_rows;
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      std::vector<std::string> row{std::to_string(n)};
      for (int c = 0; c < 3; ++c)
        row.push_back(format_value(c < mesh.dim ? mesh.coord(n, c) : 0.0));
      for (int c = 0; c < 3; ++c)
        row.push_back(format_value(c < mesh.dim ? solver.displacement()[n * mesh.dim + c] : 0.0));
      node_rows.push_back(std::move(row));
    }
    const std::string nodes_path = out_dir + "/nodes.csv";
    write_csv(nodes_path, {"node", "x", "y", "z", "ux", "uy", "uz"}, node_rows);
    art.files.push_back(nodes_path);

    std::vector<std::vector<std::string>> field_rows;
    for (const auto& f : solver.element_fields()) {
      std::vector<std::string> row{std::to_string(f.element)};
      for (double c : f.centroid) row.push_back(format_value(c));
      for (double sg : f.sigma) row.push_back(format_value(sg));
      row.push_back(format_value(f.xi_avg));
      field_rows.push_back(std::move(row));
    }
    const std::string fields_path = out_dir + "/fields.csv";
    write_csv(fields_path,
              {"element", "cx", "cy", "cz", "sigma_xx", "sigma_yy", "sigma_zz",
               "sigma_xy", "sigma_yz", "sigma_xz", "xi_avg"},
              field_rows);
    art.files.push_back(fields_path);
  }
  return art;
}

FitReport fit_report(const std::string& experiment_csv, const Scenario& s,
                     const std::string& out_path) {
  const Table exp = read_csv(experiment_csv);
  std::vector<double> eps, stress;
  for (const auto& row : exp.rows) {
    if (row.size() < 2 || !std::isfinite(row[0]) || !std::isfinite(row[1]))
      throw InputError("fit: experiment CSV needs numeric (strain, stress) columns");
    eps.push_back(row[0]);
    stress.push_back(row[1]);
  }
  if (eps.empty()) throw InputError("fit: experiment CSV is empty");

  const double eps_max = *std::max_element(eps.begin(), eps.end());
  Scenario run = s;
  run.kind = "point";
  run.program = "monotone";
  run.target = 1.0 + eps_max;
  run.steps = std::max(run.steps, 500);
  const PointRunResult res = run_point_program(run);

  Curve model;
  model.x.push_back(0.0);
  model.y.push_back(0.0);
  for (const auto& r : res.trace) {
    model.x.push_back(r.F - 1.0);
    model.y.push_back(r.sigma);
  }

  FitReport rep;
  std::vector<std::vector<std::string>> rows;
  double ss = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double m = interpolate(model, eps[i]);
    const double resid = m - stress[i];
    ss += resid * resid;
    rep.max_abs = std::max(rep.max_abs, std::abs(resid));
    rows.push_back({format_value(eps[i]), format_value(stress[i]), format_value(m),
                    format_value(resid)});
  }
  rep.n_points = static_cast<int>(eps.size());
  rep.rms = std::sqrt(ss / rep.n_points);
  if (!out_path.empty())
    write_csv(out_path, {"strain", "stress_experiment", "stress_model", "residual"}, rows);
  return rep;
}

}  // namespace rcdm
