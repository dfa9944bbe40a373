#include "rcdm/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace rcdm {

namespace {

constexpr double kResidRelTol = 1e-8;
constexpr double kStagnationTol = 1e-12;
constexpr double kArmijoC = 1e-4;
constexpr int kMaxNewton = 50;
constexpr int kMaxBacktracks = 20;
constexpr int kMaxBisections = 4;

}  // namespace

FemSolver::FemSolver(FemModel model) : model_(std::move(model)) {
  const Mesh& mesh = model_.mesh;
  const int dim = mesh.dim;
  n_dofs_ = mesh.n_nodes() * dim;
  n_gp_ = static_cast<int>(quadrature(mesh.family).size());

  if (static_cast<int>(model_.elem_params.size()) != mesh.n_elements() ||
      static_cast<int>(model_.elem_tables.size()) != mesh.n_elements())
    throw InputError("FemSolver: per-element material arrays mismatch");
  if (dim > 1 && !model_.scheme)
    throw InputError("FemSolver: sphere scheme required for dim > 1");

  for (const BCSpec& bc : model_.bcs) {
    const auto it = mesh.node_sets.find(bc.node_set);
    if (it == mesh.node_sets.end())
      throw InputError("FemSolver: unknown node set '" + bc.node_set + "'");
    if (bc.comp < 0 || bc.comp >= dim) throw InputError("FemSolver: bad component");
    for (int node : it->second) {
      const int dof = node * dim + bc.comp;
      const auto [pos, inserted] = constrained_scale_.emplace(dof, bc.scale);
      if (!inserted && pos->second != bc.scale)
        throw InputError("FemSolver: dof constrained twice with conflicting values");
    }
  }

  free_index_.assign(n_dofs_, -1);
  for (int d = 0; d < n_dofs_; ++d)
    if (is_free(d)) free_index_[d] = n_free_++;

  u_ = Eigen::VectorXd::Zero(n_dofs_);
  u_committed_ = u_;

  const int total_gps = mesh.n_elements() * n_gp_;
  if (dim == 1) {
    committed_.points.assign(total_gps, PointHistory{});
  } else {
    committed_.bundles.assign(total_gps,
                              FiberBundleHistory::sized_for(*model_.scheme));
  }
}

FemSolver::AssembleOut FemSolver::assemble(const Eigen::VectorXd& u,
                                           bool need_K, GpStates* trial) const {
  const Mesh& mesh = model_.mesh;
  const int dim = mesh.dim;
  const int nn = element_nodes(mesh.family);
  const int ne = mesh.n_elements();
  const auto& quad = quadrature(mesh.family);

  AssembleOut out;
  out.R = Eigen::VectorXd::Zero(n_dofs_);
  std::vector<Eigen::VectorXd> Re(ne);
  std::vector<Eigen::MatrixXd> Ke(ne);
  std::vector<double> Ee(ne, 0.0), diss(ne, 0.0), gym(ne, 0.0);

  if (trial) {
    if (dim == 1)
      trial->points.assign(committed_.points.size(), PointHistory{});
    else
      trial->bundles.assign(committed_.bundles.size(), FiberBundleHistory{});
  }

  int bad = -1;
  std::string bad_msg;

#pragma omp parallel for schedule(dynamic)
  for (int e = 0; e < ne; ++e) {
    try {
      const int* conn = mesh.element(e);
      Eigen::MatrixXd Xe(nn, dim), ue(nn, dim);
      for (int a = 0; a < nn; ++a)
        for (int c = 0; c < dim; ++c) {
          Xe(a, c) = mesh.coord(conn[a], c);
          ue(a, c) = u[conn[a] * dim + c];
        }

      Eigen::VectorXd re = Eigen::VectorXd::Zero(nn * dim);
      Eigen::MatrixXd ke;
      if (need_K) ke = Eigen::MatrixXd::Zero(nn * dim, nn * dim);
      double ee = 0.0, e_diss = 0.0, e_gym = 0.0;

      std::vector<double> N, dNxi;
      for (int g = 0; g < n_gp_; ++g) {
        shape_functions(mesh.family, quad[g].xi, N, dNxi);
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
        for (int a = 0; a < nn; ++a)
          for (int c = 0; c < dim; ++c)
            for (int d = 0; d < dim; ++d) J(c, d) += Xe(a, c) * dNxi[a * dim + d];
        const double detJ = J.determinant();
        if (!(detJ > 0.0)) {
          std::ostringstream os;
          os << "element " << e << " gp " << g << ": non-positive Jacobian " << detJ;
          throw NumericalError(os.str());
        }
        const Eigen::MatrixXd Jinv = J.inverse();
        Eigen::MatrixXd dNdX(nn, dim);
        for (int a = 0; a < nn; ++a)
          for (int c = 0; c < dim; ++c) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) s += dNxi[a * dim + d] * Jinv(d, c);
            dNdX(a, c) = s;
          }

        const double wq = quad[g].w * detJ;
        const int gp_index = e * n_gp_ + g;
        const PotentialTable& table = *model_.elem_tables[e];

        if (dim == 1) {
          double F = 1.0;
          for (int a = 0; a < nn; ++a) F += ue(a, 0) * dNdX(a, 0);
          auto [resp, hist] = evaluate(F, committed_.points[gp_index], table,
                                       model_.variant);
          if (trial) trial->points[gp_index] = hist;
          ee += wq * resp.energy;
          e_diss = std::min(e_diss, resp.dissipation);
          e_gym = std::max(e_gym, resp.gym_error);
          for (int a = 0; a < nn; ++a) {
            re[a] += wq * resp.P * dNdX(a, 0);
            if (need_K)
              for (int b = 0; b < nn; ++b)
                ke(a, b) += wq * resp.A * dNdX(a, 0) * dNdX(b, 0);
          }
        } else {
          Mat3 F = Mat3::Identity();
          for (int a = 0; a < nn; ++a)
            for (int i = 0; i < dim; ++i)
              for (int c = 0; c < dim; ++c) F(i, c) += ue(a, i) * dNdX(a, c);
          auto [resp, bundle] =
              homogenize(F, committed_.bundles[gp_index], *model_.scheme, table,
                         model_.variant, /*energy_only=*/!need_K);
          if (trial) trial->bundles[gp_index] = std::move(bundle);
          ee += wq * resp.energy;
          e_diss = std::min(e_diss, resp.min_dissipation);
          e_gym = std::max(e_gym, resp.max_gym_error);
          for (int a = 0; a < nn; ++a)
            for (int i = 0; i < dim; ++i) {
              double s = 0.0;
              for (int c = 0; c < dim; ++c) s += resp.P(i, c) * dNdX(a, c);
              re[a * dim + i] += wq * s;
              if (need_K)
                for (int b = 0; b < nn; ++b)
                  for (int k = 0; k < dim; ++k) {
                    double t = 0.0;
                    for (int c = 0; c < dim; ++c)
                      for (int l = 0; l < dim; ++l)
                        t += resp.A(i, c, k, l) * dNdX(a, c) * dNdX(b, l);
                    ke(a * dim + i, b * dim + k) += wq * t;
                  }
            }
        }
      }
      Re[e] = std::move(re);
      if (need_K) Ke[e] = std::move(ke);
      Ee[e] = ee;
      diss[e] = e_diss;
      gym[e] = e_gym;
    } catch (const std::exception& ex) {
#pragma omp critical
      if (bad < 0) {
        bad = e;
        bad_msg = ex.what();
      }
    }
  }
  if (bad >= 0) throw NumericalError("assemble: " + bad_msg);

  // Deterministic scatter in element order.
  out.K.reserve(need_K ? ne * nn * nn * dim * dim : 0);
  for (int e = 0; e < ne; ++e) {
    const int* conn = mesh.element(e);
    out.energy += Ee[e];
    out.min_dissipation = std::min(out.min_dissipation, diss[e]);
    out.max_gym_error = std::max(out.max_gym_error, gym[e]);
    for (int a = 0; a < nn; ++a)
      for (int i = 0; i < dim; ++i) {
        const int ga = conn[a] * dim + i;
        out.R[ga] += Re[e][a * dim + i];
        if (need_K)
          for (int b = 0; b < nn; ++b)
            for (int k = 0; k < dim; ++k)
              out.K.emplace_back(ga, conn[b] * dim + k, Ke[e](a * dim + i, b * dim + k));
      }
  }
  return out;
}

FemSolver::Assembled FemSolver::assemble_at(const Eigen::VectorXd& u) const {
  AssembleOut a = assemble(u, /*need_K=*/true, nullptr);
  Assembled out;
  out.R = std::move(a.R);
  out.K.resize(n_dofs_, n_dofs_);
  out.K.setFromTriplets(a.K.begin(), a.K.end());
  out.energy = a.energy;
  out.min_dissipation = a.min_dissipation;
  out.max_gym_error = a.max_gym_error;
  return out;
}

void FemSolver::apply_bcs(double factor) {
  for (const auto& [dof, scale] : constrained_scale_) u_[dof] = scale * factor;
}

bool FemSolver::solve_increment(double factor, StepReport& out) {
  // The relaxed incremental energy is indifferent to how the deformation is
  // split across coexisting hull segments; the proportional predictor selects
  // the homogeneous member of that family.  The unrelaxed model instead
  // starts from the committed state so the material perturbation can trigger
  // the localization it is known for.
  if (model_.variant != ModelVariant::Unrelaxed && last_factor_ > 0.0) {
    const double ratio = factor / last_factor_;
    for (int d = 0; d < n_dofs_; ++d)
      if (free_index_[d] >= 0) u_[d] = u_committed_[d] * ratio;
  }
  apply_bcs(factor);
  out.factor = factor;
  out.converged = false;

  auto reduce = [&](const Eigen::VectorXd& R) {
    Eigen::VectorXd Rf(n_free_);
    for (int d = 0; d < n_dofs_; ++d)
      if (free_index_[d] >= 0) Rf[free_index_[d]] = R[d];
    return Rf;
  };
  auto commit = [&](const AssembleOut& as, GpStates& trial, int it, double rnorm) {
    committed_ = std::move(trial);
    u_committed_ = u_;
    last_factor_ = factor;
    min_dissipation_ = std::min(min_dissipation_, as.min_dissipation);
    max_gym_error_ = std::max(max_gym_error_, as.max_gym_error);
    double reaction = 0.0;
    for (const auto& [dof, scale] : constrained_scale_)
      if (scale != 0.0) reaction += as.R[dof] * (scale > 0 ? 1.0 : -1.0);
    out.reaction = reaction;
    out.iterations = it;
    out.residual = rnorm;
    out.converged = true;
  };

  GpStates trial;
  AssembleOut as = assemble(u_, true, &trial);
  double R0 = -1.0;
  double E_prev = std::numeric_limits<double>::quiet_NaN();

  static const bool debug = std::getenv("RCDM_DEBUG_NEWTON") != nullptr;

  for (int it = 0; it <= kMaxNewton; ++it) {
    Eigen::VectorXd Rf = reduce(as.R);
    const double rnorm = n_free_ > 0 ? Rf.norm() : 0.0;
    if (R0 < 0.0) R0 = rnorm;
    if (debug)
      std::fprintf(stderr, "  [newton] factor=%.5f it=%d |R|=%.3e E=%.6e\n",
                   factor, it, rnorm, as.energy);

    if (rnorm <= kResidRelTol * (1.0 + R0)) {
      commit(as, trial, it, rnorm);
      return true;
    }
    // Energy stagnation across iterates: the response carries regime-switch
    // discontinuities below this level, so further equilibrium iterations
    // cannot improve the state.
    if (it >= 1 &&
        std::abs(as.energy - E_prev) < kStagnationTol * (1.0 + std::abs(as.energy)) &&
        rnorm <= 1e-4 * (1.0 + R0)) {
      commit(as, trial, it, rnorm);
      return true;
    }
    E_prev = as.energy;
    if (it == kMaxNewton) break;

    // Reduced tangent system; a scaled diagonal shift steps in when the
    // factorization fails (legitimately possible: the envelope tangent can
    // make the system indefinite or singular).
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(as.K.size());
    for (const auto& t : as.K) {
      const int r = free_index_[t.row()], c = free_index_[t.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, t.value());
    }
    Eigen::SparseMatrix<double> Kff(n_free_, n_free_);
    Kff.setFromTriplets(trips.begin(), trips.end());

    Eigen::VectorXd d;
    double shift = 0.0;
    double maxdiag = 0.0;
    for (int i = 0; i < n_free_; ++i)
      maxdiag = std::max(maxdiag, std::abs(Kff.coeff(i, i)));
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::SparseMatrix<double> Ks = Kff;
      if (shift > 0.0)
        for (int i = 0; i < n_free_; ++i) Ks.coeffRef(i, i) += shift;
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(Ks);
      if (lu.info() == Eigen::Success) {
        d = lu.solve(-Rf);
        if (d.allFinite()) break;
      }
      d.resize(0);
      shift = (shift == 0.0) ? std::max(1e-8 * maxdiag, 1e-12) : shift * 100.0;
    }
    if (d.size() == 0) d = -Rf;

    // Armijo-Goldstein backtracking.  The unrelaxed variant minimizes the
    // condensed incremental energy (its equilibria are energy minima, and
    // descent carries the iterate onto the localized branch past a limit
    // point).  The relaxed variants instead measure progress by the
    // residual-norm merit phi = 1/2 |R|^2: their incremental energy is flat
    // or concave along microstructure rearrangements, so an energy merit
    // would reject the homogeneous branch.
    const bool energy_merit = model_.variant == ModelVariant::Unrelaxed;
    const double phi0 = 0.5 * rnorm * rnorm;
    double slope;  // directional derivative of the active merit
    if (energy_merit) {
      slope = Rf.dot(d);
      if (slope > 0.0) {
        // Indefinite tangent: the Newton direction taken downhill follows the
        // negative-curvature path away from the saddle.
        d = -d;
        slope = -slope;
      }
      if (!(slope < 0.0)) {
        d = -Rf;
        slope = -rnorm * rnorm;
      }
    } else {
      slope = Rf.dot(Kff * d);
      if (!(slope < 0.0)) {
        d = -(Kff.transpose() * Rf);  // steepest descent of phi
        if (d.norm() < 1e-300) d = -Rf;
        slope = Rf.dot(Kff * d);
        if (!(slope < 0.0)) slope = -2.0 * phi0;  // accept plain decrease
      }
    }

    double s = 1.0;
    bool accepted = false;
    double E_last = as.energy;
    for (int ls = 0; ls <= kMaxBacktracks; ++ls) {
      Eigen::VectorXd u_try = u_;
      for (int dof = 0; dof < n_dofs_; ++dof)
        if (free_index_[dof] >= 0) u_try[dof] += s * d[free_index_[dof]];
      const bool full = (ls == 0);
      AssembleOut as_try;
      GpStates trial_try;
      try {
        as_try = assemble(u_try, full, full ? &trial_try : nullptr);
      } catch (const NumericalError&) {
        s *= 0.5;  // inadmissible state (e.g. inverted element)
        continue;
      }
      E_last = as_try.energy;
      const bool ok = energy_merit
                          ? as_try.energy <= as.energy + kArmijoC * s * slope
                          : 0.5 * reduce(as_try.R).squaredNorm() <=
                                phi0 + kArmijoC * s * slope;
      if (ok) {
        u_ = std::move(u_try);
        if (full) {
          as = std::move(as_try);
          trial = std::move(trial_try);
        } else {
          as = assemble(u_, true, &trial);
        }
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) {
      if (std::abs(E_last - as.energy) < kStagnationTol * (1.0 + std::abs(as.energy))) {
        // Energy stagnation counts as convergence of the increment.
        commit(as, trial, it, rnorm);
        return true;
      }
      return false;
    }
  }
  return false;
}

bool FemSolver::advance(double f_from, double f_to, int depth,
                        std::vector<StepReport>& steps) {
  StepReport rep;
  if (solve_increment(f_to, rep)) {
    steps.push_back(rep);
    return true;
  }
  u_ = u_committed_;  // roll back the failed iterate
  if (depth >= kMaxBisections) return false;
  const double mid = 0.5 * (f_from + f_to);
  return advance(f_from, mid, depth + 1, steps) &&
         advance(mid, f_to, depth + 1, steps);
}

SolveReport FemSolver::run(const LoadProgram& program) {
  SolveReport report;
  report.completed = true;
  double prev = 0.0;
  for (int s = 1; s <= program.n_steps; ++s) {
    const double factor = program.amplitude * s / program.n_steps;
    std::vector<StepReport> sub;
    if (!advance(prev, factor, 0, sub)) {
      std::ostringstream os;
      os << "step " << s << " (factor " << factor << ") failed to converge after "
         << kMaxBisections << " bisections";
      report.completed = false;
      report.diagnostic = os.str();
      break;
    }
    // Only the target-factor state enters the report; bisection sub-steps are
    // internal.
    StepReport rep = sub.back();
    rep.u_driven = factor;
    report.steps.push_back(rep);
    prev = factor;
  }
  report.min_dissipation = min_dissipation_;
  report.max_gym_error = max_gym_error_;
  return report;
}

std::vector<ElementField> FemSolver::element_fields() const {
  const Mesh& mesh = model_.mesh;
  const int dim = mesh.dim;
  const int nn = element_nodes(mesh.family);
  const auto& quad = quadrature(mesh.family);
  std::vector<ElementField> fields(mesh.n_elements());

  std::vector<double> N, dNxi;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    ElementField& f = fields[e];
    f.element = e;
    const int* conn = mesh.element(e);
    Eigen::MatrixXd Xe(nn, dim), ue(nn, dim);
    for (int a = 0; a < nn; ++a)
      for (int c = 0; c < dim; ++c) {
        Xe(a, c) = mesh.coord(conn[a], c);
        ue(a, c) = u_committed_[conn[a] * dim + c];
        f.centroid[c] += Xe(a, c) / nn;
      }

    Mat3 sigma_sum = Mat3::Zero();
    double xi_sum = 0.0;
    for (int g = 0; g < n_gp_; ++g) {
      shape_functions(mesh.family, quad[g].xi, N, dNxi);
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
      for (int a = 0; a < nn; ++a)
        for (int c = 0; c < dim; ++c)
          for (int d = 0; d < dim; ++d) J(c, d) += Xe(a, c) * dNxi[a * dim + d];
      const Eigen::MatrixXd Jinv = J.inverse();
      Eigen::MatrixXd dNdX(nn, dim);
      for (int a = 0; a < nn; ++a)
        for (int c = 0; c < dim; ++c) {
          double s = 0.0;
          for (int d = 0; d < dim; ++d) s += dNxi[a * dim + d] * Jinv(d, c);
          dNdX(a, c) = s;
        }
      const int gp_index = e * n_gp_ + g;
      if (dim == 1) {
        double F = 1.0;
        for (int a = 0; a < nn; ++a) F += ue(a, 0) * dNdX(a, 0);
        auto resp = evaluate(F, committed_.points[gp_index],
                             *model_.elem_tables[e], model_.variant).first;
        sigma_sum(0, 0) += resp.sigma;
        xi_sum += resp.xi;
      } else {
        Mat3 F = Mat3::Identity();
        for (int a = 0; a < nn; ++a)
          for (int i = 0; i < dim; ++i)
            for (int c = 0; c < dim; ++c) F(i, c) += ue(a, i) * dNdX(a, c);
        auto resp = homogenize(F, committed_.bundles[gp_index], *model_.scheme,
                               *model_.elem_tables[e], model_.variant).first;
        const Mat3 sigma = F.determinant() == 0.0
                               ? Mat3::Zero()
                               : Mat3((resp.P * F.transpose()) / F.determinant());
        sigma_sum += sigma;
        xi_sum += resp.xi_avg;
      }
    }
    sigma_sum /= n_gp_;
    f.sigma[0] = sigma_sum(0, 0);
    f.sigma[1] = sigma_sum(1, 1);
    f.sigma[2] = sigma_sum(2, 2);
    f.sigma[3] = sigma_sum(0, 1);
    f.sigma[4] = sigma_sum(1, 2);
    f.sigma[5] = sigma_sum(0, 2);
    f.xi_avg = xi_sum / n_gp_;
  }
  return fields;
}

}  // namespace rcdm
