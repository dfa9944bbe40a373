#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <optional>

#include "rcdm/mesh.hpp"
#include "rcdm/microsphere.hpp"

namespace rcdm {

// Dirichlet entry: every node in the set gets component comp prescribed to
// scale * load_factor.  scale = 0 pins the component.
struct BCSpec {
  std::string node_set;
  int comp = 0;
  double scale = 0.0;
};

struct LoadProgram {
  int n_steps = 50;
  double amplitude = 1.0;  // driven value at factor 1
};

struct FemModel {
  Mesh mesh;
  ModelVariant variant = ModelVariant::Reconvexified;
  std::vector<MaterialParams> elem_params;
  std::vector<std::shared_ptr<const PotentialTable>> elem_tables;
  std::shared_ptr<const SphereScheme> scheme;  // unused for 1D meshes
  std::vector<BCSpec> bcs;
};

struct StepReport {
  double factor = 0.0;
  double u_driven = 0.0;
  double reaction = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct ElementField {
  int element = 0;
  double centroid[3] = {0, 0, 0};
  double sigma[6] = {0, 0, 0, 0, 0, 0};  // xx yy zz xy yz xz averages
  double xi_avg = 0.0;
};

struct SolveReport {
  std::vector<StepReport> steps;
  double min_dissipation = 0.0;
  double max_gym_error = 0.0;
  bool completed = false;
  std::string diagnostic;  // set when the program stopped early
};

class FemSolver {
 public:
  explicit FemSolver(FemModel model);

  // Runs the Dirichlet program.  A step that still fails after the bisection
  // budget (a limit point of the unrelaxed model, typically) ends the program
  // early; the report carries the completed steps and the diagnostic.
  SolveReport run(const LoadProgram& program);

  // Element averages and nodal state at the committed configuration.
  std::vector<ElementField> element_fields() const;
  const Eigen::VectorXd& displacement() const { return u_; }
  const Mesh& mesh() const { return model_.mesh; }

  // Exposed for the stiffness consistency tests: full residual/stiffness at
  // an arbitrary displacement state without committing history.
  struct Assembled {
    Eigen::VectorXd R;
    Eigen::SparseMatrix<double> K;
    double energy = 0.0;
    double min_dissipation = 0.0;
    double max_gym_error = 0.0;
  };
  Assembled assemble_at(const Eigen::VectorXd& u) const;

  int n_dofs() const { return n_dofs_; }
  bool is_free(int dof) const { return constrained_scale_.find(dof) == constrained_scale_.end(); }

 private:
  struct GpStates {
    std::vector<PointHistory> points;          // 1D
    std::vector<FiberBundleHistory> bundles;   // 2D/3D
  };

  struct AssembleOut {
    Eigen::VectorXd R;
    std::vector<Eigen::Triplet<double>> K;
    double energy = 0.0;
    double min_dissipation = 0.0;
    double max_gym_error = 0.0;
  };

  AssembleOut assemble(const Eigen::VectorXd& u, bool need_K,
                       GpStates* trial) const;
  bool solve_increment(double factor, StepReport& out);
  bool advance(double f_from, double f_to, int depth, std::vector<StepReport>& steps);
  void apply_bcs(double factor);

  FemModel model_;
  int n_dofs_ = 0;
  int n_gp_ = 0;
  std::map<int, double> constrained_scale_;  // dof -> scale
  std::vector<int> free_index_;              // dof -> free idx or -1
  int n_free_ = 0;
  Eigen::VectorXd u_, u_committed_;
  GpStates committed_;
  double last_factor_ = 0.0;
  double min_dissipation_ = 0.0;
  double max_gym_error_ = 0.0;
};

}  // namespace rcdm
