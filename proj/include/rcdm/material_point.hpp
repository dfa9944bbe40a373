#pragma once

#include <memory>
#include <vector>

#include "rcdm/convexify.hpp"
#include "rcdm/damage.hpp"

namespace rcdm {

enum class ModelVariant { Unrelaxed, FixedHull, Reconvexified };

enum class Regime { Convex, Relaxed, FullyDamaged, Unloading };

const char* regime_name(Regime r);

// Per-point history carried between converged increments.  evaluate() is a
// pure transition function: it never mutates its input, the caller commits
// the returned history once the global increment has converged.
struct PointHistory {
  double beta_k = 0.0;        // max of psi0 over the committed load history
  double beta_plus_k = 0.0;   // internal variable of the strongly damaged phase
  double beta_minus_k = 0.0;  // internal variable of the weakly damaged phase
  double F_minus_k = 1.0;     // pinned weakly damaged phase stretch
  double F_plus_k = 1.0;      // strongly damaged phase stretch (evolving)
  double xi_k = 0.0;          // volume fraction of the strongly damaged phase
  double d_k = 0.0;           // micro bifurcation intensity
  double P_k = 0.0;           // committed stress
  double A_k = 0.0;           // committed tangent
  double F_k = 1.0;           // committed stretch (incremental anchor)
  double F_max_k = 1.0;       // maximum stretch ever attained
  double eta_k = 1.0;         // unloading secant factor
  double energy_k = 0.0;      // committed energy level (line-search bookkeeping)
  bool first = true;          // previous committed increment was not relaxed
  bool frozen = false;        // fully damaged state reached
};

struct PointResponse {
  double P = 0.0;       // first Piola-Kirchhoff stress (1D)
  double A = 0.0;       // tangent modulus (1D)
  double sigma = 0.0;   // Cauchy stress on the uniaxial path
  double energy = 0.0;  // potential level consistent with P (dE/dF = P)
  double xi = 0.0;
  double d = 0.0;
  double beta = 0.0;
  Regime regime = Regime::Convex;
  double gym_error = 0.0;     // |xi F+ + (1-xi) F- - F|
  double dissipation = 0.0;   // psi0(F) * (D - D_k) for this increment
};

// Immutable per-(material, grid) cache shared by all points of one material:
// psi0 and the universal damage-evolution branch at every grid node, plus the
// supporting points of the convexified zone tabulated over the internal
// variable (the hull of the sampled potential depends on the state only
// through beta).  The table is built by continuation, each entry refined by
// the common-tangent Newton and cross-checked against the discrete hull.
class PotentialTable {
 public:
  PotentialTable(const MaterialParams& params, const GridSpec& grid);

  const MaterialParams& params() const { return params_; }
  const GridSpec& grid() const { return grid_; }
  double relax_onset_lower_bound() const { return relax_onset_lb_; }
  double virgin_onset() const { return virgin_onset_; }
  double beta_collapse() const { return beta_collapse_; }
  // Largest condensed state whose loading point still sits left of the zone.
  double beta_onset() const { return beta_star_; }
  bool has_relaxed_zone() const { return !memo_beta_.empty(); }
  // True when the tabulated zone was cut off by F_max instead of collapsing;
  // states beyond it then need a wider grid.
  bool collapse_open() const { return collapse_open_; }

  // Samples W(.; anchor) into `out` (resized to the grid).
  void build_potential(const IncrementAnchor& anchor, std::vector<double>& out) const;

  // Fresh discrete hull segment containing F at the given condensed state.
  ConvexSegment hull_segment(double beta, double F) const;

  // Interpolated supporting points at the condensed state; false when the
  // potential has no convexified zone there.
  bool tangency_guess(double beta, double& xm, double& xp) const;

 private:
  MaterialParams params_;
  GridSpec grid_;
  std::vector<double> psi0_;     // psi0(F_i)
  std::vector<double> evolved_;  // psi0(F_i) - Dbar(psi0(F_i))
  std::vector<double> memo_beta_, memo_xm_, memo_xp_;
  double relax_onset_lb_ = 0.0;
  double virgin_onset_ = 0.0;
  double beta_collapse_ = -1.0;
  double beta_star_ = 0.0;
  bool collapse_open_ = false;

  void build_tangency_table();
};

std::shared_ptr<const PotentialTable> make_potential_table(const MaterialParams& p,
                                                           const GridSpec& g);

// Material routine: builds/queries the convex envelope of the incremental
// potential, keeps the weakly damaged phase pinned after first entry into the
// relaxed regime, freezes the response once the envelope no longer bypasses
// the potential on continued loading, and switches to the eta-scaled elastic
// branch on unloading.
std::pair<PointResponse, PointHistory> evaluate(double F, const PointHistory& hist,
                                                const PotentialTable& table,
                                                ModelVariant variant);

// Secant factor making the unloading stress continuous at the turning point.
double capture_unloading_eta(const PointHistory& hist, double F_turn,
                             const MaterialParams& p);

// Central finite difference of the stress with frozen history (one-sided at
// regime boundaries).
double tangent(double F, const PointHistory& hist, const PotentialTable& table,
               ModelVariant variant);

}  // namespace rcdm
