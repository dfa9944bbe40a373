#include "rcdm/material_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rcdm {

namespace {

constexpr double kTolUnload = 1e-9;     // stretch hysteresis for the eta branch
constexpr double kRelaxTolRel = 1e-10;  // strictness of the relaxed-zone test

thread_local ConvexGrid tl_grid;

double safe_eta(double P, double F, double beta, const MaterialParams& p) {
  const double dpsi = dpsi0_dF(F, p);
  double eta;
  if (std::abs(dpsi) < 1e-12)
    eta = 1.0 - damage(beta, p);
  else
    eta = P / dpsi;
  if (!std::isfinite(eta)) eta = 1.0 - damage(beta, p);
  return std::clamp(eta, 0.0, 1.0);
}

// Potential branches in a fixed normalization (anchor constants dropped; only
// differences enter the tangency construction).  W_lo is the no-evolution
// well scaled by (1 - D(beta)), W_hi the universal damage-evolution branch
// shifted to meet the well at psi0 = beta.
struct Branches {
  const MaterialParams& p;
  double beta, D, c;
  // Below the first possible relaxation the left supporting point lies on the
  // evolution branch itself (the frozen well has not opened yet).
  bool left_evolved = false;

  Branches(const MaterialParams& p_, double beta_, bool left_evolved_ = false)
      : p(p_), beta(beta_), D(damage(beta_, p_)),
        c(damage_antiderivative(beta_, p_) - beta_ * D),
        left_evolved(left_evolved_) {}

  double W_hi(double x) const {
    const double s = psi0_uniaxial(x, p);
    return s - damage_antiderivative(s, p) + c;
  }
  double dW_hi(double x) const {
    return (1.0 - damage(psi0_uniaxial(x, p), p)) * dpsi0_dF(x, p);
  }
  double ddW_hi(double x) const {
    const double s = psi0_uniaxial(x, p);
    const double ds = dpsi0_dF(x, p);
    return (1.0 - damage(s, p)) * d2psi0_dF2(x, p) -
           p.Dinf / p.D0 * std::exp(-s / p.D0) * ds * ds;
  }
  double W_lo(double x) const {
    return left_evolved ? W_hi(x) : (1.0 - D) * psi0_uniaxial(x, p);
  }
  double dW_lo(double x) const {
    return left_evolved ? dW_hi(x) : (1.0 - D) * dpsi0_dF(x, p);
  }
  double ddW_lo(double x) const {
    return left_evolved ? ddW_hi(x) : (1.0 - D) * d2psi0_dF2(x, p);
  }
  // Value of the condensed potential at x given the trial state beta.
  double W_at(double x) const {
    return (psi0_uniaxial(x, p) <= beta) ? (1.0 - D) * psi0_uniaxial(x, p)
                                         : W_hi(x);
  }
};

// Common-tangent construction between the two branches: 2x2 Newton on the
// tangency conditions.  x_split separates the branch domains (the evolution
// threshold); xm/xp carry the initial guess and the result.
bool polish_supports(const Branches& br, double F_lo, double F_hi,
                     double x_split, double& xm, double& xp) {
  const double scale = std::max({1.0, std::abs(br.W_hi(F_hi)), std::abs(br.W_lo(F_lo))});
  bool tight = false;
  for (int it = 0; it < 25; ++it) {
    const double gap = xp - xm;
    if (!(gap > 0.0)) return false;
    const double Wm = br.W_lo(xm), Wp = br.W_hi(xp);
    const double dWm = br.dW_lo(xm), dWp = br.dW_hi(xp);
    const double f1 = dWm * gap - (Wp - Wm);
    const double f2 = dWp * gap - (Wp - Wm);
    if (std::abs(f1) < 1e-11 * scale && std::abs(f2) < 1e-11 * scale) {
      tight = true;
      break;
    }
    const double j11 = br.ddW_lo(xm) * gap;
    const double j12 = dWm - dWp;
    const double j21 = dWm - dWp;
    const double j22 = br.ddW_hi(xp) * gap;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-30) return false;
    double dxm = -(f1 * j22 - f2 * j12) / det;
    double dxp = -(j11 * f2 - j21 * f1) / det;
    const double lim = 0.5 * gap;
    dxm = std::clamp(dxm, -lim, lim);
    dxp = std::clamp(dxp, -lim, lim);
    const double xm_old = xm, xp_old = xp;
    xm = std::clamp(xm + dxm, F_lo, x_split - 1e-12);
    xp = std::clamp(xp + dxp, x_split + 1e-12, F_hi);
    if (std::abs(xm - xm_old) < 1e-13 * std::max(1.0, xm) &&
        std::abs(xp - xp_old) < 1e-13 * std::max(1.0, xp)) {
      tight = std::abs(f1) < 1e-9 * scale && std::abs(f2) < 1e-9 * scale;
      break;
    }
  }
  return tight && std::isfinite(xm) && std::isfinite(xp) && xm < xp;
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Convex: return "convex";
    case Regime::Relaxed: return "relaxed";
    case Regime::FullyDamaged: return "fully-damaged";
    case Regime::Unloading: return "unloading";
  }
  return "?";
}

PotentialTable::PotentialTable(const MaterialParams& params, const GridSpec& grid)
    : params_(params), grid_(grid) {
  params_.validate();
  grid_.validate();
  const int n = grid_.n_points;
  psi0_.resize(n);
  evolved_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = psi0_uniaxial(grid_.node(i), params_);
    psi0_[i] = s;
    evolved_[i] = s - damage_antiderivative(s, params_);
  }
  build_tangency_table();
}

void PotentialTable::build_potential(const IncrementAnchor& a,
                                     std::vector<double>& out) const {
  const int n = grid_.n_points;
  out.resize(n);
  const double one_minus_Dk = 1.0 - a.D_k;
  const double psi_k = psi0_uniaxial(a.F_k, params_);
  const double c_ne = -one_minus_Dk * psi_k;
  const double c_evo = c_ne - a.beta_k * a.D_k + a.Dbar_k;
  for (int i = 0; i < n; ++i) {
    out[i] = (psi0_[i] > a.beta_k) ? evolved_[i] + c_evo
                                   : one_minus_Dk * psi0_[i] + c_ne;
  }
}

// Segment of the fresh discrete hull at the given anchor that contains F
// (used to seed and cross-check the tangency table, and as the fallback when
// the smooth construction does not converge).
ConvexSegment PotentialTable::hull_segment(double beta, double F) const {
  tl_grid.spec = grid_;
  build_potential(IncrementAnchor::make(1.0, beta, params_), tl_grid.values);
  const std::vector<int> hull = lower_convex_hull(tl_grid);
  return query_segment(hull, tl_grid, F);
}

// The supporting points of the convexified zone depend on the material state
// only through the condensed internal variable, so they are precomputed once
// by continuation over beta (each entry refined by the common-tangent Newton)
// and later used as initial guesses.  Entries are cross-checked against the
// discrete hull they replace.
void PotentialTable::build_tangency_table() {
  const double h = grid_.spacing();
  relax_onset_lb_ = std::numeric_limits<double>::infinity();
  virgin_onset_ = std::numeric_limits<double>::infinity();
  beta_collapse_ = -1.0;

  // Seed at beta = 0 from the discrete hull.
  tl_grid.spec = grid_;
  build_potential(IncrementAnchor::make(1.0, 0.0, params_), tl_grid.values);
  const std::vector<int> hull = lower_convex_hull(tl_grid);
  double xm = 0.0, xp = 0.0;
  bool found = false;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const double Fa = grid_.node(hull[k]);
    const double Fb = grid_.node(hull[k + 1]);
    if (Fb - Fa > 2.0 * h && Fb > 1.0) {
      xm = Fa;
      xp = Fb;
      found = true;
      break;
    }
  }
  if (!found) return;  // no non-convex zone for these parameters

  // For beta up to beta* = psi0(x-*) the supports are the double tangent of
  // the pure evolution branch and do not move.
  {
    Branches br(params_, 0.0, /*left_evolved=*/true);
    double sxm = xm, sxp = xp;
    if (polish_supports(br, grid_.F_min, grid_.F_max, 0.5 * (xm + xp), sxm, sxp) &&
        sxp - sxm > 2.0 * h) {
      xm = sxm;
      xp = sxp;
    }
  }
  memo_beta_.push_back(0.0);
  memo_xm_.push_back(xm);
  memo_xp_.push_back(xp);
  beta_star_ = psi0_uniaxial(xm, params_);
  beta_collapse_ = beta_star_;
  relax_onset_lb_ = xm;
  virgin_onset_ = xm;

  // Continuation in the condensed state, parameterized by the evolution
  // threshold stretch x_hat (beta = psi0(x_hat)); the left support then lies
  // in the frozen well left of x_hat.
  const int n_sweep = 1500;
  const double x_hat_max = grid_.F_max - 2.0 * h;
  const double x_hat_min = xm;
  for (int j = 1; j <= n_sweep; ++j) {
    const double x_hat = x_hat_min + (x_hat_max - x_hat_min) * j / double(n_sweep);
    const double beta = psi0_uniaxial(x_hat, params_);
    Branches br(params_, beta);
    double txm = std::min(xm, x_hat - 1e-9), txp = std::max(xp, x_hat + 1e-9);
    if (!polish_supports(br, grid_.F_min, grid_.F_max, x_hat, txm, txp) ||
        txp - txm <= 2.0 * h || txp <= x_hat)
      break;
    xm = txm;
    xp = txp;
    memo_beta_.push_back(beta);
    memo_xm_.push_back(xm);
    memo_xp_.push_back(xp);
    beta_collapse_ = beta;
    relax_onset_lb_ = std::min(relax_onset_lb_, xm);

    if (j % 200 == 0 && xp - xm > 6.0 * h) {
      // Cross-check against the discrete hull this table stands in for.
      const ConvexSegment seg = hull_segment(beta, 0.5 * (xm + xp));
      if (seg.degenerate || std::abs(seg.F_minus - xm) > 2.0 * h ||
          std::abs(seg.F_plus - xp) > 2.0 * h)
        throw NumericalError("PotentialTable: tangency table disagrees with hull");
    }
  }
  if (std::isfinite(relax_onset_lb_))
    relax_onset_lb_ -= std::max(4.0 * h, 2e-3 * relax_onset_lb_);
  collapse_open_ = (xp > x_hat_max - 4.0 * h);
}

bool PotentialTable::tangency_guess(double beta, double& xm, double& xp) const {
  if (memo_beta_.empty() || beta > beta_collapse_) return false;
  const auto it = std::lower_bound(memo_beta_.begin(), memo_beta_.end(), beta);
  const std::size_t i = std::min<std::size_t>(it - memo_beta_.begin(),
                                              memo_beta_.size() - 1);
  if (i == 0 || memo_beta_[i] == beta) {
    xm = memo_xm_[i];
    xp = memo_xp_[i];
    return true;
  }
  const double t = (beta - memo_beta_[i - 1]) / (memo_beta_[i] - memo_beta_[i - 1]);
  xm = (1.0 - t) * memo_xm_[i - 1] + t * memo_xm_[i];
  xp = (1.0 - t) * memo_xp_[i - 1] + t * memo_xp_[i];
  return true;
}

std::shared_ptr<const PotentialTable> make_potential_table(const MaterialParams& p,
                                                           const GridSpec& g) {
  return std::make_shared<const PotentialTable>(p, g);
}

double capture_unloading_eta(const PointHistory& hist, double F_turn,
                             const MaterialParams& p) {
  if (F_turn <= 0.0) throw InvalidDeformation("capture_unloading_eta: F_turn <= 0");
  return safe_eta(hist.P_k, F_turn, hist.beta_k, p);
}

namespace {

struct Branch {
  double P = 0.0, A = 0.0, energy = 0.0, beta = 0.0, xi = 0.0, d = 0.0;
  double F_minus = 1.0, F_plus = 1.0;
  Regime regime = Regime::Convex;
};

// Standard condensed evaluation (this is the whole model for the unrelaxed
// variant): P = (1-D) dpsi0/dF with D from the condensed internal variable.
Branch condensed_branch(double F, const PointHistory& hist,
                        const IncrementAnchor& a, const MaterialParams& p) {
  Branch b;
  const double psiF = psi0_uniaxial(F, p);
  const bool evolving = psiF > a.beta_k;
  b.beta = evolving ? psiF : a.beta_k;
  const double D = damage(b.beta, p);
  const double dpsi = dpsi0_dF(F, p);
  b.P = (1.0 - D) * dpsi;
  if (evolving) {
    const double Dprime = p.Dinf / p.D0 * std::exp(-b.beta / p.D0);
    b.A = (1.0 - D) * d2psi0_dF2(F, p) - Dprime * dpsi * dpsi;
  } else {
    b.A = (1.0 - a.D_k) * d2psi0_dF2(F, p);
  }
  b.energy = hist.energy_k + incremental_potential(F, a, p);
  b.xi = hist.xi_k;
  b.d = hist.d_k;
  b.regime = Regime::Convex;
  return b;
}

struct RelaxedZone {
  bool relaxed = false;
  double xm = 0.0, xp = 0.0, slope = 0.0;
};

// Finds the convexified zone of the potential condensed at the trial state
// and checks whether F lies strictly inside it.  Starts from the tangency
// table; falls back to the discrete hull when the smooth Newton fails.
RelaxedZone locate_relaxed_zone(const PotentialTable& table, double beta_trial,
                                double F) {
  const MaterialParams& p = table.params();
  const double h = table.grid().spacing();
  RelaxedZone z;

  // States up to the onset level sit left of the zone by construction.
  if (!table.has_relaxed_zone() || beta_trial <= table.beta_onset()) return z;
  if (beta_trial > table.beta_collapse()) {
    if (table.collapse_open())
      throw GridRangeError(
          "relaxed zone extends beyond F_max of the convexification grid; "
          "widen the grid in the scenario");
    return z;
  }

  double xm, xp;
  if (!table.tangency_guess(beta_trial, xm, xp)) return z;
  if (F < xm - 6.0 * h || F > xp + 6.0 * h) return z;  // clearly outside

  Branches br(p, beta_trial);
  bool ok = polish_supports(br, table.grid().F_min, table.grid().F_max,
                            std::max(F, table.grid().F_min + h), xm, xp);
  if (!ok) {
    const ConvexSegment seg = table.hull_segment(
        beta_trial, std::clamp(F, table.grid().F_min, table.grid().F_max));
    if (seg.degenerate) return z;
    xm = seg.F_minus;
    xp = seg.F_plus;
  }
  if (xp - xm <= 2.0 * h || F <= xm || F >= xp) return z;

  const double Wm = br.W_lo(xm);
  const double slope = (br.W_hi(xp) - Wm) / (xp - xm);
  const double WF = br.W_at(F);
  const double chord = Wm + slope * (F - xm);
  if (WF - chord <= kRelaxTolRel * std::max(1.0, std::abs(WF))) return z;

  z.relaxed = true;
  z.xm = xm;
  z.xp = xp;
  z.slope = slope;
  return z;
}

}  // namespace

std::pair<PointResponse, PointHistory> evaluate(double F, const PointHistory& hist,
                                                const PotentialTable& table,
                                                ModelVariant variant) {
  const MaterialParams& p = table.params();
  if (!(F > 0.0) || !std::isfinite(F))
    throw InvalidDeformation("evaluate: F must be positive and finite");

  const IncrementAnchor anchor = IncrementAnchor::make(hist.F_k, hist.beta_k, p);
  const bool loading_side = F >= hist.F_max_k - kTolUnload;

  Branch b;
  bool freeze_now = false;

  if (variant == ModelVariant::Unrelaxed) {
    b = condensed_branch(F, hist, anchor, p);
  } else if (hist.frozen && loading_side) {
    b.P = hist.P_k;
    b.A = hist.A_k;
    b.energy = hist.energy_k + hist.P_k * (F - hist.F_k);
    b.beta = hist.beta_k;
    b.xi = hist.xi_k;
    b.d = hist.d_k;
    b.regime = Regime::FullyDamaged;
  } else if (!loading_side && (hist.xi_k > 0.0 || hist.beta_k > 0.0)) {
    // eta-scaled elastic unloading/reloading below the maximum stretch.
    b.P = hist.eta_k * dpsi0_dF(F, p);
    b.A = hist.eta_k * d2psi0_dF2(F, p);
    b.energy = hist.energy_k +
               hist.eta_k * (psi0_uniaxial(F, p) - psi0_uniaxial(hist.F_k, p));
    b.beta = hist.beta_k;
    b.xi = hist.xi_k;
    b.d = hist.d_k;
    b.regime = Regime::Unloading;
  } else if (variant == ModelVariant::FixedHull && !hist.first) {
    // Prior-work comparator: the first hull stays fixated.
    if (F <= hist.F_plus_k) {
      b.P = hist.P_k;
      b.A = 0.0;
      b.energy = hist.energy_k + hist.P_k * (F - hist.F_k);
      b.beta = condense_beta(F, hist.beta_k, p);
      b.xi = std::clamp((F - hist.F_minus_k) / (hist.F_plus_k - hist.F_minus_k),
                        0.0, 1.0);
      b.d = (hist.F_plus_k - hist.F_minus_k) / F;
      b.F_minus = hist.F_minus_k;
      b.F_plus = hist.F_plus_k;
      b.regime = Regime::Relaxed;
    } else {
      b = condensed_branch(F, hist, anchor, p);
    }
  } else if (hist.first && F < table.relax_onset_lower_bound()) {
    // Below every possible relaxed zone.
    b = condensed_branch(F, hist, anchor, p);
  } else {
    // The internal variable is condensed at the trial stretch before the
    // envelope is queried, so within an increment the relaxed stress follows
    // the softening of the envelope slope.
    const double beta_trial = condense_beta(F, hist.beta_k, p);
    const bool evolving = beta_trial > hist.beta_k;
    const RelaxedZone z = locate_relaxed_zone(table, beta_trial, F);

    if (z.relaxed) {
      const double F_minus = hist.first ? z.xm : hist.F_minus_k;
      const double F_plus = z.xp;
      b.P = z.slope;
      // Consistent tangent from the envelope theorem: with the tangency
      // conditions active, d(slope)/dbeta = D'(beta)(psi0(x-) - beta)/gap.
      b.A = evolving ? p.Dinf / p.D0 * std::exp(-beta_trial / p.D0) *
                           (psi0_uniaxial(z.xm, p) - beta_trial) *
                           dpsi0_dF(F, p) / (z.xp - z.xm)
                     : 0.0;
      b.energy = hist.energy_k + z.slope * (F - hist.F_k);
      b.beta = beta_trial;
      b.xi = std::clamp((F - F_minus) / (F_plus - F_minus), 0.0, 1.0);
      b.d = (F_plus - F_minus) / F;
      b.F_minus = F_minus;
      b.F_plus = F_plus;
      b.regime = Regime::Relaxed;
    } else if (!hist.first && loading_side) {
      // The envelope no longer bypasses the potential at F: the damaging
      // regime is exhausted, stresses and tangents stay frozen.  The tangent
      // stored with the frozen response is the derivative of that constant
      // response.
      freeze_now = true;
      b.P = hist.P_k;
      b.A = 0.0;
      b.energy = hist.energy_k + hist.P_k * (F - hist.F_k);
      b.beta = hist.beta_k;
      b.xi = hist.xi_k;
      b.d = hist.d_k;
      b.regime = Regime::FullyDamaged;
    } else {
      b = condensed_branch(F, hist, anchor, p);
    }
  }

  if (!std::isfinite(b.P) || !std::isfinite(b.A) || !std::isfinite(b.energy)) {
    std::ostringstream os;
    os << "evaluate: non-finite response at F=" << F << " beta_k=" << hist.beta_k
       << " regime=" << regime_name(b.regime);
    throw NumericalError(os.str());
  }

  PointResponse r;
  r.P = b.P;
  r.A = b.A;
  r.sigma = b.P * F / F;  // J = F on the uniaxial path diag[F,1,1]
  r.energy = b.energy;
  r.xi = b.xi;
  r.d = b.d;
  r.beta = b.beta;
  r.regime = b.regime;
  r.dissipation = psi0_uniaxial(F, p) * (damage(b.beta, p) - anchor.D_k);

  PointHistory h = hist;
  h.beta_k = b.beta;
  h.xi_k = b.xi;
  h.d_k = b.d;
  h.P_k = b.P;
  h.A_k = b.A;
  h.F_k = F;
  h.energy_k = b.energy;
  h.F_max_k = std::max(hist.F_max_k, F);
  if (freeze_now) h.frozen = true;

  if (b.regime == Regime::Relaxed) {
    if (hist.first) {
      // First entry: adopt and pin the weakly damaged phase.
      h.F_minus_k = b.F_minus;
      h.beta_minus_k = psi0_uniaxial(b.F_minus, p);
    }
    h.F_plus_k = b.F_plus;
    h.beta_plus_k = std::max(hist.first ? 0.0 : hist.beta_plus_k,
                             psi0_uniaxial(b.F_plus, p));
    h.first = false;
    r.gym_error = std::abs(b.xi * h.F_plus_k + (1.0 - b.xi) * h.F_minus_k - F);
  } else if (b.regime == Regime::Convex) {
    h.beta_plus_k = b.beta;
    h.beta_minus_k = b.beta;
    h.first = true;
  }
  // Unloading and frozen evaluations leave the phase bookkeeping untouched.

  if (b.regime != Regime::Unloading) h.eta_k = safe_eta(b.P, F, b.beta, p);

  return {r, h};
}

double tangent(double F, const PointHistory& hist, const PotentialTable& table,
               ModelVariant variant) {
  const double h = 1e-5 * std::max(1.0, F);
  const auto r0 = evaluate(F, hist, table, variant).first;
  const auto rp = evaluate(F + h, hist, table, variant).first;
  const auto rm = evaluate(F - h, hist, table, variant).first;
  if (rp.regime == rm.regime) return (rp.P - rm.P) / (2.0 * h);
  // One-sided difference toward the side that shares the regime at F.
  if (rp.regime == r0.regime) return (rp.P - r0.P) / h;
  if (rm.regime == r0.regime) return (r0.P - rm.P) / h;
  return r0.A;
}

}  // namespace rcdm
