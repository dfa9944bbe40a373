#include "rcdm/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcdm {

void GridSpec::validate() const {
  if (!(F_min < F_max)) throw InputError("GridSpec: F_min must be < F_max");
  if (n_points < 3) throw InputError("GridSpec: n_points must be >= 3");
  if (F_min <= 0.0) throw InputError("GridSpec: F_min must be positive");
}

ConvexGrid sample_potential(const std::function<double(double)>& eval,
                            const GridSpec& spec) {
  spec.validate();
  ConvexGrid grid;
  grid.spec = spec;
  grid.values.assign(spec.n_points, 0.0);

  int bad_node = -1;
  std::string bad_msg;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < spec.n_points; ++i) {
    try {
      grid.values[i] = eval(spec.node(i));
    } catch (const std::exception& e) {
#pragma omp critical
      if (bad_node < 0) {
        bad_node = i;
        bad_msg = e.what();
      }
    }
  }
  if (bad_node >= 0)
    throw NumericalError("sample_potential: evaluation failed at node " +
                         std::to_string(bad_node) + ": " + bad_msg);
  for (int i = 0; i < spec.n_points; ++i)
    if (!std::isfinite(grid.values[i]))
      throw NumericalError("sample_potential: non-finite value at node " +
                           std::to_string(i));
  return grid;
}

namespace {

double value_scale(const ConvexGrid& g) {
  double m = 1.0;
  for (double v : g.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::vector<int> lower_convex_hull(const ConvexGrid& grid) {
  const int n = grid.size();
  if (n < 3) throw InputError("lower_convex_hull: grid too small");

  // Collinearity threshold scaled to the data; interior points on a segment
  // are popped so only true vertices remain.
  const double tol = 1e-14 * value_scale(grid) * (grid.spec.F_max - grid.spec.F_min);

  std::vector<int> hull;
  hull.reserve(64);
  for (int i = 0; i < n; ++i) {
    const double xi = grid.node(i);
    const double yi = grid.values[i];
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull[hull.size() - 1];
      const double cross = (grid.node(b) - grid.node(a)) * (yi - grid.values[a]) -
                           (grid.values[b] - grid.values[a]) * (xi - grid.node(a));
      if (cross <= tol)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  return hull;
}

ConvexSegment query_segment(const std::vector<int>& hull, const ConvexGrid& grid,
                            double F) {
  const double h = grid.spacing();
  if (F < grid.spec.F_min - 1e-12 || F > grid.spec.F_max + 1e-12)
    throw GridRangeError("query_segment: F = " + std::to_string(F) +
                         " outside grid [" + std::to_string(grid.spec.F_min) +
                         ", " + std::to_string(grid.spec.F_max) + "]");

  // Hull vertex abscissae are ordered; locate the segment bracketing F.
  int lo = 0, hi = static_cast<int>(hull.size()) - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (grid.node(hull[mid]) <= F)
      lo = mid;
    else
      hi = mid;
  }

  ConvexSegment seg;
  const int ia = hull[lo];
  const int ib = hull[hi];
  const double Fa = grid.node(ia);
  const double Fb = grid.node(ib);

  if (Fb - Fa <= h * (1.0 + 1e-9)) {
    // Envelope follows the function here; report the nearest node.
    const int nearest = (F - Fa <= Fb - F) ? ia : ib;
    seg.F_minus = seg.F_plus = grid.node(nearest);
    seg.W_minus = seg.W_plus = grid.values[nearest];
    seg.slope = (grid.values[ib] - grid.values[ia]) / (Fb - Fa);
    seg.xi = 0.0;
    seg.d = 0.0;
    seg.degenerate = true;
    return seg;
  }

  seg.F_minus = Fa;
  seg.W_minus = grid.values[ia];
  seg.F_plus = Fb;
  seg.W_plus = grid.values[ib];
  seg.slope = (seg.W_plus - seg.W_minus) / (seg.F_plus - seg.F_minus);
  seg.xi = (F - seg.F_minus) / (seg.F_plus - seg.F_minus);
  seg.d = (seg.F_plus - seg.F_minus) / F;
  seg.degenerate = false;
  return seg;
}

ConvexSegment anchored_hull(const ConvexGrid& grid, double F_anchor,
                            double W_anchor) {
  const int n = grid.size();
  const double eps = 1e-12 * (grid.spec.F_max - grid.spec.F_min);
  int first = n;
  for (int i = 0; i < n; ++i) {
    if (grid.node(i) > F_anchor + eps) {
      first = i;
      break;
    }
  }
  if (first >= n)
    throw GridRangeError("anchored_hull: no grid node right of anchor");

  double best = std::numeric_limits<double>::infinity();
  int arg = first;
  for (int i = first; i < n; ++i) {
    const double s = (grid.values[i] - W_anchor) / (grid.node(i) - F_anchor);
    if (s <= best) {  // ties resolve to the farthest node
      best = s;
      arg = i;
    }
  }

  ConvexSegment seg;
  seg.F_minus = F_anchor;
  seg.W_minus = W_anchor;
  seg.F_plus = grid.node(arg);
  seg.W_plus = grid.values[arg];
  seg.slope = best;
  seg.xi = 0.0;
  seg.d = 0.0;
  seg.degenerate = (seg.F_plus - seg.F_minus) <= grid.spacing() * (1.0 + 1e-9);
  return seg;
}

}  // namespace rcdm
