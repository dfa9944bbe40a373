#pragma once

#include <functional>
#include <vector>

#include "rcdm/common.hpp"

namespace rcdm {

// Uniform sampling grid for the one-dimensional incremental potential.
struct GridSpec {
  double F_min = 0.9;
  double F_max = 20.0;
  int n_points = 2001;

  void validate() const;
  double spacing() const { return (F_max - F_min) / (n_points - 1); }
  double node(int i) const { return F_min + i * spacing(); }
};

struct ConvexGrid {
  GridSpec spec;
  std::vector<double> values;

  double node(int i) const { return spec.node(i); }
  double spacing() const { return spec.spacing(); }
  int size() const { return static_cast<int>(values.size()); }
};

// One supporting segment of the convex envelope.  For a point queried in a
// region where envelope and function coincide the segment degenerates to the
// nearest grid node and xi = d = 0.
struct ConvexSegment {
  double F_minus = 0.0;
  double W_minus = 0.0;
  double F_plus = 0.0;
  double W_plus = 0.0;
  double slope = 0.0;
  double xi = 0.0;
  double d = 0.0;
  bool degenerate = true;
};

// Evaluates eval at every grid node.  Throws with the node index on a failed
// or non-finite evaluation.
ConvexGrid sample_potential(const std::function<double(double)>& eval,
                            const GridSpec& spec);

// Lower convex envelope of the sampled values via a single monotone-chain
// pass over the (already sorted) abscissae.  Returns the hull vertex indices;
// first and last grid points are always vertices, interior collinear points
// are dropped.
std::vector<int> lower_convex_hull(const ConvexGrid& grid);

// Hull segment containing F.  Throws GridRangeError outside [F_min, F_max].
ConvexSegment query_segment(const std::vector<int>& hull, const ConvexGrid& grid,
                            double F);

// Tangent construction from a fixed anchor point (F_anchor, W_anchor): picks
// the grid node right of the anchor that minimizes the secant slope (the
// farthest node wins ties), so the secant lies on or below all sampled values
// in between.  Anchoring at a vertex of the unconstrained hull with its own
// value reproduces that hull's next supporting point exactly.
ConvexSegment anchored_hull(const ConvexGrid& grid, double F_anchor,
                            double W_anchor);

}  // namespace rcdm
