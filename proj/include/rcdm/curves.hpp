#pragma once

#include <string>
#include <vector>

#include "rcdm/common.hpp"

namespace rcdm {

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

Curve read_curve_csv(const std::string& path);

double interpolate(const Curve& c, double x);

// Max |y_cand - y_ref| / max|y_ref| over the reference abscissae inside the
// overlapping range (candidate resampled by linear interpolation);
// post_peak restricts the metric to abscissae beyond the reference peak.
struct CurveDeviation {
  double full = 0.0;
  double post_peak = 0.0;
};

CurveDeviation curve_deviation(const Curve& reference, const Curve& candidate);

}  // namespace rcdm
