#include "rcdm/curves.hpp"

#include <algorithm>
#include <cmath>

#include "rcdm/csv.hpp"

namespace rcdm {

Curve read_curve_csv(const std::string& path) {
  const Table t = read_csv(path);
  Curve c;
  for (const auto& row : t.rows) {
    if (row.size() < 2 || !std::isfinite(row[0]) || !std::isfinite(row[1]))
      throw InputError("curve file " + path + ": need two numeric columns");
    c.x.push_back(row[0]);
    c.y.push_back(row[1]);
  }
  if (c.x.size() < 2) throw InputError("curve file " + path + ": too few rows");
  return c;
}

double interpolate(const Curve& c, double x) {
  if (x <= c.x.front()) return c.y.front();
  if (x >= c.x.back()) return c.y.back();
  const auto it = std::upper_bound(c.x.begin(), c.x.end(), x);
  const std::size_t i = it - c.x.begin();
  const double t = (x - c.x[i - 1]) / (c.x[i] - c.x[i - 1]);
  return (1.0 - t) * c.y[i - 1] + t * c.y[i];
}

CurveDeviation curve_deviation(const Curve& reference, const Curve& candidate) {
  const double lo = std::max(reference.x.front(), candidate.x.front());
  const double hi = std::min(reference.x.back(), candidate.x.back());
  if (!(lo < hi)) throw InputError("curve comparison: displacement ranges do not overlap");

  double scale = 0.0;
  for (double y : reference.y) scale = std::max(scale, std::abs(y));
  if (scale == 0.0) scale = 1.0;

  double x_peak = reference.x.front();
  double y_peak = -1e300;
  for (std::size_t i = 0; i < reference.x.size(); ++i)
    if (reference.y[i] > y_peak) {
      y_peak = reference.y[i];
      x_peak = reference.x[i];
    }

  CurveDeviation dev;
  for (std::size_t i = 0; i < reference.x.size(); ++i) {
    const double x = reference.x[i];
    if (x < lo || x > hi) continue;
    const double rel = std::abs(interpolate(candidate, x) - reference.y[i]) / scale;
    dev.full = std::max(dev.full, rel);
    if (x > x_peak) dev.post_peak = std::max(dev.post_peak, rel);
  }
  return dev;
}

}  // namespace rcdm
