#include "frameforge/density.hpp"

#include "frameforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace frameforge {

PointSet1D::PointSet1D(std::vector<double> points, double separation)
    : points_(std::move(points)), separation_(separation) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw ValidationError("points must be finite");
    if (i > 0) {
      const double gap = points_[i] - points_[i - 1];
      if (!(gap > 0.0)) throw ValidationError("points must be strictly increasing");
      if (gap < separation_) {
        throw ValidationError("gap " + std::to_string(gap) + " below declared separation " +
                              std::to_string(separation_));
      }
    }
  }
}

DensityEstimate beurling_bounds(const PointSet1D& set, const Window& window, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("window length r must be positive");
  if (!(window.length() > 0.0)) throw ValidationError("empty window");
  if (r > 0.5 * window.length()) {
    throw ValidationError("r = " + std::to_string(r) + " exceeds half the window length " +
                          std::to_string(window.length()));
  }
  const auto& pts = set.points();
  if (pts.empty()) return {0.0, 0.0};

  const double x_lo = window.lo;
  const double x_hi = window.hi - r;
  std::vector<double> breaks{x_lo, x_hi};
  for (double p : pts) {
    if (p >= x_lo && p <= x_hi) breaks.push_back(p);
    if (p - r >= x_lo && p - r <= x_hi) breaks.push_back(p - r);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> xs;
  xs.reserve(2 * breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    xs.push_back(breaks[i]);
    if (i + 1 < breaks.size()) xs.push_back(0.5 * (breaks[i] + breaks[i + 1]));
  }

  // Two pointers: first = first point >= x, last = first point > x + r.
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t cmin = std::numeric_limits<std::size_t>::max();
  std::size_t cmax = 0;
  for (double x : xs) {
    while (first < pts.size() && pts[first] < x) ++first;
    while (last < pts.size() && pts[last] <= x + r) ++last;
    const std::size_t count = last > first ? last - first : 0;
    cmin = std::min(cmin, count);
    cmax = std::max(cmax, count);
  }
  return {static_cast<double>(cmin) / r, static_cast<double>(cmax) / r};
}

}  // namespace frameforge
