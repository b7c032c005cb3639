#pragma once

#include <utility>
#include <vector>

namespace frameforge {

/// Finite truncation of a uniformly discrete set on the line.
class PointSet1D {
 public:
  PointSet1D() = default;
  /// Throws ValidationError unless `points` is strictly increasing with
  /// consecutive gaps >= separation.
  explicit PointSet1D(std::vector<double> points, double separation = 0.0);

  const std::vector<double>& points() const noexcept { return points_; }
  double separation() const noexcept { return separation_; }
  bool empty() const noexcept { return points_.empty(); }

 private:
  std::vector<double> points_;
  double separation_ = 0.0;
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double length() const noexcept { return hi - lo; }
};

struct DensityEstimate {
  double lower = 0.0;  // min over x of #(Lambda cap [x, x+r]) / r
  double upper = 0.0;  // max over x
};

/// Extremes of the window count over all x with [x, x+r] inside `window`.
/// The count is piecewise constant in x with breakpoints at p and p - r, so
/// evaluating it at every breakpoint and between consecutive breakpoints is
/// exact. Requires 0 < r <= |window| / 2.
DensityEstimate beurling_bounds(const PointSet1D& points, const Window& window, double r);

}  // namespace frameforge
