#include "frameforge/expframe_line.hpp"

#include "frameforge/density.hpp"
#include "frameforge/errors.hpp"
#include "frameforge/frame_select.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace frameforge {

void GridSpectrum::validate() const {
  if (m < 1) throw ValidationError("grid order m must be positive");
  if (cells.empty()) throw ValidationError("grid spectrum has no cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] >= static_cast<std::size_t>(m)) {
      throw ValidationError("cell index " + std::to_string(cells[i]) + " outside [0, " + std::to_string(m) + ")");
    }
    if (i > 0 && cells[i] <= cells[i - 1]) throw ValidationError("cell indices must be sorted and distinct");
  }
}

Rational IntervalSpectrum::measure() const {
  Rational total{0};
  for (const auto& [a, b] : intervals) total += b - a;
  return total;
}

void IntervalSpectrum::validate() const {
  if (length <= Rational{0}) throw ValidationError("spectrum length d must be positive");
  if (intervals.empty()) throw ValidationError("spectrum has no intervals");
  auto sorted = intervals;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].first < sorted[i].second)) {
      throw ValidationError("interval " + std::to_string(i) + " has a >= b");
    }
    if (i > 0 && sorted[i].first < sorted[i - 1].second) throw ValidationError("intervals overlap");
  }
  if (sorted.back().second - sorted.front().first > length) {
    throw ValidationError("intervals span more than the declared length d");
  }
}

Rational SamplingSet::density() const {
  return Rational(static_cast<std::int64_t>(offsets.size())) / (Rational(m) * spacing);
}

std::vector<double> SamplingSet::points_in(double lo, double hi) const {
  std::vector<double> out;
  if (m < 1 || offsets.empty() || hi < lo) return out;
  const double s = to_double(spacing);
  const double period = s * static_cast<double>(m);
  const auto l_lo = static_cast<std::int64_t>(std::floor(lo / period)) - 1;
  const auto l_hi = static_cast<std::int64_t>(std::ceil(hi / period)) + 1;
  for (std::int64_t l = l_lo; l <= l_hi; ++l) {
    for (std::size_t j : offsets) {
      const double x = s * static_cast<double>(static_cast<std::int64_t>(j) + m * l);
      if (x >= lo && x <= hi) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::int64_t floor_int(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t ceil_int(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

bool budget_fits(double epsilon, std::size_t n) {
  return static_cast<double>(cardinality_budget(0.5 * epsilon, n)) <=
         (1.0 + epsilon) * static_cast<double>(n) * (1.0 + 1e-12);
}

}  // namespace

GridSpectrum cover_by_grid(const IntervalSpectrum& spec, double epsilon, double slack, int max_log2) {
  spec.validate();
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(slack > 0.0 && slack < 1.0)) throw ValidationError("slack must lie in (0, 1)");

  Rational shift = spec.intervals.front().first;
  for (const auto& iv : spec.intervals) shift = std::min(shift, iv.first);
  std::vector<std::pair<Rational, Rational>> normalized;
  for (const auto& [a, b] : spec.intervals) normalized.emplace_back((a - shift) / spec.length, (b - shift) / spec.length);
  Rational target{0};
  for (const auto& [a, b] : normalized) target += b - a;

  for (int p = 0; p <= max_log2; ++p) {
    const std::int64_t m = std::int64_t{1} << p;
    std::set<std::size_t> cells;
    for (const auto& [a, b] : normalized) {
      // Cells meeting [a, b] in positive measure.
      const std::int64_t k0 = floor_int(a * m);
      const std::int64_t k1 = ceil_int(b * m);
      for (std::int64_t k = k0; k < k1; ++k) cells.insert(static_cast<std::size_t>(k));
    }
    const Rational covered(static_cast<std::int64_t>(cells.size()), m);
    if (covered <= (1 + Rational(static_cast<std::int64_t>(std::llround(slack * 1e9)), 1000000000)) * target &&
        budget_fits(epsilon, cells.size())) {
      return GridSpectrum{m, std::vector<std::size_t>(cells.begin(), cells.end())};
    }
  }
  throw CoverFailure("no grid 2^p with p <= " + std::to_string(max_log2) + " covers the spectrum within slack " +
                     std::to_string(slack) + " (target measure " + to_string(target) + ")");
}

ComplexMatrix dft_submatrix(std::int64_t m, std::span<const std::size_t> cells) {
  if (m < 1) throw ValidationError("DFT order must be positive");
  ComplexMatrix f(static_cast<std::size_t>(m), cells.size());
  for (std::int64_t j = 0; j < m; ++j) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] >= static_cast<std::size_t>(m)) throw ValidationError("DFT column index out of range");
      f(static_cast<std::size_t>(j), c) = unit_root(j * static_cast<std::int64_t>(cells[c]), m);
    }
  }
  return f;
}

FrameReport frame_report(const GridSpectrum& grid, std::span<const std::size_t> rows, double epsilon) {
  grid.validate();
  const ComplexMatrix f = dft_submatrix(grid.m, grid.cells);
  const auto [lo, hi] = measured_bounds(f, rows);
  const double md = static_cast<double>(grid.m);
  FrameReport r;
  r.lower_bound = lo / md;
  r.upper_bound = hi / md;
  r.measure = grid.measure();
  r.lower_normalized = r.lower_bound / to_double(r.measure);
  r.upper_normalized = r.upper_bound / to_double(r.measure);
  r.budget = cardinality_budget(0.5 * epsilon, grid.n());
  r.cardinality = rows.size();
  r.density = Rational(static_cast<std::int64_t>(rows.size()), grid.m);
  r.epsilon = epsilon;
  return r;
}

Synthesis synthesize(const GridSpectrum& grid, double epsilon, const QuantizerConfig& config,
                     const Tolerances& tol) {
  grid.validate();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
  if (!budget_fits(epsilon, grid.n())) {
    throw ValidationError("grid with n = " + std::to_string(grid.n()) +
                          " cells violates ceil((1 + eps/2) n) <= (1 + eps) n; refine the grid");
  }
  const ComplexMatrix f = dft_submatrix(grid.m, grid.cells);
  const SubmatrixSelection sel =
      submatrix_select(f.scaled(1.0 / std::sqrt(static_cast<double>(grid.m))), 0.5 * epsilon, config, tol);

  Synthesis out;
  out.sampling = SamplingSet{grid.m, sel.rows, Rational{1}};
  out.report = frame_report(grid, sel.rows, epsilon);
  out.report.achieved_a = sel.achieved_a;
  out.report.theoretical_scale = sel.theoretical_scale;
  if (out.report.density > Rational(static_cast<std::int64_t>(std::ceil((1.0 + epsilon) * grid.n())), grid.m) ||
      to_double(out.report.density) > (1.0 + epsilon) * to_double(grid.measure()) * (1.0 + 1e-12)) {
    throw InvariantViolation("synthesized density exceeds (1 + eps)|Omega|");
  }
  return out;
}

SpectrumSynthesis synthesize_spectrum(const IntervalSpectrum& spec, double epsilon, double slack,
                                      const QuantizerConfig& config, const Tolerances& tol) {
  SpectrumSynthesis out;
  out.grid = cover_by_grid(spec, epsilon, slack);
  out.synthesis = synthesize(out.grid, epsilon, config, tol);
  // Omega in [0, D] rescales to [0, 1]; Lambda' in Z maps to D^{-1} Lambda'.
  const Rational d = spec.length;
  const double dd = to_double(d);
  auto& rep = out.synthesis.report;
  out.synthesis.sampling.spacing = 1 / d;
  rep.lower_bound *= dd;
  rep.upper_bound *= dd;
  rep.measure *= d;
  rep.density = out.synthesis.sampling.density();
  return out;
}

double pw_norm_squared(const GridSpectrum& grid, std::span<const Complex> coeffs) {
  if (coeffs.size() != grid.n()) throw ValidationError("one coefficient per cell required");
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s / static_cast<double>(grid.m);
}

namespace {

void require_compatible(const GridSpectrum& grid, const SamplingSet& sampling, std::span<const Complex> coeffs) {
  grid.validate();
  if (sampling.m != grid.m) throw ValidationError("sampling set and grid have different orders m");
  if (sampling.spacing != Rational{1}) throw ValidationError("frame sums are defined for the normalized grid (spacing 1)");
  if (coeffs.size() != grid.n()) throw ValidationError("one coefficient per cell required");
  for (std::size_t j : sampling.offsets)
    if (j >= static_cast<std::size_t>(grid.m)) throw ValidationError("sampling offset out of range");
}

// sum_{|l| <= L} sin^2(pi x) / (pi^2 m^2 (x + l)^2) with x = j/m.
double lattice_weight(std::size_t j, std::int64_t m, std::uint64_t periods) {
  const double md = static_cast<double>(m);
  if (j == 0) return 1.0 / (md * md);
  const double x = static_cast<double>(j) / md;
  const double s = std::sin(std::numbers::pi * x);
  const double big = static_cast<double>(periods);
  using boost::math::trigamma;
  const double positive = trigamma(x) - trigamma(x + big + 1.0);
  const double negative = periods == 0 ? 0.0 : trigamma(1.0 - x) - trigamma(1.0 - x + big);
  return s * s / (std::numbers::pi * std::numbers::pi * md * md) * (positive + negative);
}

}  // namespace

double frame_sum_truncated(const GridSpectrum& grid, const SamplingSet& sampling, std::span<const Complex> coeffs,
                           std::uint64_t periods) {
  require_compatible(grid, sampling, coeffs);
  double total = 0.0;
  for (std::size_t j : sampling.offsets) {
    Complex chat{};
    for (std::size_t k = 0; k < grid.n(); ++k)
      chat += coeffs[k] * unit_root(-static_cast<std::int64_t>(j * grid.cells[k]), grid.m);
    total += std::norm(chat) * lattice_weight(j, grid.m, periods);
  }
  return total;
}

std::pair<double, std::uint64_t> frame_sum_converged(const GridSpectrum& grid, const SamplingSet& sampling,
                                                     std::span<const Complex> coeffs, double tolerance) {
  const double norm2 = pw_norm_squared(grid, coeffs);
  std::uint64_t periods = 1;
  double prev = frame_sum_truncated(grid, sampling, coeffs, periods);
  while (periods < (std::uint64_t{1} << 50)) {
    periods *= 2;
    const double next = frame_sum_truncated(grid, sampling, coeffs, periods);
    if (std::abs(next - prev) < tolerance * norm2) return {next, periods};
    prev = next;
  }
  return {prev, periods};
}

Complex pw_evaluate(const GridSpectrum& grid, std::span<const Complex> coeffs, std::int64_t x) {
  if (coeffs.size() != grid.n()) throw ValidationError("one coefficient per cell required");
  const double md = static_cast<double>(grid.m);
  Complex kernel;
  if (x == 0) {
    kernel = 1.0 / md;
  } else {
    kernel = (unit_root(x, grid.m) - 1.0) / Complex(0.0, 2.0 * std::numbers::pi * static_cast<double>(x));
  }
  const std::int64_t xr = ((x % grid.m) + grid.m) % grid.m;
  Complex sum{};
  for (std::size_t k = 0; k < grid.n(); ++k) sum += coeffs[k] * unit_root(xr * static_cast<std::int64_t>(grid.cells[k]), grid.m);
  return sum * kernel;
}

SampleCheck pw_sample_check(const GridSpectrum& grid, const SamplingSet& sampling, std::span<const Complex> coeffs,
                            double radius, const FrameReport& report) {
  require_compatible(grid, sampling, coeffs);
  if (!(radius >= 0.0)) throw ValidationError("sampling radius must be nonnegative");
  const auto periods = static_cast<std::int64_t>(std::floor(radius / static_cast<double>(grid.m)));
  // Kahan summation; terms decay like 1/l^2.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t j : sampling.offsets) {
    for (std::int64_t l = -periods; l <= periods; ++l) {
      const double term = std::norm(pw_evaluate(grid, coeffs, static_cast<std::int64_t>(j) + grid.m * l)) - carry;
      const double t = sum + term;
      carry = (t - sum) - term;
      sum = t;
    }
  }
  SampleCheck out;
  out.sum = sum;
  out.ratio = sum / pw_norm_squared(grid, coeffs);
  out.lower_ratio = out.ratio / report.lower_bound;
  out.upper_ratio = out.ratio / report.upper_bound;
  return out;
}

Rational density_uniform(const SamplingSet& sampling) { return sampling.density(); }

std::pair<double, double> beurling_window_estimate(const SamplingSet& sampling, double r) {
  if (!(r > 0.0)) throw ValidationError("window length r must be positive");
  const double period = to_double(sampling.spacing) * static_cast<double>(sampling.m);
  const Window window{0.0, 2.0 * r + 2.0 * period};
  const PointSet1D points(sampling.points_in(window.lo, window.hi));
  const DensityEstimate est = beurling_bounds(points, window, r);
  return {est.lower, est.upper};
}

}  // namespace frameforge
