#pragma once

// Exponential frames on the real line. A spectrum is covered by grid cells
// [k/m, (k+1)/m], k in I; a row selection J of the DFT block F_I yields the
// sampling set U_{j in J} (j + mZ), whose frame bounds are exactly
// sigma_min(F_I(J))^2 / m and sigma_max(F_I(J))^2 / m.

#include "frameforge/config.hpp"
#include "frameforge/numerics.hpp"
#include "frameforge/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace frameforge {

struct GridSpectrum {
  std::int64_t m = 0;
  /// Sorted, distinct cell indices in [0, m).
  std::vector<std::size_t> cells;

  std::size_t n() const noexcept { return cells.size(); }
  Rational measure() const { return Rational(static_cast<std::int64_t>(cells.size()), m); }
  /// Throws ValidationError if the invariants do not hold.
  void validate() const;
};

/// Finite union of closed intervals with rational endpoints inside a window
/// of length `length` (after translation).
struct IntervalSpectrum {
  Rational length{1};
  std::vector<std::pair<Rational, Rational>> intervals;

  Rational measure() const;
  void validate() const;
};

/// Lambda = spacing * U_{j in J} (j + mZ). For spectra of length D the
/// spacing is 1/D; density is #J / (m * spacing).
struct SamplingSet {
  std::int64_t m = 0;
  std::vector<std::size_t> offsets;
  Rational spacing{1};

  Rational density() const;
  /// All points of Lambda in [lo, hi], ascending.
  std::vector<double> points_in(double lo, double hi) const;
};

struct FrameReport {
  double lower_bound = 0.0;  // A_exact
  double upper_bound = 0.0;  // B_exact
  Rational measure{0};
  double lower_normalized = 0.0;  // A_exact / |Omega|
  double upper_normalized = 0.0;
  std::size_t budget = 0;
  std::size_t cardinality = 0;
  Rational density{0};
  double epsilon = 0.0;
  double achieved_a = 0.0;
  double theoretical_scale = 0.0;
};

/// Smallest m = 2^p whose cover of `spec` has measure <= (1 + slack)|Omega|
/// and whose cell count n satisfies ceil((1 + eps/2) n) <= (1 + eps) n.
/// Intervals are translated to start at 0 and scaled by 1/length.
GridSpectrum cover_by_grid(const IntervalSpectrum& spec, double epsilon, double slack,
                           int max_log2 = 20);

/// m x n block of the DFT matrix, entries exp(2 pi i j k / m), k in `cells`.
ComplexMatrix dft_submatrix(std::int64_t m, std::span<const std::size_t> cells);

/// Exact frame bounds of the sampling offsets `rows` for the grid spectrum.
FrameReport frame_report(const GridSpectrum& grid, std::span<const std::size_t> rows, double epsilon);

struct Synthesis {
  SamplingSet sampling;
  FrameReport report;
};

/// Row selection with eps/2 on (1/sqrt m) F_I.
Synthesis synthesize(const GridSpectrum& grid, double epsilon, const QuantizerConfig& config = {},
                     const Tolerances& tol = default_tolerances());

/// cover_by_grid followed by synthesize, rescaled to the original spectrum
/// length (spacing 1/D, bounds and measure times D).
struct SpectrumSynthesis {
  GridSpectrum grid;
  Synthesis synthesis;
};
SpectrumSynthesis synthesize_spectrum(const IntervalSpectrum& spec, double epsilon, double slack,
                                      const QuantizerConfig& config = {},
                                      const Tolerances& tol = default_tolerances());

/// ||f||^2 for the Paley-Wiener function with fhat = c_k on cell k.
double pw_norm_squared(const GridSpectrum& grid, std::span<const Complex> coeffs);

/// sum_{j in J} sum_{|l| <= L} |<fhat, e_{j+ml}>|^2 for the cellwise-constant
/// fhat with coefficients `coeffs`. The per-offset lattice sums are evaluated
/// in closed form, so the cost does not grow with L.
double frame_sum_truncated(const GridSpectrum& grid, const SamplingSet& sampling,
                           std::span<const Complex> coeffs, std::uint64_t periods);

/// Doubles L from 1 until successive truncated sums differ by less than
/// `tolerance` * ||f||^2. Returns the last sum and L.
std::pair<double, std::uint64_t> frame_sum_converged(const GridSpectrum& grid, const SamplingSet& sampling,
                                                     std::span<const Complex> coeffs,
                                                     double tolerance = 1e-8);

/// f(x) = sum_k c_k int_{cell k} e^{2 pi i x xi} d xi, evaluated directly.
Complex pw_evaluate(const GridSpectrum& grid, std::span<const Complex> coeffs, std::int64_t x);

struct SampleCheck {
  double sum = 0.0;          // sum |f(lambda)|^2 over the window
  double ratio = 0.0;        // sum / ||f||^2
  double lower_ratio = 0.0;  // ratio / A_exact (>= 1 when the lower inequality holds)
  double upper_ratio = 0.0;  // ratio / B_exact (<= 1 when the upper inequality holds)
};

/// Samples f on lambda = j + m l, |l| <= floor(R / m), by direct evaluation.
SampleCheck pw_sample_check(const GridSpectrum& grid, const SamplingSet& sampling,
                            std::span<const Complex> coeffs, double radius, const FrameReport& report);

/// #J / (m * spacing)
Rational density_uniform(const SamplingSet& sampling);

/// Sliding-window Beurling estimate on a truncation covering every window
/// position of one period.
std::pair<double, double> beurling_window_estimate(const SamplingSet& sampling, double r);

}  // namespace frameforge
