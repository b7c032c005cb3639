#pragma once

// Unweighted subset extraction from equal-norm Parseval frames: sparsify with
// d = 1 + eps, quantize the weights, keep the support. Frame bounds of the
// resulting subset are measured, not inferred from the (unnumbered)
// constants of the existence argument.

#include "frameforge/config.hpp"
#include "frameforge/numerics.hpp"
#include "frameforge/sparsifier.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace frameforge {

struct SubsetFrame {
  FrameFamily base;
  /// Selected indices, ascending.
  std::vector<std::size_t> indices;
  /// sigma_min^2 and sigma_max^2 of the row submatrix.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double epsilon = 0.0;
  /// ceil((1 + eps) n)
  std::size_t budget = 0;
  /// Diagnostics from the two stages.
  std::size_t sparsified_support = 0;
  double achieved_a = 0.0;
  double theoretical_scale = 0.0;
  double quantization_deviation = 0.0;
};

/// (1 - 1/sqrt(1 + eps))^2
double lower_shape(double epsilon);
/// (1 + 1/sqrt(1 + eps))^2
double upper_shape(double epsilon);
/// ceil((1 + eps) n), robust to representation error in (1 + eps) n.
std::size_t cardinality_budget(double epsilon, std::size_t n);

/// sigma_min^2, sigma_max^2 of the rows `indices` of `m`.
std::pair<double, double> measured_bounds(const ComplexMatrix& m,
                                          std::span<const std::size_t> indices,
                                          const Tolerances& tol = default_tolerances());

SubsetFrame extract_unweighted(const FrameFamily& frame, double epsilon,
                               const QuantizerConfig& config = {},
                               const Tolerances& tol = default_tolerances());

struct SubmatrixSelection {
  std::vector<std::size_t> rows;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::size_t budget = 0;
  double achieved_a = 0.0;
  double theoretical_scale = 0.0;
};

/// Row selection for an m x n column block of an orthonormal m x m matrix
/// with equal row norms.
SubmatrixSelection submatrix_select(const ComplexMatrix& m, double epsilon,
                                    const QuantizerConfig& config = {},
                                    const Tolerances& tol = default_tolerances());

/// Exhaustive search over all row subsets of size min(budget, m) for the one
/// maximizing sigma_min^2. Limited to m <= 16.
struct BestSubset {
  std::vector<std::size_t> rows;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::size_t subsets_examined = 0;
};
BestSubset best_subset_exhaustive(const ComplexMatrix& m, std::size_t budget,
                                  const Tolerances& tol = default_tolerances());

}  // namespace frameforge
