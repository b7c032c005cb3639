#include "frameforge/frame_select.hpp"

#include "frameforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace frameforge {

double lower_shape(double epsilon) {
  const double r = 1.0 - 1.0 / std::sqrt(1.0 + epsilon);
  return r * r;
}

double upper_shape(double epsilon) {
  const double r = 1.0 + 1.0 / std::sqrt(1.0 + epsilon);
  return r * r;
}

std::size_t cardinality_budget(double epsilon, std::size_t n) {
  return static_cast<std::size_t>(std::ceil((1.0 + epsilon) * static_cast<double>(n) * (1.0 - 1e-12)));
}

std::pair<double, double> measured_bounds(const ComplexMatrix& m, std::span<const std::size_t> indices,
                                          const Tolerances& tol) {
  if (indices.empty()) return {0.0, 0.0};
  const auto sv = singular_values(m.select_rows(indices), tol);
  const double hi = sv.front() * sv.front();
  // Fewer rows than columns: the smallest singular value of the n columns is 0.
  if (indices.size() < m.cols()) return {0.0, hi};
  return {sv.back() * sv.back(), hi};
}

namespace {

void require_equal_norms(const FrameFamily& frame, const Tolerances& tol) {
  const double expected = static_cast<double>(frame.dim()) / static_cast<double>(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double nrm = frame.norm_squared(i);
    if (std::abs(nrm - expected) > tol.equal_norm * expected) {
      throw ValidationError("frame vector " + std::to_string(i) + " has squared norm " +
                            std::to_string(nrm) + ", expected n/m = " + std::to_string(expected));
    }
  }
}

}  // namespace

SubsetFrame extract_unweighted(const FrameFamily& frame, double epsilon, const QuantizerConfig& config,
                               const Tolerances& tol) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
  frame.require_parseval(tol);
  require_equal_norms(frame, tol);

  const WeightedFrame weighted = bss_sparsify(frame, 1.0 + epsilon, tol);
  const double eps_quant = 0.5 * lower_shape(epsilon);
  const QuantizedFrame quantized = quantize_weights(weighted, eps_quant, config, tol);

  SubsetFrame out;
  out.base = frame;
  out.indices = quantized.support();
  out.epsilon = epsilon;
  out.budget = cardinality_budget(epsilon, frame.dim());
  out.sparsified_support = weighted.support.size();
  out.achieved_a = quantized.achieved_a();
  out.theoretical_scale = quantized.theoretical_scale();
  out.quantization_deviation = quantized.deviation();
  if (out.indices.empty()) throw QuantizationFailure("quantized frame has empty support", quantized.deviation());
  if (out.indices.size() > out.budget) {
    throw InvariantViolation("selected " + std::to_string(out.indices.size()) + " vectors, budget " +
                             std::to_string(out.budget));
  }
  const auto [lo, hi] = measured_bounds(frame.matrix(), out.indices, tol);
  if (!(lo > 0.0)) throw InvariantViolation("selected subset does not span C^n");
  out.lower_bound = lo;
  out.upper_bound = hi;
  return out;
}

SubmatrixSelection submatrix_select(const ComplexMatrix& m, double epsilon, const QuantizerConfig& config,
                                    const Tolerances& tol) {
  const double gram_norm = operator_norm(HermitianMatrix::gram(m), tol);
  if (gram_norm > 1.0 + tol.parseval) {
    throw ValidationError("||M* M|| = " + std::to_string(gram_norm) +
                          " exceeds 1; M is not a block of an orthonormal matrix");
  }
  // Rows of M and their conjugates have the same frame bounds.
  const SubsetFrame subset = extract_unweighted(FrameFamily(m), epsilon, config, tol);
  SubmatrixSelection out;
  out.rows = subset.indices;
  out.lower_bound = subset.lower_bound;
  out.upper_bound = subset.upper_bound;
  out.budget = subset.budget;
  out.achieved_a = subset.achieved_a;
  out.theoretical_scale = subset.theoretical_scale;
  return out;
}

BestSubset best_subset_exhaustive(const ComplexMatrix& m, std::size_t budget, const Tolerances& tol) {
  if (m.rows() > 16) throw ValidationError("exhaustive subset search is limited to m <= 16");
  const std::size_t k = std::min(budget, m.rows());
  BestSubset best;
  best.lower_bound = -1.0;
  // Superset rows can only raise sigma_min, so subsets of size exactly k suffice.
  std::vector<bool> mask(m.rows(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) rows.push_back(i);
    const auto [lo, hi] = measured_bounds(m, rows, tol);
    ++best.subsets_examined;
    if (lo > best.lower_bound) {
      best.lower_bound = lo;
      best.upper_bound = hi;
      best.rows = std::move(rows);
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace frameforge
