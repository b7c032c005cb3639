#pragma once

// Barrier-potential spectral sparsification of Parseval frames and the
// quantization of the resulting weights to integer multiples of a common unit.

#include "frameforge/config.hpp"
#include "frameforge/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace frameforge {

/// An ordered family of m vectors in C^n, stored as the rows of an m x n matrix.
class FrameFamily {
 public:
  FrameFamily() = default;
  explicit FrameFamily(ComplexMatrix vectors);

  std::size_t dim() const noexcept { return vectors_.cols(); }
  std::size_t size() const noexcept { return vectors_.rows(); }
  std::span<const Complex> vector(std::size_t i) const { return vectors_.row(i); }
  const ComplexMatrix& matrix() const noexcept { return vectors_; }

  double norm_squared(std::size_t i) const;
  double max_norm_squared() const;
  /// sum_i v_i v_i^*
  HermitianMatrix frame_operator() const;
  /// ||sum_i v_i v_i^* - I||
  double parseval_defect(const Tolerances& tol = default_tolerances()) const;

  /// Throws ValidationError unless the family is Parseval, has m >= n and no
  /// zero vectors.
  void require_parseval(const Tolerances& tol = default_tolerances()) const;

 private:
  ComplexMatrix vectors_;
};

/// A frame family with nonnegative weights; the output of bss_sparsify.
struct WeightedFrame {
  FrameFamily base;
  std::vector<double> weights;
  /// Indices with nonzero weight, ascending.
  std::vector<std::size_t> support;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Requested and effective (ceil(dn)/n) oversampling parameters.
  double d = 0.0;
  double d_effective = 0.0;
  std::size_t steps = 0;

  HermitianMatrix weighted_operator() const;
};

/// Weights realized as l_i * unit with integer multiplicities l_i.
/// Instances can only be obtained through `certify`, which re-measures the
/// deviation from the target operator and rejects violations.
class QuantizedFrame {
 public:
  static QuantizedFrame certify(FrameFamily base, const HermitianMatrix& target,
                                std::vector<std::uint64_t> multiplicities, double a,
                                double epsilon, const Tolerances& tol = default_tolerances());

  const FrameFamily& base() const noexcept { return base_; }
  const std::vector<std::uint64_t>& multiplicities() const noexcept { return multiplicities_; }
  double unit() const noexcept { return 1.0 / a_; }
  /// The scale a = 1/unit.
  double achieved_a() const noexcept { return a_; }
  /// ||(1/a) sum l_i v_i v_i^* - T|| as measured at construction.
  double deviation() const noexcept { return deviation_; }
  double epsilon() const noexcept { return epsilon_; }
  /// delta / epsilon^2 with delta = max ||v_i||^2.
  double theoretical_scale() const noexcept { return theoretical_scale_; }

  std::vector<double> weights() const;
  std::vector<std::size_t> support() const;

 private:
  QuantizedFrame() = default;

  FrameFamily base_;
  std::vector<std::uint64_t> multiplicities_;
  double a_ = 0.0;
  double deviation_ = 0.0;
  double epsilon_ = 0.0;
  double theoretical_scale_ = 0.0;
};

/// Step sizes and initial slack of the two barriers.
struct BarrierParameters {
  double delta_upper = 0.0;
  double delta_lower = 0.0;
  double eps_upper = 0.0;
  double eps_lower = 0.0;

  static BarrierParameters for_oversampling(double d);
};

struct BarrierState {
  HermitianMatrix a;
  double upper = 0.0;
  double lower = 0.0;
  std::size_t step = 0;
  BarrierParameters params;
  /// Potentials tracked incrementally through Sherman-Morrison updates.
  double phi_upper = 0.0;
  double phi_lower = 0.0;

  /// A = 0, l0 = -n/eps_L, u0 = n/eps_U.
  static BarrierState initial(std::size_t n, const BarrierParameters& params);
};

struct BarrierStep {
  std::size_t index = 0;
  double weight = 0.0;
  BarrierState next;
};

/// Adds t v_i v_i^* for the admissible index maximizing L_A(v_i) - U_A(v_i)
/// (lowest index on ties), with t = 2 / (U + L), and advances both barriers.
BarrierStep barrier_step(const BarrierState& state, const FrameFamily& frame,
                         const Tolerances& tol = default_tolerances());

/// Selects at most ceil(d n) weighted vectors with
/// (1 - 1/sqrt d)^2 I <= sum s_i v_i v_i^* <= (1 + 1/sqrt d)^2 I.
WeightedFrame bss_sparsify(const FrameFamily& frame, double d,
                           const Tolerances& tol = default_tolerances());

/// Replaces the weights of `weighted` by l_i / a with ||(1/a) sum l_i v_i v_i^* - T|| < epsilon.
QuantizedFrame quantize_weights(const WeightedFrame& weighted, double epsilon,
                                const QuantizerConfig& config = {},
                                const Tolerances& tol = default_tolerances());

}  // namespace frameforge
