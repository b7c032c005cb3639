#include "frameforge/sparsifier.hpp"

#include "frameforge/errors.hpp"
#include "frameforge/random.hpp"

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace frameforge {

FrameFamily::FrameFamily(ComplexMatrix vectors) : vectors_(std::move(vectors)) {}

double FrameFamily::norm_squared(std::size_t i) const {
  double s = 0.0;
  for (const auto& z : vector(i)) s += std::norm(z);
  return s;
}

double FrameFamily::max_norm_squared() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s = std::max(s, norm_squared(i));
  return s;
}

HermitianMatrix FrameFamily::frame_operator() const {
  std::vector<double> ones(size(), 1.0);
  return HermitianMatrix::weighted_outer_sum(vectors_, ones);
}

double FrameFamily::parseval_defect(const Tolerances& tol) const {
  return operator_norm(frame_operator() - HermitianMatrix::identity(dim()), tol);
}

void FrameFamily::require_parseval(const Tolerances& tol) const {
  if (dim() == 0) throw ValidationError("frame dimension must be positive");
  if (size() < dim()) {
    throw ValidationError("frame has " + std::to_string(size()) + " vectors in dimension " +
                          std::to_string(dim()) + "; a Parseval frame needs m >= n");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (norm_squared(i) == 0.0) throw ValidationError("frame vector " + std::to_string(i) + " is zero");
  }
  const double defect = parseval_defect(tol);
  if (!(defect <= tol.parseval)) {
    throw ValidationError("frame is not Parseval: ||sum v v* - I|| = " + std::to_string(defect));
  }
}

HermitianMatrix WeightedFrame::weighted_operator() const {
  return HermitianMatrix::weighted_outer_sum(base.matrix(), weights);
}

QuantizedFrame QuantizedFrame::certify(FrameFamily base, const HermitianMatrix& target,
                                       std::vector<std::uint64_t> multiplicities, double a,
                                       double epsilon, const Tolerances& tol) {
  if (multiplicities.size() != base.size()) throw ValidationError("one multiplicity per vector required");
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("quantization scale must be positive");
  std::vector<double> w(multiplicities.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(multiplicities[i]) / a;
  const HermitianMatrix op = HermitianMatrix::weighted_outer_sum(base.matrix(), w);
  const double dev = operator_norm(op - target, tol);
  if (!(dev < epsilon)) {
    throw QuantizationFailure("quantized operator deviates by " + std::to_string(dev) +
                                  " >= epsilon " + std::to_string(epsilon),
                              dev);
  }
  QuantizedFrame q;
  q.theoretical_scale_ = base.max_norm_squared() / (epsilon * epsilon);
  q.base_ = std::move(base);
  q.multiplicities_ = std::move(multiplicities);
  q.a_ = a;
  q.deviation_ = dev;
  q.epsilon_ = epsilon;
  return q;
}

std::vector<double> QuantizedFrame::weights() const {
  std::vector<double> w(multiplicities_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(multiplicities_[i]) / a_;
  return w;
}

std::vector<std::size_t> QuantizedFrame::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < multiplicities_.size(); ++i)
    if (multiplicities_[i] != 0) s.push_back(i);
  return s;
}

BarrierParameters BarrierParameters::for_oversampling(double d) {
  const double r = std::sqrt(d);
  BarrierParameters p;
  p.delta_lower = 1.0;
  p.delta_upper = (r + 1.0) / (r - 1.0);
  p.eps_lower = 1.0 / r;
  p.eps_upper = (r - 1.0) / (d + r);
  return p;
}

BarrierState BarrierState::initial(std::size_t n, const BarrierParameters& params) {
  BarrierState s;
  s.a = HermitianMatrix::zero(n);
  s.params = params;
  s.lower = -static_cast<double>(n) / params.eps_lower;
  s.upper = static_cast<double>(n) / params.eps_upper;
  s.phi_upper = params.eps_upper;
  s.phi_lower = params.eps_lower;
  return s;
}

BarrierStep barrier_step(const BarrierState& state, const FrameFamily& frame, const Tolerances& tol) {
  const std::size_t n = frame.dim();
  if (state.a.dim() != n) throw ValidationError("barrier state dimension does not match frame");

  const EigenDecomposition eig = hermitian_eigen(state.a, tol);
  const auto& lam = eig.values;
  const double u = state.upper;
  const double l = state.lower;
  const double u_next = u + state.params.delta_upper;
  const double l_next = l + state.params.delta_lower;
  if (!(lam.front() > l_next) || !(lam.back() < u)) {
    throw InvariantViolation("barrier invariant l' < lambda_min, lambda_max < u violated at step " +
                             std::to_string(state.step));
  }

  double phi_u = 0.0, phi_u_next = 0.0, phi_l = 0.0, phi_l_next = 0.0;
  for (double x : lam) {
    phi_u += 1.0 / (u - x);
    phi_u_next += 1.0 / (u_next - x);
    phi_l += 1.0 / (x - l);
    phi_l_next += 1.0 / (x - l_next);
  }
  const double du = phi_u - phi_u_next;
  const double dl = phi_l_next - phi_l;

  std::size_t best = frame.size();
  double best_gap = -std::numeric_limits<double>::infinity();
  double best_u = 0.0, best_l = 0.0;
  double best_q1u = 0.0, best_q2u = 0.0, best_q1l = 0.0, best_q2l = 0.0;

  std::vector<double> proj(n);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const auto v = frame.vector(i);
    for (std::size_t k = 0; k < n; ++k) {
      Complex p{};
      for (std::size_t j = 0; j < n; ++j) p += std::conj(eig.vectors(j, k)) * v[j];
      proj[k] = std::norm(p);
    }
    double q1u = 0.0, q2u = 0.0, q1l = 0.0, q2l = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double gu = u_next - lam[k];
      const double gl = lam[k] - l_next;
      q1u += proj[k] / gu;
      q2u += proj[k] / (gu * gu);
      q1l += proj[k] / gl;
      q2l += proj[k] / (gl * gl);
    }
    const double upper_cost = q2u / du + q1u;
    const double lower_gain = q2l / dl - q1l;
    const double gap = lower_gain - upper_cost;
    // Near-ties go to the lowest index so the choice does not depend on roundoff.
    if (lower_gain >= upper_cost && gap > best_gap + 1e-9 * std::max(1.0, std::abs(gap))) {
      best = i;
      best_gap = gap;
      best_u = upper_cost;
      best_l = lower_gain;
      best_q1u = q1u;
      best_q2u = q2u;
      best_q1l = q1l;
      best_q2l = q2l;
    }
  }
  if (best == frame.size()) {
    throw InvariantViolation("no admissible barrier step at step " + std::to_string(state.step));
  }

  BarrierStep out;
  out.index = best;
  out.weight = 2.0 / (best_u + best_l);
  const double t = out.weight;
  out.next.a = state.a.rank_one_update(frame.vector(best), t);
  out.next.upper = u_next;
  out.next.lower = l_next;
  out.next.step = state.step + 1;
  out.next.params = state.params;
  out.next.phi_upper = phi_u_next + t * best_q2u / (1.0 - t * best_q1u);
  out.next.phi_lower = phi_l_next - t * best_q2l / (1.0 + t * best_q1l);
  return out;
}

WeightedFrame bss_sparsify(const FrameFamily& frame, double d, const Tolerances& tol) {
  if (!(d > 1.0) || !std::isfinite(d)) throw ValidationError("oversampling d must be finite and > 1");
  frame.require_parseval(tol);

  const std::size_t n = frame.dim();
  const auto steps =
      static_cast<std::size_t>(std::ceil(d * static_cast<double>(n) * (1.0 - 1e-12)));
  const double d_eff = static_cast<double>(steps) / static_cast<double>(n);
  const BarrierParameters params = BarrierParameters::for_oversampling(d_eff);

  BarrierState state = BarrierState::initial(n, params);
  std::vector<double> raw(frame.size(), 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    BarrierStep step = barrier_step(state, frame, tol);
    raw[step.index] += step.weight;
    state = std::move(step.next);
  }

  // Rescale so the lower barrier lands on (1 - 1/sqrt d')^2; the upper one
  // then lands on (1 + 1/sqrt d')^2.
  const double r = std::sqrt(d_eff);
  const double kappa = (1.0 - 1.0 / r) * (1.0 - 1.0 / r) / state.lower;

  WeightedFrame out;
  out.base = frame;
  out.weights.resize(frame.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.weights[i] = kappa * raw[i];
    if (raw[i] != 0.0) out.support.push_back(i);
  }
  out.d = d;
  out.d_effective = d_eff;
  out.steps = steps;

  const auto ev = hermitian_eigenvalues(out.weighted_operator(), tol);
  out.lambda_min = ev.front();
  out.lambda_max = ev.back();
  const double lo = (1.0 - 1.0 / std::sqrt(d)) * (1.0 - 1.0 / std::sqrt(d));
  const double hi = (1.0 + 1.0 / std::sqrt(d)) * (1.0 + 1.0 / std::sqrt(d));
  if (out.support.size() > steps || out.lambda_min < lo - tol.spectral_bound ||
      out.lambda_max > hi + tol.spectral_bound) {
    throw InvariantViolation("sparsified frame violates its spectral bounds: [" +
                             std::to_string(out.lambda_min) + ", " + std::to_string(out.lambda_max) + "]");
  }
  return out;
}

namespace {

// Draws a multinomial count vector by sequential conditional binomials.
std::vector<std::uint64_t> multinomial(std::uint64_t draws, std::span<const double> probs,
                                       boost::random::mt19937_64& gen) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double remaining_mass = 1.0;
  std::uint64_t remaining = draws;
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    if (i + 1 == probs.size()) {
      counts[i] = remaining;
      break;
    }
    const double p = std::clamp(probs[i] / remaining_mass, 0.0, 1.0);
    boost::random::binomial_distribution<std::int64_t, double> binom(
        static_cast<std::int64_t>(remaining), p);
    counts[i] = static_cast<std::uint64_t>(binom(gen));
    remaining -= counts[i];
    remaining_mass -= probs[i];
  }
  return counts;
}

}  // namespace

QuantizedFrame quantize_weights(const WeightedFrame& weighted, double epsilon,
                                const QuantizerConfig& config, const Tolerances& tol) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("quantization epsilon must lie in (0, 1)");
  if (config.trials == 0) throw ValidationError("quantizer needs at least one trial");
  if (!(config.grid_ratio > 1.0)) throw ValidationError("quantizer grid ratio must exceed 1");
  const FrameFamily& base = weighted.base;
  if (weighted.weights.size() != base.size()) throw ValidationError("one weight per vector required");

  std::vector<std::size_t> support;
  double total = 0.0;
  for (std::size_t i = 0; i < weighted.weights.size(); ++i) {
    const double s = weighted.weights[i];
    if (s < 0.0 || !std::isfinite(s)) throw ValidationError("weights must be finite and nonnegative");
    if (s > 0.0) {
      support.push_back(i);
      total += s;
    }
  }
  if (support.empty()) throw ValidationError("weighted frame has no positive weight");

  const HermitianMatrix target = weighted.weighted_operator();
  const double delta = base.max_norm_squared();
  const double a_min = delta / (epsilon * epsilon);
  const double n = static_cast<double>(base.dim());
  const double a_max = 64.0 * std::log(2.0 * n) * a_min;
  double best_dev = std::numeric_limits<double>::infinity();

  // Equal weights s are represented exactly by a = k/s.
  const auto [wmin, wmax] = std::minmax_element(
      support.begin(), support.end(),
      [&](std::size_t i, std::size_t j) { return weighted.weights[i] < weighted.weights[j]; });
  // Draw counts must stay representable.
  constexpr double kMaxDraws = 9.0e18;
  if (weighted.weights[*wmin] == weighted.weights[*wmax] && a_min * weighted.weights[*wmin] < kMaxDraws) {
    const double s = weighted.weights[*wmin];
    const double k = std::ceil(a_min * s);
    std::vector<std::uint64_t> mult(base.size(), 0);
    for (std::size_t i : support) mult[i] = static_cast<std::uint64_t>(k);
    try {
      return QuantizedFrame::certify(base, target, std::move(mult), k / s, epsilon, tol);
    } catch (const QuantizationFailure& e) {
      best_dev = e.best_deviation();
    }
  }

  std::vector<double> probs;
  probs.reserve(support.size());
  for (std::size_t i : support) probs.push_back(weighted.weights[i] / total);

  std::vector<double> grid;
  for (double a = a_min; a < a_max * (1.0 - 1e-12); a *= config.grid_ratio) grid.push_back(a);
  grid.push_back(a_max);

  for (std::size_t level = 0; level < grid.size(); ++level) {
    const double a = grid[level];
    if (!(a * total < kMaxDraws)) {
      throw QuantizationFailure("scale a = " + std::to_string(a) + " needs more than 9e18 draws; raise epsilon",
                                best_dev);
    }
    const auto draws = static_cast<std::uint64_t>(std::llround(a * total));
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      boost::random::mt19937_64 gen(derive_seed(config.seed, level, trial));
      const auto counts = multinomial(draws, probs, gen);
      std::vector<std::uint64_t> mult(base.size(), 0);
      for (std::size_t k = 0; k < support.size(); ++k) mult[support[k]] = counts[k];
      try {
        return QuantizedFrame::certify(base, target, std::move(mult), a, epsilon, tol);
      } catch (const QuantizationFailure& e) {
        best_dev = std::min(best_dev, e.best_deviation());
      }
    }
  }
  throw QuantizationFailure("weight quantization failed for every trial up to a = " +
                                std::to_string(a_max) + "; best deviation " + std::to_string(best_dev),
                            best_dev);
}

}  // namespace frameforge
