#include "frameforge/errors.hpp"
#include "frameforge/random.hpp"
#include "frameforge/sparsifier.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

using namespace frameforge;

namespace {

double lower_target(double d) { return std::pow(1.0 - 1.0 / std::sqrt(d), 2); }
double upper_target(double d) { return std::pow(1.0 + 1.0 / std::sqrt(d), 2); }

FrameFamily scalar_frame(std::vector<double> values) {
  std::vector<Complex> e(values.begin(), values.end());
  return FrameFamily(ComplexMatrix(values.size(), 1, std::move(e)));
}

double op_norm_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto ev = hermitian_eigenvalues(a - b);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace

TEST_CASE("frame validation") {
  CHECK_THROWS_AS(FrameFamily(ComplexMatrix::identity(3).scaled(2.0)).require_parseval(), ValidationError);
  CHECK_THROWS_AS(scalar_frame({1.0, 0.0}).require_parseval(), ValidationError);
  const ComplexMatrix wide(1, 2, {Complex(1.0), Complex(0.0)});
  CHECK_THROWS_AS(FrameFamily(wide).require_parseval(), ValidationError);
  CHECK_THROWS_AS(bss_sparsify(FrameFamily(ComplexMatrix::identity(2)), 1.0), ValidationError);
  CHECK_THROWS_AS(bss_sparsify(FrameFamily(ComplexMatrix::identity(2)), 0.5), ValidationError);
  CHECK_NOTHROW(FrameFamily(random_parseval_frame(9, 3, 4)).require_parseval());
}

TEST_CASE("orthonormal basis is sparsified within the spectral window") {
  const WeightedFrame w = bss_sparsify(FrameFamily(ComplexMatrix::identity(3)), 2.0);
  CHECK(w.support.size() <= 6);
  CHECK(w.steps == 6);
  const auto ev = hermitian_eigenvalues(w.weighted_operator());
  CHECK(ev.front() >= lower_target(2.0) - 1e-9);
  CHECK(ev.back() <= upper_target(2.0) + 1e-9);
}

TEST_CASE("scalar frame with d = 4") {
  const FrameFamily f = scalar_frame({std::sqrt(0.1), std::sqrt(0.2), std::sqrt(0.3), std::sqrt(0.15), std::sqrt(0.25)});
  const WeightedFrame w = bss_sparsify(f, 4.0);
  CHECK(w.support.size() <= 4);
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) total += w.weights[i] * f.norm_squared(i);
  CHECK(total >= 0.25 - 1e-9);
  CHECK(total <= 2.25 + 1e-9);
}

TEST_CASE("random Parseval frame m=40 n=4 d=4 has condition ratio at most 9") {
  const FrameFamily f(random_parseval_frame(40, 4, 2024));
  const WeightedFrame w = bss_sparsify(f, 4.0);
  CHECK(w.support.size() <= 16);
  const auto ev = oracle::eigenvalues(w.weighted_operator().matrix());
  CHECK(ev.front() > 0.0);
  CHECK(ev.back() / ev.front() <= 9.0 + 1e-9);
  CHECK(std::abs(ev.front() - w.lambda_min) <= 1e-12);
  CHECK(std::abs(ev.back() - w.lambda_max) <= 1e-12);
}

TEST_CASE("fractional d n is rounded up and rescaled") {
  const FrameFamily f(random_parseval_frame(15, 3, 5));
  const WeightedFrame w = bss_sparsify(f, 1.5);
  CHECK(w.steps == 5);
  CHECK(w.d_effective == doctest::Approx(5.0 / 3.0));
  CHECK(w.lambda_min >= lower_target(1.5) - 1e-9);
  CHECK(w.lambda_max <= upper_target(1.5) + 1e-9);
}

TEST_CASE("barrier parameters") {
  const auto p = BarrierParameters::for_oversampling(4.0);
  CHECK(p.delta_lower == 1.0);
  CHECK(p.delta_upper == doctest::Approx(3.0));
  CHECK(p.eps_lower == doctest::Approx(0.5));
  CHECK(p.eps_upper == doctest::Approx(1.0 / 6.0));
  const BarrierState s = BarrierState::initial(2, p);
  CHECK(s.lower == doctest::Approx(-4.0));
  CHECK(s.upper == doctest::Approx(12.0));
}

TEST_CASE("first scalar step lands strictly between the moved barriers") {
  const FrameFamily f = scalar_frame({std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)});
  const BarrierState s0 = BarrierState::initial(1, BarrierParameters::for_oversampling(2.0));
  const BarrierStep st = barrier_step(s0, f);
  const double value = st.weight * f.norm_squared(st.index);
  CHECK(st.next.lower < value);
  CHECK(value < st.next.upper);
  CHECK(st.next.lower == doctest::Approx(s0.lower + 1.0));
  CHECK(st.next.upper == doctest::Approx(s0.upper + s0.params.delta_upper));
}

TEST_CASE("two-step scalar run ends inside the theorem bounds") {
  const FrameFamily f = scalar_frame({std::sqrt(0.6), std::sqrt(0.4)});
  const WeightedFrame w = bss_sparsify(f, 2.0);
  CHECK(w.steps == 2);
  const double total = w.weights[0] * 0.6 + w.weights[1] * 0.4;
  CHECK(total >= lower_target(2.0) - 1e-9);
  CHECK(total <= upper_target(2.0) + 1e-9);
}

TEST_CASE("tracked potentials match recomputation and never increase") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const FrameFamily f(random_parseval_frame(5 * n, n, derive_seed(17, seed)));
    for (double d : {1.5, 2.0, 4.0}) {
      const auto steps = static_cast<std::size_t>(std::ceil(d * static_cast<double>(n) - 1e-9));
      const auto params = BarrierParameters::for_oversampling(static_cast<double>(steps) / static_cast<double>(n));
      BarrierState s = BarrierState::initial(n, params);
      for (std::size_t k = 0; k < steps; ++k) {
        BarrierStep st = barrier_step(s, f);
        const double phi_u = trace_of_inverse(st.next.a, st.next.upper, Side::upper);
        const double phi_l = trace_of_inverse(st.next.a, st.next.lower, Side::lower);
        CHECK(std::abs(phi_u - st.next.phi_upper) <= 1e-8);
        CHECK(std::abs(phi_l - st.next.phi_lower) <= 1e-8);
        CHECK(phi_u <= params.eps_upper + 1e-12);
        CHECK(phi_l <= params.eps_lower + 1e-12);
        CHECK(phi_u <= trace_of_inverse(s.a, s.upper, Side::upper) + 1e-12);
        CHECK(phi_l <= trace_of_inverse(s.a, s.lower, Side::lower) + 1e-12);
        const auto ev = hermitian_eigenvalues(st.next.a);
        CHECK(st.next.lower < ev.front());
        CHECK(ev.back() < st.next.upper);
        CHECK(st.next.step == k + 1);
        s = std::move(st.next);
      }
    }
  }
}

TEST_CASE("sparsification over a seeded family of frames") {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const std::size_t m = n * (2 + seed % 9);
    const double d = std::array<double, 3>{1.5, 2.0, 4.0}[seed % 3];
    const FrameFamily f(random_parseval_frame(m, n, derive_seed(3, seed)));
    const WeightedFrame w = bss_sparsify(f, d);
    const auto budget = static_cast<std::size_t>(std::ceil(d * static_cast<double>(n) - 1e-9));
    CHECK(w.support.size() <= budget);
    const auto ev = oracle::eigenvalues(w.weighted_operator().matrix());
    CHECK(ev.front() >= lower_target(d) - 1e-9);
    CHECK(ev.back() <= upper_target(d) + 1e-9);
    for (double s : w.weights) CHECK(s >= 0.0);
  }
}

TEST_CASE("sparsification is deterministic") {
  const FrameFamily f(random_parseval_frame(30, 5, 11));
  const WeightedFrame a = bss_sparsify(f, 2.0);
  const WeightedFrame b = bss_sparsify(f, 2.0);
  CHECK(a.weights == b.weights);
  CHECK(a.support == b.support);
  CHECK(a.lambda_min == b.lambda_min);
}

TEST_CASE("single weight quantizes to a nearby integer multiple") {
  WeightedFrame w;
  w.base = scalar_frame({1.0});
  w.weights = {2.5};
  w.support = {0};
  const QuantizedFrame q = quantize_weights(w, 0.3);
  REQUIRE(q.multiplicities().size() == 1);
  CHECK(std::abs(static_cast<double>(q.multiplicities()[0]) * q.unit() - 2.5) < 0.3);
  CHECK(q.deviation() < 0.3);
  CHECK(q.theoretical_scale() == doctest::Approx(1.0 / 0.09));
}

TEST_CASE("equal weights quantize exactly") {
  const FrameFamily f(random_parseval_frame(12, 3, 8));
  WeightedFrame w;
  w.base = f;
  w.weights.assign(12, 0.0);
  for (std::size_t i : {1u, 4u, 5u, 9u}) {
    w.weights[i] = 0.7;
    w.support.push_back(i);
  }
  const QuantizedFrame q = quantize_weights(w, 0.2);
  std::uint64_t common = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    if (w.weights[i] == 0.0) {
      CHECK(q.multiplicities()[i] == 0);
    } else {
      if (common == 0) common = q.multiplicities()[i];
      CHECK(q.multiplicities()[i] == common);
    }
  }
  CHECK(common > 0);
  CHECK(q.deviation() <= 1e-12);
}

TEST_CASE("random weighted frames quantize within the certified bound") {
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FrameFamily f(random_parseval_frame(20, 3, derive_seed(51, seed)));
    const WeightedFrame sparse = bss_sparsify(f, 2.0 + static_cast<double>(seed % 3));
    for (double eps : {0.3, 0.5}) {
      QuantizerConfig cfg;
      cfg.seed = seed;
      const QuantizedFrame q = quantize_weights(sparse, eps, cfg);
      const double dev = op_norm_diff(HermitianMatrix::weighted_outer_sum(f.matrix(), q.weights()),
                                      sparse.weighted_operator());
      CHECK(dev < eps);
      CHECK(std::abs(dev - q.deviation()) <= 1e-12);
      const double delta = f.max_norm_squared();
      CHECK(q.theoretical_scale() == doctest::Approx(delta / (eps * eps)));
      CHECK(q.achieved_a() <= 64.0 * std::log(6.0) * q.theoretical_scale() * (1.0 + 1e-12));
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (sparse.weights[i] == 0.0) CHECK(q.multiplicities()[i] == 0);
      }
      ratios.push_back(q.achieved_a() / q.theoretical_scale());
    }
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  MESSAGE("achieved_a / (delta/eps^2) in [" << *lo << ", " << *hi << "]");
  CHECK(*lo >= 0.1);
  CHECK(*hi <= 50.0);
}

TEST_CASE("quantization is deterministic in the seed") {
  const FrameFamily f(random_parseval_frame(20, 3, 6));
  const WeightedFrame w = bss_sparsify(f, 3.0);
  QuantizerConfig cfg;
  cfg.seed = 42;
  const QuantizedFrame a = quantize_weights(w, 0.25, cfg);
  const QuantizedFrame b = quantize_weights(w, 0.25, cfg);
  CHECK(a.multiplicities() == b.multiplicities());
  CHECK(a.achieved_a() == b.achieved_a());
  CHECK(a.deviation() == b.deviation());
}

TEST_CASE("quantizer rejects bad parameters and unreachable targets") {
  const FrameFamily f(random_parseval_frame(8, 2, 1));
  const WeightedFrame w = bss_sparsify(f, 2.0);
  CHECK_THROWS_AS(quantize_weights(w, 0.0), ValidationError);
  CHECK_THROWS_AS(quantize_weights(w, 1.0), ValidationError);
  QuantizerConfig none;
  none.trials = 0;
  CHECK_THROWS_AS(quantize_weights(w, 0.5, none), ValidationError);
  CHECK_THROWS_AS(quantize_weights(w, 1e-12), QuantizationFailure);
}

TEST_CASE("certification re-measures and rejects violations") {
  const FrameFamily f(ComplexMatrix::identity(2));
  const HermitianMatrix target = HermitianMatrix::identity(2);
  const QuantizedFrame ok = QuantizedFrame::certify(f, target, {4, 4}, 4.0, 0.1);
  CHECK(ok.deviation() == 0.0);
  CHECK(ok.unit() == 0.25);
  try {
    (void)QuantizedFrame::certify(f, target, {4, 6}, 4.0, 0.1);
    FAIL("violation accepted");
  } catch (const QuantizationFailure& e) {
    CHECK(e.best_deviation() == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(QuantizedFrame::certify(f, target, {1}, 4.0, 0.1), ValidationError);
  CHECK_THROWS_AS(QuantizedFrame::certify(f, target, {1, 1}, 0.0, 0.1), ValidationError);
}
