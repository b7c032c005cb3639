#pragma once

// Frames of characters on finite abelian groups G = Z_{N_1} x ... x Z_{N_r}.
// The dual group is identified with G through chi_a(x) = exp(2 pi i sum a_k x_k / N_k).
// Only box subgroups (+) d_k Z_{N_k} are modelled.

#include "frameforge/config.hpp"
#include "frameforge/numerics.hpp"
#include "frameforge/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace frameforge {

using GroupElement = std::vector<std::int64_t>;

class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  /// Throws ValidationError unless every order is positive and #G <= 2^24.
  explicit FiniteAbelianGroup(std::vector<std::int64_t> orders);

  std::size_t rank() const noexcept { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
  std::int64_t order() const noexcept { return order_; }

  bool contains(const GroupElement& x) const;
  /// Reduces every coordinate into [0, N_k).
  GroupElement reduce(GroupElement x) const;
  GroupElement add(const GroupElement& x, const GroupElement& y) const;
  GroupElement negate(const GroupElement& x) const;

  /// Mixed-radix position, first coordinate most significant.
  std::size_t index_of(const GroupElement& x) const;
  GroupElement element_at(std::size_t index) const;
  std::vector<GroupElement> elements() const;

  /// chi_a(x), with the phase reduced exactly modulo lcm(N_k).
  Complex character(const GroupElement& a, const GroupElement& x) const;

  friend bool operator==(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;

 private:
  std::vector<std::int64_t> orders_;
  std::int64_t order_ = 1;
  std::int64_t lcm_ = 1;
};

/// H = (+) d_k Z_{N_k} with d_k | N_k.
class BoxSubgroup {
 public:
  BoxSubgroup() = default;
  BoxSubgroup(FiniteAbelianGroup parent, std::vector<std::int64_t> divisors);

  static BoxSubgroup whole(const FiniteAbelianGroup& g);
  static BoxSubgroup trivial(const FiniteAbelianGroup& g);

  const FiniteAbelianGroup& parent() const noexcept { return parent_; }
  const std::vector<std::int64_t>& divisors() const noexcept { return divisors_; }

  /// prod N_k / d_k
  std::int64_t order() const;
  /// [G : H] = prod d_k
  std::int64_t index() const;
  bool contains(const GroupElement& x) const;
  /// this contains `other` (both in the same parent).
  bool contains(const BoxSubgroup& other) const;

  /// (+) (N_k/d_k) Z_{N_k}, viewed in the dual group.
  BoxSubgroup annihilator() const;
  std::vector<GroupElement> elements() const;
  /// Canonical coset representatives {0 <= x_k < d_k}.
  std::vector<GroupElement> transversal() const;
  /// Canonical representative of x + H.
  GroupElement coset_rep(const GroupElement& x) const;

  friend bool operator==(const BoxSubgroup&, const BoxSubgroup&) = default;

 private:
  FiniteAbelianGroup parent_;
  std::vector<std::int64_t> divisors_;
};

/// Omega = U_i (lambda_i + Sigma) in the dual group, where `lattice` plays the
/// role of H_m^perp, Sigma = {0 <= xi_k < e_k} is its canonical cell and the
/// lambda_i are distinct lattice points.
struct GroupSpectrum {
  BoxSubgroup lattice;
  std::vector<GroupElement> cell_reps;

  const FiniteAbelianGroup& group() const noexcept { return lattice.parent(); }
  std::size_t k() const noexcept { return cell_reps.size(); }
  /// Number of cells tiling the dual group, #H_m^perp.
  std::int64_t cells_total() const { return lattice.order(); }
  /// H_m = (H_m^perp)^perp on the group side.
  BoxSubgroup sampling_lattice() const { return lattice.annihilator(); }
  /// mu(Omega) with the dual measure of total mass 1: k / M.
  Rational measure() const;
  std::vector<GroupElement> cell() const { return lattice.transversal(); }
  std::vector<GroupElement> elements() const;
  void validate() const;
};

/// T = U_j (h_j + H_m).
struct GroupSamplingSet {
  BoxSubgroup subgroup;
  std::vector<GroupElement> reps;

  std::size_t q() const noexcept { return reps.size(); }
  std::vector<GroupElement> elements() const;
  void validate() const;
};

/// M x M matrix with entries chi_{lambda_j}(h_i) for transversals (h_i) of
/// G / H_m and (lambda_j) of the annihilator H_m^perp.
ComplexMatrix character_matrix(const BoxSubgroup& hm, std::span<const GroupElement> group_reps,
                               std::span<const GroupElement> dual_reps);
/// Canonical transversals on both sides.
ComplexMatrix character_matrix(const BoxSubgroup& hm);

/// Optimal frame bounds of {e_t : t in points} for L^2(omega), with mu_G
/// counting on the group side and the dual measure of total mass 1.
std::pair<double, double> exact_frame_bounds(const FiniteAbelianGroup& g, std::span<const GroupElement> points,
                                             std::span<const GroupElement> omega,
                                             const Tolerances& tol = default_tolerances());

struct GroupFrameReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Rational measure{0};
  double lower_normalized = 0.0;
  double upper_normalized = 0.0;
  std::size_t budget = 0;
  std::size_t k = 0;
  std::size_t q = 0;
  std::int64_t cells_total = 0;
  Rational density{0};
  double epsilon = 0.0;
  double achieved_a = 0.0;
  double theoretical_scale = 0.0;
};

struct GroupSynthesis {
  GroupSamplingSet sampling;
  GroupFrameReport report;
};

/// Exact bounds of T = U_{j in rows} (h_j + H_m), h_j the canonical transversal
/// of G / H_m: A = sigma_min(F_I(J))^2 / M, B likewise.
GroupFrameReport group_frame_report(const GroupSpectrum& spectrum, std::span<const std::size_t> rows,
                                    double epsilon, const Tolerances& tol = default_tolerances());

/// Requires ceil((1 + eps) k) <= M.
GroupSynthesis group_synthesize(const GroupSpectrum& spectrum, double epsilon, const QuantizerConfig& config = {},
                                const Tolerances& tol = default_tolerances());

/// q / [H : H_m]; throws ValidationError unless H_m is contained in H.
Rational density_reference(const GroupSamplingSet& t, const BoxSubgroup& h);

struct LiftResult {
  /// Q as canonical coset representatives, and pi^{-1}(Q).
  std::vector<GroupElement> quotient_points;
  std::vector<GroupElement> preimage;
  /// gamma_n + kappa_m, gamma-major.
  std::vector<GroupElement> lifted;
  double quotient_lower = 0.0;
  double quotient_upper = 0.0;
  double lifted_lower = 0.0;
  double lifted_upper = 0.0;
};

/// Lifts the frame {gamma_n} of L^2(Q), Q in G/K, to {gamma_n + kappa_m} on
/// L^2(pi^{-1}(Q)). Measures: mu_G counting, mu_K of mass 1, hence mu_{G/K} =
/// #K * counting. Empty `kappas` selects the canonical transversal of G^/K^perp.
LiftResult lift_frame(const BoxSubgroup& k, std::span<const GroupElement> q_points,
                      std::span<const GroupElement> gammas, std::span<const GroupElement> kappas = {},
                      const Tolerances& tol = default_tolerances());

struct LiftCase {
  BoxSubgroup k;
  std::vector<GroupElement> q_points;
  std::vector<GroupElement> gammas;
};

/// Seeded random instance with #G <= max_order: rank 1 or 2, random box K,
/// nonempty Q and a multiset of characters in K^perp (repeats allowed).
LiftCase random_lift_case(std::uint64_t seed, std::int64_t max_order = 64);

}  // namespace frameforge
