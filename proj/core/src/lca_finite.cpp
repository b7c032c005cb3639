#include "frameforge/lca_finite.hpp"

#include "frameforge/errors.hpp"
#include "frameforge/frame_select.hpp"
#include "frameforge/random.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace frameforge {

namespace {

constexpr std::int64_t kMaxGroupOrder = std::int64_t{1} << 24;

std::string describe(const GroupElement& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

// Optimal bounds sigma_min^2, sigma_max^2 of the rows of e as a frame for C^cols.
std::pair<double, double> squared_singular_range(const ComplexMatrix& e, const Tolerances& tol) {
  if (e.rows() == 0 || e.cols() == 0) return {0.0, 0.0};
  const auto sv = singular_values(e, tol);
  const double hi = sv.front() * sv.front();
  if (e.rows() < e.cols()) return {0.0, hi};
  return {sv.back() * sv.back(), hi};
}

// Enumerates prod_k counts[k] tuples, first coordinate slowest, mapped through f.
template <typename F>
std::vector<GroupElement> enumerate_box(const std::vector<std::int64_t>& counts, F&& f) {
  std::int64_t total = 1;
  for (auto c : counts) total *= c;
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(total));
  GroupElement digits(counts.size(), 0);
  for (std::int64_t i = 0; i < total; ++i) {
    out.push_back(f(digits));
    for (std::size_t k = counts.size(); k-- > 0;) {
      if (++digits[k] < counts[k]) break;
      digits[k] = 0;
    }
  }
  return out;
}

}  // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw ValidationError("group needs at least one factor");
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    if (orders_[k] < 1) throw ValidationError("orders[" + std::to_string(k) + "] must be positive");
    order_ *= orders_[k];
    if (order_ > kMaxGroupOrder) throw ValidationError("group order exceeds 2^24");
    lcm_ = std::lcm(lcm_, orders_[k]);
  }
}

bool FiniteAbelianGroup::contains(const GroupElement& x) const {
  if (x.size() != orders_.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] < 0 || x[k] >= orders_[k]) return false;
  return true;
}

GroupElement FiniteAbelianGroup::reduce(GroupElement x) const {
  if (x.size() != orders_.size()) {
    throw ValidationError("element " + describe(x) + " has rank " + std::to_string(x.size()) + ", group has rank " +
                          std::to_string(orders_.size()));
  }
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = ((x[k] % orders_[k]) + orders_[k]) % orders_[k];
  return x;
}

GroupElement FiniteAbelianGroup::add(const GroupElement& x, const GroupElement& y) const {
  GroupElement z = reduce(x);
  const GroupElement w = reduce(y);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = (z[k] + w[k]) % orders_[k];
  return z;
}

GroupElement FiniteAbelianGroup::negate(const GroupElement& x) const {
  GroupElement z = reduce(x);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = (orders_[k] - z[k]) % orders_[k];
  return z;
}

std::size_t FiniteAbelianGroup::index_of(const GroupElement& x) const {
  const GroupElement r = reduce(x);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < r.size(); ++k) idx = idx * static_cast<std::size_t>(orders_[k]) + static_cast<std::size_t>(r[k]);
  return idx;
}

GroupElement FiniteAbelianGroup::element_at(std::size_t index) const {
  if (index >= static_cast<std::size_t>(order_)) throw ValidationError("element index out of range");
  GroupElement x(orders_.size());
  for (std::size_t k = orders_.size(); k-- > 0;) {
    x[k] = static_cast<std::int64_t>(index % static_cast<std::size_t>(orders_[k]));
    index /= static_cast<std::size_t>(orders_[k]);
  }
  return x;
}

std::vector<GroupElement> FiniteAbelianGroup::elements() const {
  return enumerate_box(orders_, [](const GroupElement& d) { return d; });
}

Complex FiniteAbelianGroup::character(const GroupElement& a, const GroupElement& x) const {
  const GroupElement ar = reduce(a);
  const GroupElement xr = reduce(x);
  std::int64_t phase = 0;
  for (std::size_t k = 0; k < ar.size(); ++k) {
    // a_k x_k < N_k^2 <= 2^48, and lcm / N_k <= 2^24 after reduction mod N_k.
    const std::int64_t t = (ar[k] * xr[k]) % orders_[k];
    phase = (phase + t * (lcm_ / orders_[k])) % lcm_;
  }
  return unit_root(phase, lcm_);
}

BoxSubgroup::BoxSubgroup(FiniteAbelianGroup parent, std::vector<std::int64_t> divisors)
    : parent_(std::move(parent)), divisors_(std::move(divisors)) {
  if (divisors_.size() != parent_.rank()) {
    throw ValidationError("subgroup has " + std::to_string(divisors_.size()) + " divisors for a group of rank " +
                          std::to_string(parent_.rank()));
  }
  for (std::size_t k = 0; k < divisors_.size(); ++k) {
    if (divisors_[k] < 1 || parent_.orders()[k] % divisors_[k] != 0) {
      throw ValidationError("divisor " + std::to_string(divisors_[k]) + " does not divide order " +
                            std::to_string(parent_.orders()[k]) + " at position " + std::to_string(k));
    }
  }
}

BoxSubgroup BoxSubgroup::whole(const FiniteAbelianGroup& g) {
  return BoxSubgroup(g, std::vector<std::int64_t>(g.rank(), 1));
}

BoxSubgroup BoxSubgroup::trivial(const FiniteAbelianGroup& g) { return BoxSubgroup(g, g.orders()); }

std::int64_t BoxSubgroup::order() const { return parent_.order() / index(); }

std::int64_t BoxSubgroup::index() const {
  std::int64_t p = 1;
  for (auto d : divisors_) p *= d;
  return p;
}

bool BoxSubgroup::contains(const GroupElement& x) const {
  const GroupElement r = parent_.reduce(x);
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r[k] % divisors_[k] != 0) return false;
  return true;
}

bool BoxSubgroup::contains(const BoxSubgroup& other) const {
  if (!(other.parent_ == parent_)) return false;
  for (std::size_t k = 0; k < divisors_.size(); ++k)
    if (other.divisors_[k] % divisors_[k] != 0) return false;
  return true;
}

BoxSubgroup BoxSubgroup::annihilator() const {
  std::vector<std::int64_t> d(divisors_.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = parent_.orders()[k] / divisors_[k];
  return BoxSubgroup(parent_, std::move(d));
}

std::vector<GroupElement> BoxSubgroup::elements() const {
  std::vector<std::int64_t> counts(divisors_.size());
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] = parent_.orders()[k] / divisors_[k];
  return enumerate_box(counts, [this](GroupElement d) {
    for (std::size_t k = 0; k < d.size(); ++k) d[k] *= divisors_[k];
    return d;
  });
}

std::vector<GroupElement> BoxSubgroup::transversal() const {
  return enumerate_box(divisors_, [](const GroupElement& d) { return d; });
}

GroupElement BoxSubgroup::coset_rep(const GroupElement& x) const {
  GroupElement r = parent_.reduce(x);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] %= divisors_[k];
  return r;
}

Rational GroupSpectrum::measure() const {
  return Rational(static_cast<std::int64_t>(cell_reps.size()), cells_total());
}

void GroupSpectrum::validate() const {
  if (cell_reps.empty()) throw ValidationError("group spectrum has no cells");
  std::set<GroupElement> seen;
  for (std::size_t i = 0; i < cell_reps.size(); ++i) {
    const auto& l = cell_reps[i];
    if (!group().contains(l)) throw ValidationError("cells[" + std::to_string(i) + "] = " + describe(l) + " is not a reduced group element");
    if (!lattice.contains(l)) {
      throw ValidationError("cells[" + std::to_string(i) + "] = " + describe(l) + " is not in the lattice (+) e_k Z_{N_k}");
    }
    if (!seen.insert(l).second) throw ValidationError("cells[" + std::to_string(i) + "] repeats a cell");
  }
}

std::vector<GroupElement> GroupSpectrum::elements() const {
  const auto sigma = cell();
  std::vector<GroupElement> out;
  out.reserve(cell_reps.size() * sigma.size());
  for (const auto& l : cell_reps)
    for (const auto& s : sigma) out.push_back(group().add(l, s));
  return out;
}

void GroupSamplingSet::validate() const {
  std::set<GroupElement> cosets;
  for (std::size_t j = 0; j < reps.size(); ++j) {
    if (!cosets.insert(subgroup.coset_rep(reps[j])).second) {
      throw ValidationError("sampling cosets " + describe(reps[j]) + " + H_m overlap");
    }
  }
}

std::vector<GroupElement> GroupSamplingSet::elements() const {
  const auto h = subgroup.elements();
  std::vector<GroupElement> out;
  out.reserve(reps.size() * h.size());
  for (const auto& r : reps)
    for (const auto& e : h) out.push_back(subgroup.parent().add(r, e));
  return out;
}

ComplexMatrix character_matrix(const BoxSubgroup& hm, std::span<const GroupElement> group_reps,
                               std::span<const GroupElement> dual_reps) {
  const auto& g = hm.parent();
  const BoxSubgroup dual = hm.annihilator();
  const auto m = static_cast<std::size_t>(hm.index());
  if (group_reps.size() != m) {
    throw ValidationError("group transversal has " + std::to_string(group_reps.size()) + " elements, [G:H_m] = " +
                          std::to_string(m));
  }
  if (dual_reps.size() != m) {
    throw ValidationError("dual transversal has " + std::to_string(dual_reps.size()) + " elements, #H_m^perp = " +
                          std::to_string(m));
  }
  std::set<GroupElement> cosets;
  for (const auto& h : group_reps)
    if (!cosets.insert(hm.coset_rep(h)).second) throw ValidationError("group representatives share a coset of H_m");
  std::set<GroupElement> chars;
  for (const auto& l : dual_reps) {
    if (!dual.contains(l)) throw ValidationError("character " + describe(l) + " is not trivial on H_m");
    if (!chars.insert(g.reduce(l)).second) throw ValidationError("dual representatives repeat");
  }
  ComplexMatrix f(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) f(i, j) = g.character(dual_reps[j], group_reps[i]);
  return f;
}

ComplexMatrix character_matrix(const BoxSubgroup& hm) {
  const auto h = hm.transversal();
  const auto l = hm.annihilator().elements();
  return character_matrix(hm, h, l);
}

std::pair<double, double> exact_frame_bounds(const FiniteAbelianGroup& g, std::span<const GroupElement> points,
                                             std::span<const GroupElement> omega, const Tolerances& tol) {
  ComplexMatrix e(points.size(), omega.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < omega.size(); ++j) e(i, j) = g.character(omega[j], points[i]);
  const auto [lo, hi] = squared_singular_range(e, tol);
  const double n = static_cast<double>(g.order());
  return {lo / n, hi / n};
}

namespace {

// (1/sqrt M) F_I with rows the canonical transversal of G / H_m.
ComplexMatrix spectrum_block(const GroupSpectrum& spectrum) {
  const BoxSubgroup hm = spectrum.sampling_lattice();
  const auto reps = hm.transversal();
  ComplexMatrix f(reps.size(), spectrum.k());
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < spectrum.k(); ++j) f(i, j) = spectrum.group().character(spectrum.cell_reps[j], reps[i]);
  return f;
}

}  // namespace

GroupFrameReport group_frame_report(const GroupSpectrum& spectrum, std::span<const std::size_t> rows, double epsilon,
                                    const Tolerances& tol) {
  spectrum.validate();
  const ComplexMatrix f = spectrum_block(spectrum);
  for (auto r : rows)
    if (r >= f.rows()) throw ValidationError("row " + std::to_string(r) + " outside the transversal of G/H_m");
  const auto [lo, hi] = squared_singular_range(f.select_rows(rows), tol);
  const std::int64_t m = spectrum.cells_total();
  GroupFrameReport r;
  r.cells_total = m;
  r.lower_bound = lo / static_cast<double>(m);
  r.upper_bound = hi / static_cast<double>(m);
  r.measure = spectrum.measure();
  r.lower_normalized = r.lower_bound / to_double(r.measure);
  r.upper_normalized = r.upper_bound / to_double(r.measure);
  r.k = spectrum.k();
  r.q = rows.size();
  r.budget = cardinality_budget(epsilon, spectrum.k());
  r.density = Rational(static_cast<std::int64_t>(rows.size()), m);
  r.epsilon = epsilon;
  return r;
}

GroupSynthesis group_synthesize(const GroupSpectrum& spectrum, double epsilon, const QuantizerConfig& config,
                                const Tolerances& tol) {
  spectrum.validate();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
  const std::int64_t m = spectrum.cells_total();
  const std::size_t budget = cardinality_budget(epsilon, spectrum.k());
  if (static_cast<std::int64_t>(budget) > m) {
    throw ValidationError("ceil((1 + eps) k) = " + std::to_string(budget) + " exceeds M = " + std::to_string(m));
  }
  const ComplexMatrix f = spectrum_block(spectrum);
  const SubmatrixSelection sel = submatrix_select(f.scaled(1.0 / std::sqrt(static_cast<double>(m))), epsilon, config, tol);

  GroupSynthesis out;
  out.sampling.subgroup = spectrum.sampling_lattice();
  const auto reps = out.sampling.subgroup.transversal();
  for (auto j : sel.rows) out.sampling.reps.push_back(reps[j]);
  out.report = group_frame_report(spectrum, sel.rows, epsilon, tol);
  out.report.achieved_a = sel.achieved_a;
  out.report.theoretical_scale = sel.theoretical_scale;

  const Rational q_over_k(static_cast<std::int64_t>(out.report.q), static_cast<std::int64_t>(out.report.k));
  if (out.report.density != q_over_k * out.report.measure) {
    throw InvariantViolation("D_H(T) = " + to_string(out.report.density) + " differs from (q/k) mu(Omega)");
  }
  if (out.report.density >
      Rational(static_cast<std::int64_t>(budget), static_cast<std::int64_t>(spectrum.k())) * out.report.measure) {
    throw InvariantViolation("D_H(T) exceeds ceil((1 + eps) k) / k * mu(Omega)");
  }
  return out;
}

Rational density_reference(const GroupSamplingSet& t, const BoxSubgroup& h) {
  if (!h.contains(t.subgroup)) throw ValidationError("H_m is not contained in the reference subgroup H");
  t.validate();
  return Rational(static_cast<std::int64_t>(t.q()), h.order() / t.subgroup.order());
}

LiftResult lift_frame(const BoxSubgroup& k, std::span<const GroupElement> q_points,
                      std::span<const GroupElement> gammas, std::span<const GroupElement> kappas,
                      const Tolerances& tol) {
  const auto& g = k.parent();
  const BoxSubgroup kperp = k.annihilator();
  if (q_points.empty()) throw ValidationError("Q is empty");
  if (gammas.empty()) throw ValidationError("no characters to lift");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!kperp.contains(gammas[i])) {
      throw ValidationError("gammas[" + std::to_string(i) + "] = " + describe(gammas[i]) + " is not trivial on K");
    }
  }

  LiftResult out;
  std::set<GroupElement> seen;
  for (const auto& x : q_points) {
    GroupElement rep = k.coset_rep(x);
    if (!seen.insert(rep).second) throw ValidationError("Q lists the coset of " + describe(x) + " twice");
    out.quotient_points.push_back(std::move(rep));
  }

  std::vector<GroupElement> kappa_list(kappas.begin(), kappas.end());
  if (kappa_list.empty()) {
    kappa_list = kperp.transversal();
  } else {
    if (static_cast<std::int64_t>(kappa_list.size()) != k.order()) {
      throw ValidationError("kappas must be a transversal of G^/K^perp with #K = " + std::to_string(k.order()) +
                            " elements");
    }
    std::set<GroupElement> classes;
    for (const auto& c : kappa_list)
      if (!classes.insert(kperp.coset_rep(c)).second) throw ValidationError("kappas share a coset of K^perp");
  }

  const auto k_elems = k.elements();
  for (const auto& q : out.quotient_points)
    for (const auto& e : k_elems) out.preimage.push_back(g.add(q, e));
  for (const auto& gam : gammas)
    for (const auto& kap : kappa_list) out.lifted.push_back(g.add(gam, kap));

  ComplexMatrix eq(gammas.size(), out.quotient_points.size());
  for (std::size_t i = 0; i < gammas.size(); ++i)
    for (std::size_t j = 0; j < out.quotient_points.size(); ++j) eq(i, j) = g.character(gammas[i], out.quotient_points[j]);
  const auto [qlo, qhi] = squared_singular_range(eq, tol);
  const double k_order = static_cast<double>(k.order());
  out.quotient_lower = k_order * qlo;
  out.quotient_upper = k_order * qhi;

  ComplexMatrix el(out.lifted.size(), out.preimage.size());
  for (std::size_t i = 0; i < out.lifted.size(); ++i)
    for (std::size_t j = 0; j < out.preimage.size(); ++j) el(i, j) = g.character(out.lifted[i], out.preimage[j]);
  const auto [llo, lhi] = squared_singular_range(el, tol);
  out.lifted_lower = llo;
  out.lifted_upper = lhi;
  return out;
}

LiftCase random_lift_case(std::uint64_t seed, std::int64_t max_order) {
  if (max_order < 2) throw ValidationError("max_order must be at least 2");
  boost::random::mt19937_64 gen(mix64(seed));
  auto uniform = [&gen](std::int64_t lo, std::int64_t hi) {
    return boost::random::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  };

  std::vector<std::int64_t> orders;
  if (max_order >= 4 && uniform(0, 1) == 1) {
    const std::int64_t n1 = uniform(2, std::min<std::int64_t>(8, max_order / 2));
    orders = {n1, uniform(2, max_order / n1)};
  } else {
    orders = {uniform(2, max_order)};
  }
  const FiniteAbelianGroup g(orders);

  std::vector<std::int64_t> divisors;
  for (auto n : orders) {
    std::vector<std::int64_t> ds;
    for (std::int64_t d = 1; d <= n; ++d)
      if (n % d == 0) ds.push_back(d);
    divisors.push_back(ds[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(ds.size()) - 1))]);
  }

  LiftCase c;
  c.k = BoxSubgroup(g, divisors);
  const auto quotient = c.k.transversal();
  const auto q_size = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(quotient.size())));
  for (auto i : random_subset(quotient.size(), q_size, gen())) c.q_points.push_back(quotient[i]);

  const auto dual = c.k.annihilator().elements();
  const auto n_gammas = uniform(1, 2 * static_cast<std::int64_t>(dual.size()));
  for (std::int64_t i = 0; i < n_gammas; ++i)
    c.gammas.push_back(dual[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(dual.size()) - 1))]);
  return c;
}

}  // namespace frameforge
