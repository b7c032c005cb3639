#include "frameforge/random.hpp"

#include "frameforge/errors.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frameforge {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  boost::random::mt19937_64 gen(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(i, j) = Complex(re, im);
    }
  return g;
}

namespace {

// Two passes of modified Gram-Schmidt over the columns.
void orthonormalize_columns(ComplexMatrix& g) {
  const std::size_t m = g.rows();
  const std::size_t n = g.cols();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot{};
        for (std::size_t i = 0; i < m; ++i) dot += std::conj(g(i, k)) * g(i, j);
        for (std::size_t i = 0; i < m; ++i) g(i, j) -= dot * g(i, k);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < m; ++i) nrm += std::norm(g(i, j));
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) throw InvariantViolation("degenerate Gaussian sample");
      for (std::size_t i = 0; i < m; ++i) g(i, j) /= nrm;
    }
  }
}

}  // namespace

ComplexMatrix random_parseval_frame(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < n || n == 0) throw ValidationError("random Parseval frame needs m >= n > 0");
  ComplexMatrix g = random_gaussian(m, n, seed);
  orthonormalize_columns(g);
  return g;
}

ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  return random_parseval_frame(n, n, seed);
}

HermitianMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  ComplexMatrix g = random_gaussian(n, n, seed);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Complex z = 0.5 * (g(i, j) + std::conj(g(j, i)));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  for (std::size_t i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  return HermitianMatrix(std::move(h));
}

std::vector<Complex> random_unit_vector(std::size_t n, std::uint64_t seed) {
  ComplexMatrix g = random_gaussian(1, n, seed);
  double nrm = 0.0;
  for (const auto& z : g.row(0)) nrm += std::norm(z);
  nrm = std::sqrt(nrm);
  std::vector<Complex> v(g.row(0).begin(), g.row(0).end());
  for (auto& z : v) z /= nrm;
  return v;
}

std::vector<std::size_t> random_subset(std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k > m) throw ValidationError("subset larger than ground set");
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), std::size_t{0});
  boost::random::mt19937_64 gen(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    boost::random::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(all[i], all[pick(gen)]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace frameforge
