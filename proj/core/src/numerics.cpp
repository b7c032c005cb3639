#include "frameforge/numerics.hpp"

#include "frameforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace frameforge {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError("matrix has " + std::to_string(data_.size()) + " entries, expected " +
                          std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("matrix entries must be finite");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

ComplexMatrix ComplexMatrix::scaled(double factor) const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z *= factor;
  return out;
}

ComplexMatrix ComplexMatrix::select_rows(std::span<const std::size_t> indices) const {
  ComplexMatrix out(indices.size(), cols_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows_) throw ValidationError("row index out of range");
    std::copy_n(row(indices[r]).begin(), cols_, out.row(r).begin());
  }
  return out;
}

ComplexMatrix ComplexMatrix::select_cols(std::span<const std::size_t> indices) const {
  ComplexMatrix out(rows_, indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] >= cols_) throw ValidationError("column index out of range");
    for (std::size_t i = 0; i < rows_; ++i) out(i, c) = (*this)(i, indices[c]);
  }
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw ValidationError("matrix product shape mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      auto brow = b.row(k);
      auto orow = out.row(i);
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("Hermitian matrix must be square");
  const std::size_t n = m_.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Complex a = m_(i, j);
      const Complex b = std::conj(m_(j, i));
      if (std::abs(a - b) > tol.hermitian) {
        throw ValidationError("matrix is not Hermitian at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      const Complex avg = 0.5 * (a + b);
      m_(i, j) = avg;
      m_(j, i) = std::conj(avg);
    }
    m_(i, i) = m_(i, i).real();
  }
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) { return HermitianMatrix(ComplexMatrix(n, n)); }

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(ComplexMatrix::identity(n));
}

namespace {

// Mirrors the upper triangle into the lower one so the result is exactly
// Hermitian regardless of accumulation order.
HermitianMatrix from_upper(ComplexMatrix m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) m(j, i) = std::conj(m(i, j));
  }
  return HermitianMatrix(std::move(m));
}

}  // namespace

HermitianMatrix HermitianMatrix::gram(const ComplexMatrix& m) {
  const std::size_t n = m.cols();
  ComplexMatrix g(n, n);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    auto r = m.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex ci = std::conj(r[i]);
      if (ci == Complex{}) continue;
      auto grow = g.row(i);
      for (std::size_t j = i; j < n; ++j) grow[j] += ci * r[j];
    }
  }
  return from_upper(std::move(g));
}

HermitianMatrix HermitianMatrix::weighted_outer_sum(const ComplexMatrix& vectors,
                                                    std::span<const double> weights) {
  if (weights.size() != vectors.rows()) throw ValidationError("one weight per vector required");
  const std::size_t n = vectors.cols();
  ComplexMatrix g(n, n);
  for (std::size_t k = 0; k < vectors.rows(); ++k) {
    if (weights[k] == 0.0) continue;
    auto v = vectors.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex wi = weights[k] * v[i];
      if (wi == Complex{}) continue;
      auto grow = g.row(i);
      for (std::size_t j = i; j < n; ++j) grow[j] += wi * std::conj(v[j]);
    }
  }
  return from_upper(std::move(g));
}

HermitianMatrix HermitianMatrix::rank_one_update(std::span<const Complex> v, double t) const {
  if (v.size() != dim()) throw ValidationError("rank-one update dimension mismatch");
  ComplexMatrix g = m_;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex ti = t * v[i];
    for (std::size_t j = i; j < v.size(); ++j) g(i, j) += ti * std::conj(v[j]);
  }
  return from_upper(std::move(g));
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  if (other.dim() != dim()) throw ValidationError("dimension mismatch");
  ComplexMatrix g = m_;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i; j < dim(); ++j) g(i, j) -= other(i, j);
  return from_upper(std::move(g));
}

namespace {

// Cyclic Jacobi on a full Hermitian copy. Each rotation is the complex
// Givens transform diag(1, e^{-i phi}) * [[c, s], [-s, c]] that zeroes a(p,q).
EigenDecomposition jacobi(const HermitianMatrix& input, bool want_vectors,
                          const Tolerances& tol) {
  const std::size_t n = input.dim();
  ComplexMatrix a = input.matrix();
  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();

  const double scale = frobenius_norm(a);
  const double stop = scale * std::numeric_limits<double>::epsilon() * 0.5;

  auto converged = [&] {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    return off == 0.0 || std::sqrt(2.0 * off) <= stop;
  };
  bool done = converged();
  for (int sweep = 0; sweep < tol.max_jacobi_sweeps && !done; ++sweep) {

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip entries that can no longer change the diagonal.
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;  // e^{i phi}
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const Complex sp = s * std::conj(phase);  // s e^{-i phi}
        const Complex cp = c * std::conj(phase);  // c e^{-i phi}

        // Columns p, q: A <- A U.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - sp * akq;
          a(k, q) = s * akp + cp * akq;
        }
        // Rows p, q: A <- U* A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - std::conj(sp) * aqk;
          a(q, k) = s * apk + std::conj(cp) * aqk;
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = c * vkp - sp * vkq;
            v(k, q) = s * vkp + cp * vkq;
          }
        }
      }
    }
    done = converged();
  }
  if (!done)
    throw InvariantViolation("Jacobi eigensolver did not converge in " + std::to_string(tol.max_jacobi_sweeps) +
                             " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.values.reserve(n);
  for (std::size_t k : order) out.values.push_back(a(k, k).real());
  if (want_vectors) out.vectors = v.select_cols(order);
  return out;
}

double spectrum_scale(std::span<const double> values) {
  double s = 1.0;
  for (double x : values) s = std::max(s, std::abs(x));
  return s;
}

void check_shift(std::span<const double> values, double shift, Side side, const Tolerances& tol) {
  if (values.empty()) return;
  const double gap = side == Side::upper ? shift - values.back() : values.front() - shift;
  if (!(gap > tol.singular_gap * spectrum_scale(values))) {
    throw SingularityError("shift " + std::to_string(shift) + " is not strictly " +
                           (side == Side::upper ? "above" : "below") + " the spectrum");
  }
}

}  // namespace

EigenDecomposition hermitian_eigen(const HermitianMatrix& a, const Tolerances& tol) {
  return jacobi(a, true, tol);
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a, const Tolerances& tol) {
  return jacobi(a, false, tol).values;
}

std::vector<double> singular_values(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.empty()) return {};
  const HermitianMatrix g =
      m.rows() >= m.cols() ? HermitianMatrix::gram(m) : HermitianMatrix::gram(m.adjoint());
  std::vector<double> ev = hermitian_eigenvalues(g, tol);
  std::vector<double> out;
  out.reserve(ev.size());
  for (auto it = ev.rbegin(); it != ev.rend(); ++it) out.push_back(std::sqrt(std::max(0.0, *it)));
  return out;
}

double operator_norm(const HermitianMatrix& a, const Tolerances& tol) {
  const auto ev = hermitian_eigenvalues(a, tol);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double shifted_inverse_quadratic(const EigenDecomposition& eig, double shift,
                                 std::span<const Complex> v, int power, Side side,
                                 const Tolerances& tol) {
  if (power != 1 && power != 2) throw ValidationError("power must be 1 or 2");
  if (v.size() != eig.values.size()) throw ValidationError("vector dimension mismatch");
  check_shift(eig.values, shift, side, tol);
  const std::size_t n = v.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    Complex proj{};
    for (std::size_t i = 0; i < n; ++i) proj += std::conj(eig.vectors(i, k)) * v[i];
    const double gap = side == Side::upper ? shift - eig.values[k] : eig.values[k] - shift;
    sum += std::norm(proj) / (power == 1 ? gap : gap * gap);
  }
  return sum;
}

double shifted_inverse_quadratic(const HermitianMatrix& a, double shift,
                                 std::span<const Complex> v, int power, Side side,
                                 const Tolerances& tol) {
  return shifted_inverse_quadratic(hermitian_eigen(a, tol), shift, v, power, side, tol);
}

double trace_of_inverse(std::span<const double> eigenvalues, double shift, Side side,
                        const Tolerances& tol) {
  check_shift(eigenvalues, shift, side, tol);
  double sum = 0.0;
  for (double lam : eigenvalues) sum += 1.0 / (side == Side::upper ? shift - lam : lam - shift);
  return sum;
}

double trace_of_inverse(const HermitianMatrix& a, double shift, Side side, const Tolerances& tol) {
  const auto ev = hermitian_eigenvalues(a, tol);
  return trace_of_inverse(ev, shift, side, tol);
}

Complex unit_root(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw ValidationError("unit_root denominator must be positive");
  std::int64_t r = num % den;
  if (r < 0) r += den;
  if ((4 * r) % den == 0) {
    switch ((4 * r) / den) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // Fold into (-den/2, den/2] for a smaller argument.
  if (2 * r > den) r -= den;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace frameforge
