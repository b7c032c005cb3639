#pragma once

// Dense complex linear algebra used throughout the library: a row-major
// complex matrix, a validated Hermitian wrapper, cyclic Jacobi
// eigendecomposition and the resolvent quantities needed by the barrier
// sparsifier.

#include "frameforge/config.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace frameforge {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major entries; throws ValidationError on a size
  /// mismatch or non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<Complex> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix scaled(double factor) const;
  ComplexMatrix select_rows(std::span<const std::size_t> indices) const;
  ComplexMatrix select_cols(std::span<const std::size_t> indices) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double frobenius_norm(const ComplexMatrix& m);

/// Square matrix that is Hermitian to within `Tolerances::hermitian`.
/// The stored entries are symmetrized exactly on construction, so the
/// diagonal is real and a(i,j) == conj(a(j,i)) bit for bit.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(ComplexMatrix m, const Tolerances& tol = default_tolerances());

  static HermitianMatrix zero(std::size_t n);
  static HermitianMatrix identity(std::size_t n);
  /// M* M, formed from the upper triangle.
  static HermitianMatrix gram(const ComplexMatrix& m);
  /// sum_i w_i v_i v_i^*, with v_i the rows of `vectors`.
  static HermitianMatrix weighted_outer_sum(const ComplexMatrix& vectors,
                                            std::span<const double> weights);

  std::size_t dim() const noexcept { return m_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  /// this + t * v v^*
  HermitianMatrix rank_one_update(std::span<const Complex> v, double t) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;

 private:
  ComplexMatrix m_;
};

/// Eigenpairs with eigenvalues ascending; column k of `vectors` belongs to
/// `values[k]`.
struct EigenDecomposition {
  std::vector<double> values;
  ComplexMatrix vectors;
};

EigenDecomposition hermitian_eigen(const HermitianMatrix& a,
                                   const Tolerances& tol = default_tolerances());
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a,
                                          const Tolerances& tol = default_tolerances());

/// Singular values, descending. Computed from the eigenvalues of the smaller
/// of M*M and MM*.
std::vector<double> singular_values(const ComplexMatrix& m,
                                    const Tolerances& tol = default_tolerances());

/// Largest |eigenvalue|.
double operator_norm(const HermitianMatrix& a, const Tolerances& tol = default_tolerances());

/// Which side of the spectrum a barrier shift sits on.
enum class Side {
  upper,  // shift > lambda_max, operator shift*I - A
  lower,  // shift < lambda_min, operator A - shift*I
};

/// v^*(±(shift I - A))^{-power} v for power 1 or 2.
double shifted_inverse_quadratic(const HermitianMatrix& a, double shift,
                                 std::span<const Complex> v, int power, Side side,
                                 const Tolerances& tol = default_tolerances());
double shifted_inverse_quadratic(const EigenDecomposition& eig, double shift,
                                 std::span<const Complex> v, int power, Side side,
                                 const Tolerances& tol = default_tolerances());

/// tr((shift I - A)^{-1}) for Side::upper, tr((A - shift I)^{-1}) for Side::lower.
double trace_of_inverse(const HermitianMatrix& a, double shift, Side side,
                        const Tolerances& tol = default_tolerances());
double trace_of_inverse(std::span<const double> eigenvalues, double shift, Side side,
                        const Tolerances& tol = default_tolerances());

/// exp(2 pi i num / den) with the phase reduced exactly modulo den;
/// quarter turns are returned exactly.
Complex unit_root(std::int64_t num, std::int64_t den);

}  // namespace frameforge
