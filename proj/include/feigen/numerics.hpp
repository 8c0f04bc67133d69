#pragma once

// Extended-precision scalars, exact rationals, dense matrices and the
// linear-algebra kernels every other module builds on.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "feigen/error.hpp"

namespace feigen {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

using RealVector = std::vector<Real>;

/// Decimal precision D of a computation.  The working precision carries 32
/// guard bits on top of ceil(D * log2(10)).
class PrecisionCtx {
 public:
  static constexpr int kDefaultDigits = 64;
  static constexpr int kGuardBits = 32;

  explicit PrecisionCtx(int decimal_digits = kDefaultDigits);

  int digits() const noexcept { return digits_; }
  unsigned working_bits() const noexcept { return bits_; }

  /// 10^exponent at working precision.
  Real pow10(int exponent) const;

  /// Decimal string with exactly digits() significant digits.
  std::string format(const Real& x) const;

  /// Parses a decimal literal at working precision.
  Real parse(const std::string& literal) const;

 private:
  int digits_;
  unsigned bits_;
};

/// Installs the working precision of a context as the default for newly
/// created Real values; restores the previous default on destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(const PrecisionCtx& ctx);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned previous_digits10_;
};

/// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const T> values) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<Real>;
using RationalMatrix = Matrix<Rational>;

Real norm_inf(std::span<const Real> v);
Real norm_inf(const RealMatrix& m);
RealVector multiply(const RealMatrix& a, std::span<const Real> x);
RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
RealMatrix to_real(const RationalMatrix& m);

/// Solves A x = b by partial-pivoted elimination at working precision.
/// Throws SingularMatrix when a pivot is below 10^(-D+8) * ||A||_inf.
RealVector solve_linear(const RealMatrix& a, std::span<const Real> b,
                        const PrecisionCtx& ctx);

/// Same elimination with an explicit relative pivot tolerance.
RealVector solve_linear(const RealMatrix& a, std::span<const Real> b,
                        const Real& relative_pivot_tolerance);

/// Smallest |pivot| / ||A||_inf seen during partial-pivoted elimination; a
/// cheap singularity indicator.
Real min_relative_pivot(const RealMatrix& a);

/// Exact solution of A X = B by fraction-free (Bareiss) elimination.
/// Throws ExactlySingular when det A = 0.
RationalMatrix solve_linear_exact(const RationalMatrix& a,
                                  const RationalMatrix& b);

struct EigenPair {
  Real re;
  Real im;
  RealVector vec_re;
  RealVector vec_im;
  /// ||Mv - lambda v||_inf / (||M||_inf ||v||_inf)
  Real residual;

  Real modulus() const;
};

/// All eigenpairs of a dense real matrix: Hessenberg reduction, Francis
/// double-shift QR, inverse iteration for the vectors.  Sorted by descending
/// modulus (conjugate pairs: positive imaginary part first).
///
/// Every returned pair satisfies residual <= tol; NoConvergence otherwise or
/// when the QR budget of 100 n sweeps runs out.
std::vector<EigenPair> eig_dense(const RealMatrix& m, const Real& tol,
                                 const PrecisionCtx& ctx);

/// Eigenvalues only, unsorted, as (re, im) pairs.
std::vector<std::pair<Real, Real>> eigenvalues_hqr(const RealMatrix& m,
                                                   const PrecisionCtx& ctx);

}  // namespace feigen
