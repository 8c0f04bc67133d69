#include "feigen/numerics.hpp"

#include <cmath>
#include <sstream>

namespace feigen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ExactlySingular: return "ExactlySingular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DivideByZero: return "DivideByZero";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NoExplicitForm: return "NoExplicitForm";
    case ErrorCode::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::WrongBranch: return "WrongBranch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
  }
  return "Unknown";
}

namespace {

// Boost sizes mpfr precision from decimal digits; D + 10 decimal digits
// gives at least ceil(D log2 10) + 32 bits.
unsigned digits10_for(int decimal_digits) {
  return static_cast<unsigned>(decimal_digits + 10);
}

}  // namespace

PrecisionCtx::PrecisionCtx(int decimal_digits) : digits_(decimal_digits) {
  if (decimal_digits < 16)
    throw Error(ErrorCode::InvalidArgument,
                "decimal_digits must be at least 16, got " +
                    std::to_string(decimal_digits));
  bits_ = static_cast<unsigned>(std::ceil(decimal_digits * std::log2(10.0))) +
          kGuardBits;
}

Real PrecisionCtx::pow10(int exponent) const {
  PrecisionScope scope(*this);
  return boost::multiprecision::pow(Real(10), exponent);
}

std::string PrecisionCtx::format(const Real& x) const {
  return x.str(digits_ - 1, std::ios_base::scientific);
}

Real PrecisionCtx::parse(const std::string& literal) const {
  PrecisionScope scope(*this);
  return Real(literal);
}

PrecisionScope::PrecisionScope(const PrecisionCtx& ctx)
    : previous_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for(ctx.digits()));
}

PrecisionScope::~PrecisionScope() {
  Real::default_precision(previous_digits10_);
}

Real norm_inf(std::span<const Real> v) {
  Real r = 0;
  for (const auto& x : v) {
    Real a = abs(x);
    if (a > r) r = a;
  }
  return r;
}

Real norm_inf(const RealMatrix& m) {
  Real r = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Real s = 0;
    for (const auto& x : m.row(i)) s += abs(x);
    if (s > r) r = s;
  }
  return r;
}

RealVector multiply(const RealMatrix& a, std::span<const Real> x) {
  RealVector y(a.rows(), Real(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Real s = 0;
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

template <class T>
static Matrix<T> multiply_impl(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::InvalidArgument, "matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  return multiply_impl(a, b);
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  return multiply_impl(a, b);
}

RealMatrix to_real(const RationalMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = Real(numerator(m(i, j))) / Real(denominator(m(i, j)));
  return r;
}

namespace {

struct Elimination {
  RealMatrix lu;
  std::vector<std::size_t> perm;
  Real min_pivot_ratio;
};

Elimination eliminate(const RealMatrix& a) {
  const std::size_t n = a.rows();
  Elimination e{a, {}, Real(0)};
  e.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.perm[i] = i;
  Real scale = norm_inf(a);
  if (scale == 0) scale = 1;
  bool first = true;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    Real best = abs(e.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      Real v = abs(e.lu(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    e.lu.swap_rows(k, p);
    std::swap(e.perm[k], e.perm[p]);
    Real ratio = best / scale;
    if (first || ratio < e.min_pivot_ratio) e.min_pivot_ratio = ratio;
    first = false;
    if (best == 0) continue;
    const Real& pivot = e.lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (e.lu(i, k) == 0) continue;
      Real f = e.lu(i, k) / pivot;
      e.lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) e.lu(i, j) -= f * e.lu(k, j);
    }
  }
  return e;
}

RealVector back_substitute(const Elimination& e, std::span<const Real> b) {
  const std::size_t n = e.lu.rows();
  RealVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real s = b[e.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= e.lu(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Real s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= e.lu(i, j) * y[j];
    y[i] = s / e.lu(i, i);
  }
  return y;
}

void check_shapes(const RealMatrix& a, std::span<const Real> b) {
  if (!a.square() || a.rows() != b.size())
    throw Error(ErrorCode::InvalidArgument,
                "solve_linear: A must be square and match b");
}

}  // namespace

RealVector solve_linear(const RealMatrix& a, std::span<const Real> b,
                        const Real& relative_pivot_tolerance) {
  check_shapes(a, b);
  Elimination e = eliminate(a);
  if (e.min_pivot_ratio <= relative_pivot_tolerance) {
    std::ostringstream msg;
    msg << "pivot ratio " << e.min_pivot_ratio.str(6, std::ios_base::scientific)
        << " below tolerance "
        << relative_pivot_tolerance.str(3, std::ios_base::scientific);
    throw Error(ErrorCode::SingularMatrix, msg.str());
  }
  return back_substitute(e, b);
}

RealVector solve_linear(const RealMatrix& a, std::span<const Real> b,
                        const PrecisionCtx& ctx) {
  return solve_linear(a, b, ctx.pow10(-ctx.digits() + 8));
}

Real min_relative_pivot(const RealMatrix& a) {
  if (!a.square())
    throw Error(ErrorCode::InvalidArgument, "min_relative_pivot: not square");
  return eliminate(a).min_pivot_ratio;
}

// Exposed to eigen.cpp for inverse iteration, where the shifted matrix is
// nearly singular on purpose.
RealVector solve_linear_unchecked(const RealMatrix& a, std::span<const Real> b,
                                  const Real& pivot_floor) {
  Elimination e = eliminate(a);
  for (std::size_t i = 0; i < e.lu.rows(); ++i)
    if (abs(e.lu(i, i)) < pivot_floor) e.lu(i, i) = pivot_floor;
  return back_substitute(e, b);
}

}  // namespace feigen
