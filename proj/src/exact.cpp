#include "feigen/numerics.hpp"

namespace feigen {

namespace {

Integer lcm_of_denominators(std::span<const Rational> row) {
  Integer l = 1;
  for (const auto& q : row) l = lcm(l, Integer(denominator(q)));
  return l;
}

}  // namespace

RationalMatrix solve_linear_exact(const RationalMatrix& a,
                                  const RationalMatrix& b) {
  if (!a.square() || a.rows() != b.rows())
    throw Error(ErrorCode::InvalidArgument,
                "solve_linear_exact: A must be square and match B");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();

  // Scale each row of [A | B] to integers; the solution is unchanged.
  Matrix<Integer> w(n, n + m);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(a.row(i).begin(), a.row(i).end());
    row.insert(row.end(), b.row(i).begin(), b.row(i).end());
    Integer scale = lcm_of_denominators(row);
    for (std::size_t j = 0; j < n + m; ++j) {
      Rational s = row[j] * Rational(scale);
      w(i, j) = numerator(s);
    }
  }

  // Fraction-free elimination: every division below is exact.
  Integer previous = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && w(p, k) == 0) ++p;
    if (p == n)
      throw Error(ErrorCode::ExactlySingular,
                  "solve_linear_exact: determinant is zero");
    w.swap_rows(k, p);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n + m; ++j)
        w(i, j) = (w(k, k) * w(i, j) - w(i, k) * w(k, j)) / previous;
      w(i, k) = 0;
    }
    previous = w(k, k);
  }

  RationalMatrix x(n, m);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = n; i-- > 0;) {
      Rational s(w(i, n + c));
      for (std::size_t j = i + 1; j < n; ++j) s -= Rational(w(i, j)) * x(j, c);
      x(i, c) = s / Rational(w(i, i));
    }
  }
  return x;
}

}  // namespace feigen
