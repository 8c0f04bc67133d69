#pragma once

// Function representation on Chebyshev grids: nodes, the discrete
// Fourier-Chebyshev transform, Clenshaw evaluation, series calculus and
// coefficient-decay diagnostics.

#include <iosfwd>
#include <span>
#include <vector>

#include "feigen/numerics.hpp"

namespace feigen {

/// Values g(x_i) at the n Chebyshev roots x_i = cos((2i-1) pi / 2n).
struct GridFn {
  RealVector values;

  std::size_t size() const noexcept { return values.size(); }
};

/// g(x) = a_0 / 2 + sum_{k >= 1} a_k T_k(x).
struct ChebSeries {
  RealVector coeffs;

  std::size_t size() const noexcept { return coeffs.size(); }
  Real operator()(const Real& x) const;
};

/// The n Chebyshev roots, strictly decreasing and exactly symmetric
/// (x_{n+1-i} = -x_i).
RealVector cheb_nodes(std::size_t n, const PrecisionCtx& ctx);
RealVector cheb_nodes(std::size_t n);

/// Precomputed cos(k theta_i) table for repeated transforms on one grid.
class ChebTransform {
 public:
  explicit ChebTransform(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  const RealVector& nodes() const noexcept { return nodes_; }

  /// T_k(x_i) = cos(k theta_i), from the closed form.
  const Real& t(std::size_t k, std::size_t i) const {
    return cos_table_[(k * (2 * i + 1)) % (4 * n_)];
  }

  ChebSeries to_series(std::span<const Real> values) const;
  RealVector to_values(const ChebSeries& s) const;

  /// Series of the i-th Lagrange cardinal polynomial on this grid.
  ChebSeries cardinal(std::size_t i) const;

 private:
  std::size_t n_;
  RealVector nodes_;
  RealVector cos_table_;  // cos(j pi / 2n), j = 0 .. 4n-1
};

ChebSeries grid_to_series(const GridFn& f);
GridFn series_to_grid(const ChebSeries& s, std::size_t n);

/// Clenshaw recurrence; x may lie outside [-1, 1].
Real eval_series(const ChebSeries& s, const Real& x);

/// Evaluates value and first derivative in one pass.
std::pair<Real, Real> eval_series_with_derivative(const ChebSeries& s,
                                                  const Real& x);

ChebSeries series_derivative(const ChebSeries& s);

/// Product truncated to `length` coefficients.
ChebSeries series_product(const ChebSeries& a, const ChebSeries& b,
                          std::size_t length);

/// Pointwise power g^k by repeated multiplication, truncated to `length`.
ChebSeries series_power(const ChebSeries& g, int k, std::size_t length);

/// x^k as a Chebyshev series of length k + 1.
ChebSeries monomial_series(int k);

ChebSeries monomial_to_series(std::span<const Real> monomial);
RealVector series_to_monomial(const ChebSeries& s);

ChebSeries operator+(const ChebSeries& a, const ChebSeries& b);
ChebSeries operator-(const ChebSeries& a, const ChebSeries& b);
ChebSeries operator*(const Real& c, const ChebSeries& a);

struct DecayReport {
  RealVector log_inverse_magnitudes;  // log10(1 / |a_k|)
  double slope = 0;                   // least-squares slope of the above
  Real tail;                          // max(|a_{n-2}|, |a_{n-1}|)
  bool healthy = false;
};

/// Healthy iff the fitted slope is positive and the tail is at most
/// 10^(-D/3).  Coefficients below 10^-D * max|a_k| (parity zeros) are left
/// out of the fit.
DecayReport decay_report(const ChebSeries& s, const PrecisionCtx& ctx);

/// One coefficient per line: index TAB decimal string with D digits.
void write_coefficients(std::ostream& out, const ChebSeries& s,
                        const PrecisionCtx& ctx);

/// Reads the format above; blank lines and lines starting with '#' skipped.
ChebSeries read_coefficients(std::istream& in, const PrecisionCtx& ctx);

}  // namespace feigen
