#include "feigen/chebyshev.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace feigen {

namespace {

Real pi() { return acos(Real(-1)); }

void require_nodes(std::size_t n) {
  if (n < 2)
    throw Error(ErrorCode::InvalidArgument,
                "Chebyshev grids need at least 2 nodes, got " + std::to_string(n));
}

}  // namespace

Real ChebSeries::operator()(const Real& x) const { return eval_series(*this, x); }

RealVector cheb_nodes(std::size_t n) {
  require_nodes(n);
  RealVector x(n);
  const Real step = pi() / Real(2 * n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    x[i] = cos(Real(2 * i + 1) * step);
    x[n - 1 - i] = -x[i];
  }
  if (n % 2 == 1) x[n / 2] = 0;
  return x;
}

RealVector cheb_nodes(std::size_t n, const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx);
  return cheb_nodes(n);
}

ChebTransform::ChebTransform(std::size_t n) : n_(n), nodes_(cheb_nodes(n)) {
  cos_table_.resize(4 * n);
  const Real step = pi() / Real(2 * n);
  // cos(j pi/2n) with exact symmetries so that T_k(-x) = (-1)^k T_k(x)
  // holds bitwise on the grid.
  for (std::size_t j = 0; j <= n; ++j) cos_table_[j] = cos(Real(j) * step);
  cos_table_[n] = 0;
  for (std::size_t j = 0; j < n; ++j) cos_table_[2 * n - j] = -cos_table_[j];
  for (std::size_t j = 1; j < 2 * n; ++j) cos_table_[4 * n - j] = cos_table_[j];
  cos_table_[2 * n] = -1;
}

ChebSeries ChebTransform::to_series(std::span<const Real> values) const {
  if (values.size() != n_)
    throw Error(ErrorCode::InvalidArgument, "to_series: grid size mismatch");
  ChebSeries s;
  s.coeffs.assign(n_, Real(0));
  const Real scale = Real(2) / Real(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    Real acc = 0;
    for (std::size_t i = 0; i < n_; ++i) acc += values[i] * t(k, i);
    s.coeffs[k] = acc * scale;
  }
  return s;
}

RealVector ChebTransform::to_values(const ChebSeries& s) const {
  if (s.size() > n_)
    throw Error(ErrorCode::InvalidArgument,
                "to_values: series longer than the grid");
  RealVector v(n_, Real(0));
  for (std::size_t i = 0; i < n_; ++i) {
    Real acc = s.size() > 0 ? s.coeffs[0] / 2 : Real(0);
    for (std::size_t k = 1; k < s.size(); ++k) acc += s.coeffs[k] * t(k, i);
    v[i] = acc;
  }
  return v;
}

ChebSeries ChebTransform::cardinal(std::size_t i) const {
  ChebSeries s;
  s.coeffs.resize(n_);
  const Real scale = Real(2) / Real(n_);
  for (std::size_t k = 0; k < n_; ++k) s.coeffs[k] = scale * t(k, i);
  return s;
}

ChebSeries grid_to_series(const GridFn& f) {
  require_nodes(f.size());
  return ChebTransform(f.size()).to_series(f.values);
}

GridFn series_to_grid(const ChebSeries& s, std::size_t n) {
  require_nodes(n);
  return GridFn{ChebTransform(n).to_values(s)};
}

Real eval_series(const ChebSeries& s, const Real& x) {
  const auto& a = s.coeffs;
  if (a.empty()) return Real(0);
  Real b1 = 0, b2 = 0;
  const Real two_x = 2 * x;
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    Real b0 = a[k] + two_x * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return a[0] / 2 + x * b1 - b2;
}

std::pair<Real, Real> eval_series_with_derivative(const ChebSeries& s,
                                                  const Real& x) {
  // Forward recurrences for T_k and T'_k.
  const auto& a = s.coeffs;
  if (a.empty()) return {Real(0), Real(0)};
  Real value = a[0] / 2, deriv = 0;
  Real t_prev = 1, t_cur = x;
  Real d_prev = 0, d_cur = 1;
  for (std::size_t k = 1; k < a.size(); ++k) {
    value += a[k] * t_cur;
    deriv += a[k] * d_cur;
    Real t_next = 2 * x * t_cur - t_prev;
    Real d_next = 2 * t_cur + 2 * x * d_cur - d_prev;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
    d_prev = std::move(d_cur);
    d_cur = std::move(d_next);
  }
  return {value, deriv};
}

ChebSeries series_derivative(const ChebSeries& s) {
  const std::size_t n = s.size();
  ChebSeries d;
  d.coeffs.assign(std::max<std::size_t>(n, 1), Real(0));
  if (n <= 1) return d;
  // c'_{k-1} = c'_{k+1} + 2 k c_k
  d.coeffs[n - 1] = 0;
  if (n >= 2) d.coeffs[n - 2] = Real(2 * (n - 1)) * s.coeffs[n - 1];
  for (std::size_t k = n - 2; k >= 1; --k)
    d.coeffs[k - 1] = (k + 1 < n ? d.coeffs[k + 1] : Real(0)) +
                      Real(2 * k) * s.coeffs[k];
  return d;
}

ChebSeries series_product(const ChebSeries& a, const ChebSeries& b,
                          std::size_t length) {
  // Work with true coefficients c_0 = a_0 / 2; T_i T_j = (T_{i+j} + T_|i-j|)/2.
  auto full = [](const ChebSeries& s) {
    RealVector c = s.coeffs;
    if (!c.empty()) c[0] /= 2;
    return c;
  };
  const RealVector ca = full(a), cb = full(b);
  RealVector prod(length, Real(0));
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] == 0) continue;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      Real half = ca[i] * cb[j] / 2;
      const std::size_t sum = i + j;
      const std::size_t diff = i > j ? i - j : j - i;
      if (sum < length) prod[sum] += half;
      if (diff < length) prod[diff] += half;
    }
  }
  if (!prod.empty()) prod[0] *= 2;
  return ChebSeries{std::move(prod)};
}

ChebSeries series_power(const ChebSeries& g, int k, std::size_t length) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "series_power: k < 0");
  ChebSeries result{RealVector(std::max<std::size_t>(length, 1), Real(0))};
  result.coeffs[0] = 2;
  for (int i = 0; i < k; ++i) result = series_product(result, g, length);
  return result;
}

ChebSeries monomial_series(int k) {
  RealVector mono(k + 1, Real(0));
  mono[k] = 1;
  return monomial_to_series(mono);
}

ChebSeries monomial_to_series(std::span<const Real> monomial) {
  // Horner in the Chebyshev basis: p <- x p + c_j, using
  // x T_0 = T_1, x T_k = (T_{k+1} + T_{k-1}) / 2, on true coefficients.
  const std::size_t n = monomial.size();
  RealVector c(std::max<std::size_t>(n, 1), Real(0));
  for (std::size_t j = n; j-- > 0;) {
    RealVector next(c.size(), Real(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0) continue;
      if (k == 0) {
        if (1 < next.size()) next[1] += c[0];
      } else {
        if (k + 1 < next.size()) next[k + 1] += c[k] / 2;
        next[k - 1] += c[k] / 2;
      }
    }
    next[0] += monomial[j];
    c = std::move(next);
  }
  c[0] *= 2;
  return ChebSeries{std::move(c)};
}

RealVector series_to_monomial(const ChebSeries& s) {
  const std::size_t n = s.size();
  RealVector mono(std::max<std::size_t>(n, 1), Real(0));
  if (n == 0) return mono;
  // T_k monomial coefficients by T_{k+1} = 2x T_k - T_{k-1}.
  RealVector t_prev(n, Real(0)), t_cur(n, Real(0));
  t_prev[0] = 1;
  mono[0] += s.coeffs[0] / 2;
  if (n == 1) return mono;
  t_cur[1] = 1;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t j = 0; j <= k; ++j) mono[j] += s.coeffs[k] * t_cur[j];
    if (k + 1 == n) break;
    RealVector t_next(n, Real(0));
    for (std::size_t j = 0; j <= k; ++j) t_next[j + 1] += 2 * t_cur[j];
    for (std::size_t j = 0; j < k; ++j) t_next[j] -= t_prev[j];
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return mono;
}

ChebSeries operator+(const ChebSeries& a, const ChebSeries& b) {
  ChebSeries r{RealVector(std::max(a.size(), b.size()), Real(0))};
  for (std::size_t k = 0; k < a.size(); ++k) r.coeffs[k] += a.coeffs[k];
  for (std::size_t k = 0; k < b.size(); ++k) r.coeffs[k] += b.coeffs[k];
  return r;
}

ChebSeries operator-(const ChebSeries& a, const ChebSeries& b) {
  ChebSeries r{RealVector(std::max(a.size(), b.size()), Real(0))};
  for (std::size_t k = 0; k < a.size(); ++k) r.coeffs[k] += a.coeffs[k];
  for (std::size_t k = 0; k < b.size(); ++k) r.coeffs[k] -= b.coeffs[k];
  return r;
}

ChebSeries operator*(const Real& c, const ChebSeries& a) {
  ChebSeries r = a;
  for (auto& x : r.coeffs) x *= c;
  return r;
}

DecayReport decay_report(const ChebSeries& s, const PrecisionCtx& ctx) {
  if (s.size() < 8)
    throw Error(ErrorCode::InvalidArgument,
                "decay_report needs at least 8 coefficients");
  PrecisionScope scope(ctx);
  DecayReport r;
  const std::size_t n = s.size();
  Real largest = 0;
  for (const auto& a : s.coeffs) largest = std::max(largest, Real(abs(a)));
  const Real floor = ctx.pow10(-ctx.digits()) * largest;

  r.log_inverse_magnitudes.resize(n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Real mag = abs(s.coeffs[k]);
    // an exact zero is reported at the precision floor
    Real shown = mag > 0 ? mag : ctx.pow10(-ctx.digits() - 10);
    r.log_inverse_magnitudes[k] = -log10(shown);
    if (mag > floor) {
      const double y = static_cast<double>(r.log_inverse_magnitudes[k]);
      const double x = static_cast<double>(k);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  }
  if (count >= 2) {
    const double den = count * sxx - sx * sx;
    r.slope = den != 0 ? (count * sxy - sx * sy) / den : 0.0;
  }
  r.tail = std::max(Real(abs(s.coeffs[n - 2])), Real(abs(s.coeffs[n - 1])));
  const Real threshold =
      pow(Real(10), -Real(ctx.digits()) / 3);
  r.healthy = r.slope > 0 && r.tail <= threshold;
  return r;
}

void write_coefficients(std::ostream& out, const ChebSeries& s,
                        const PrecisionCtx& ctx) {
  for (std::size_t k = 0; k < s.size(); ++k)
    out << k << '\t' << ctx.format(s.coeffs[k]) << '\n';
}

ChebSeries read_coefficients(std::istream& in, const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx);
  ChebSeries s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long index;
    std::string value;
    if (!(fields >> index >> value) || index < 0)
      throw Error(ErrorCode::InvalidArgument,
                  "coefficient list: malformed line " + std::to_string(line_no));
    if (static_cast<std::size_t>(index) >= s.coeffs.size())
      s.coeffs.resize(index + 1, Real(0));
    try {
      s.coeffs[index] = Real(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  "coefficient list: bad number on line " +
                      std::to_string(line_no));
    }
  }
  if (s.coeffs.empty())
    throw Error(ErrorCode::InvalidArgument, "coefficient list is empty");
  return s;
}

}  // namespace feigen
