#include "feigen/bases.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace feigen {

std::string_view to_string(BasisKind k) {
  switch (k) {
    case BasisKind::ChebGrid: return "cheb";
    case BasisKind::MonomialFull: return "monomial";
    case BasisKind::EvenMonomial: return "even";
    case BasisKind::Lanford: return "lanford";
    case BasisKind::RationalNodeMonomial: return "rational";
  }
  return "?";
}

BasisKind parse_basis_kind(std::string_view s) {
  if (s == "cheb") return BasisKind::ChebGrid;
  if (s == "monomial") return BasisKind::MonomialFull;
  if (s == "even") return BasisKind::EvenMonomial;
  if (s == "lanford") return BasisKind::Lanford;
  if (s == "rational") return BasisKind::RationalNodeMonomial;
  throw Error(ErrorCode::InvalidArgument,
              "unknown basis kind '" + std::string(s) + "'");
}

namespace {

bool even_kind(BasisKind k) {
  return k == BasisKind::Lanford || k == BasisKind::EvenMonomial;
}

// All powers the basis spans, before constraints.
std::vector<int> base_powers(const BasisSpec& spec) {
  std::vector<int> p;
  const int d = static_cast<int>(spec.dimension);
  switch (spec.kind) {
    case BasisKind::Lanford:
      for (int j = 1; j <= d; ++j) p.push_back(2 * j);
      break;
    case BasisKind::EvenMonomial:
      for (int j = 0; j <= d; ++j) p.push_back(2 * j);
      break;
    case BasisKind::MonomialFull:
    case BasisKind::RationalNodeMonomial:
      for (int j = 0; j < d; ++j) p.push_back(j);
      break;
    case BasisKind::ChebGrid:
      break;
  }
  return p;
}

std::vector<int> free_powers(const BasisSpec& spec) {
  std::vector<int> p = base_powers(spec);
  std::erase_if(p, [&](int power) {
    return std::any_of(spec.constraints.begin(), spec.constraints.end(),
                       [&](const auto& c) { return c.power == power; });
  });
  return p;
}

Real to_real(const Rational& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

Rational rational_power(const Rational& x, int p) {
  Rational r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

std::vector<Rational> exact_nodes(const BasisSpec& spec, std::size_t count) {
  std::vector<Rational> nodes;
  const long c = static_cast<long>(count);
  switch (spec.kind) {
    case BasisKind::Lanford:
      for (long i = 1; i <= c; ++i) nodes.emplace_back(i, c);
      break;
    case BasisKind::EvenMonomial:
      for (long i = 0; i < c; ++i) nodes.emplace_back(i, c - 1);
      break;
    case BasisKind::MonomialFull: {
      RealVector x = cheb_nodes(count);
      nodes.resize(count);
      for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
        nodes[i] = rational_approximant(x[i], spec.denominator_cap);
        nodes[count - 1 - i] = -nodes[i];
      }
      if (count % 2 == 1) nodes[count / 2] = 0;
      break;
    }
    case BasisKind::RationalNodeMonomial:
      if (!spec.nodes.empty()) return spec.nodes;
      for (long i = 0; i < c; ++i) nodes.emplace_back(2 * i + 1 - c, c);
      break;
    case BasisKind::ChebGrid:
      break;
  }
  return nodes;
}

Real fixed_part(const std::vector<CoefficientConstraint>& fixed, const Real& x) {
  Real s = 0;
  for (const auto& c : fixed) s += to_real(c.value) * pow(x, c.power);
  return s;
}

}  // namespace

void BasisSpec::validate() const {
  if (dimension < 2)
    throw Error(ErrorCode::InvalidArgument, "basis dimension must be >= 2");
  if (kind == BasisKind::ChebGrid) {
    if (!constraints.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "the Chebyshev grid basis takes pins, not coefficient "
                  "constraints");
    return;
  }
  const std::vector<int> powers = base_powers(*this);
  std::set<int> seen;
  for (const auto& c : constraints) {
    if (even_kind(kind) && c.power % 2 != 0)
      throw Error(ErrorCode::InvalidArgument,
                  "even bases forbid odd constraints (x^" +
                      std::to_string(c.power) + ")");
    if (std::find(powers.begin(), powers.end(), c.power) == powers.end())
      throw Error(ErrorCode::InvalidArgument,
                  "constraint on x^" + std::to_string(c.power) +
                      " is outside the basis");
    if (!seen.insert(c.power).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate constraint");
  }
  if (free_powers(*this).empty())
    throw Error(ErrorCode::InvalidArgument, "constraints leave no unknowns");
  if (kind == BasisKind::RationalNodeMonomial && !nodes.empty() &&
      nodes.size() != free_powers(*this).size())
    throw Error(ErrorCode::InvalidArgument,
                "rational node list must match the number of unknowns");
  const bool symmetric_nodes =
      kind == BasisKind::MonomialFull ||
      (kind == BasisKind::RationalNodeMonomial && nodes.empty());
  if (symmetric_nodes) {
    // N nodes symmetric about 0 carry ceil(N/2) even and floor(N/2) odd
    // functions; the free powers must split the same way.
    const std::vector<int> free = free_powers(*this);
    const auto even = static_cast<std::size_t>(
        std::count_if(free.begin(), free.end(), [](int p) { return p % 2 == 0; }));
    if (even != (free.size() + 1) / 2)
      throw Error(ErrorCode::InvalidArgument,
                  "symmetric nodes need ceil(N/2) even free powers out of N = " +
                      std::to_string(free.size()) + ", got " +
                      std::to_string(even) +
                      "; change the dimension by one");
  }
  if (denominator_cap < 1)
    throw Error(ErrorCode::InvalidArgument, "denominator cap must be positive");
}

RationalMatrix InterpolationMatrix::vandermonde() const {
  RationalMatrix v(nodes.size(), powers.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < powers.size(); ++j)
      v(i, j) = rational_power(nodes[i], powers[j]);
  return v;
}

Rational rational_approximant(const Real& x, long denominator_cap) {
  if (x < 0) return -rational_approximant(-x, denominator_cap);
  // convergents p_k / q_k of the continued fraction of x
  Integer p_prev = 1, q_prev = 0;
  Integer a0(static_cast<long>(floor(x)));
  Integer p = a0, q = 1;
  Real rest = x - Real(a0);
  for (int iter = 0; iter < 200 && rest != 0; ++iter) {
    Real inv = 1 / rest;
    Integer a(static_cast<long>(floor(inv)));
    rest = inv - floor(inv);
    Integer p_next = a * p + p_prev;
    Integer q_next = a * q + q_prev;
    if (q_next > denominator_cap) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return Rational(p, q);
}

BasisBuild build_basis(const BasisSpec& spec, const PrecisionCtx& ctx) {
  spec.validate();
  PrecisionScope scope(ctx);
  BasisBuild out;
  if (spec.kind == BasisKind::ChebGrid) {
    out.nodes = cheb_nodes(spec.dimension);
    return out;
  }

  InterpolationMatrix m;
  m.powers = free_powers(spec);
  m.fixed = spec.constraints;
  if (spec.kind == BasisKind::Lanford) m.fixed.push_back({0, Rational(1)});
  const std::size_t count = m.powers.size();

  if (spec.kind == BasisKind::MonomialFull && !spec.exact) {
    m.exact = false;
    out.nodes = cheb_nodes(count);
    RealMatrix v(count, count);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j)
        v(i, j) = pow(out.nodes[i], m.powers[j]);
    m.inverse_real = RealMatrix(count, count);
    for (std::size_t j = 0; j < count; ++j) {
      RealVector e(count, Real(0));
      e[j] = 1;
      m.inverse_real.set_column(j, std::span<const Real>(solve_linear(v, e, ctx)));
    }
  } else {
    m.nodes = exact_nodes(spec, count);
    m.inverse = solve_linear_exact(m.vandermonde(),
                                   RationalMatrix::identity(count));
    m.inverse_real = to_real(m.inverse);
    out.nodes.reserve(count);
    for (const auto& q : m.nodes) out.nodes.push_back(to_real(q));
  }
  out.matrix = std::move(m);
  return out;
}

RealVector coeffs_from_values(const InterpolationMatrix& m,
                              std::span<const Real> values) {
  const std::size_t count = m.powers.size();
  if (values.size() != count)
    throw Error(ErrorCode::InvalidArgument,
                "coeffs_from_values: expected " + std::to_string(count) +
                    " values");
  RealVector shifted(values.begin(), values.end());
  if (!m.fixed.empty()) {
    RealVector x;
    if (m.exact) {
      for (const auto& q : m.nodes) x.push_back(to_real(q));
    } else {
      x = cheb_nodes(count);
    }
    for (std::size_t i = 0; i < count; ++i) shifted[i] -= fixed_part(m.fixed, x[i]);
  }
  return multiply(m.inverse_real, shifted);
}

Discretization::Discretization(const BasisSpec& spec, const PrecisionCtx& ctx)
    : spec_(spec) {
  BasisBuild b = build_basis(spec, ctx);
  PrecisionScope scope(ctx);
  nodes_ = std::move(b.nodes);
  matrix_ = std::move(b.matrix);
  if (!matrix_) {
    transform_ = std::make_shared<ChebTransform>(nodes_.size());
    series_length_ = nodes_.size();
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      cardinals_.push_back(transform_->cardinal(j));
    return;
  }
  int max_power = 0;
  for (int p : matrix_->powers) max_power = std::max(max_power, p);
  for (const auto& c : matrix_->fixed) max_power = std::max(max_power, c.power);
  series_length_ = static_cast<std::size_t>(max_power) + 1;
  const std::size_t count = matrix_->powers.size();
  for (std::size_t j = 0; j < count; ++j) {
    RealVector mono(series_length_, Real(0));
    for (std::size_t k = 0; k < count; ++k)
      mono[matrix_->powers[k]] = matrix_->inverse_real(k, j);
    cardinals_.push_back(monomial_to_series(mono));
  }
}

ChebSeries Discretization::to_series(std::span<const Real> values) const {
  if (transform_) return transform_->to_series(values);
  const RealVector u = coeffs_from_values(*matrix_, values);
  RealVector mono(series_length_, Real(0));
  for (const auto& c : matrix_->fixed) mono[c.power] += to_real(c.value);
  for (std::size_t k = 0; k < u.size(); ++k) mono[matrix_->powers[k]] += u[k];
  return monomial_to_series(mono);
}

RealVector Discretization::values_of(const ChebSeries& g) const {
  RealVector v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) v[i] = eval_series(g, nodes_[i]);
  return v;
}

std::pair<Real, RealVector> Discretization::taylor_functional(int power) const {
  const std::size_t n = nodes_.size();
  RealVector w(n, Real(0));
  Real fixed = 0;
  if (power < 0)
    throw Error(ErrorCode::InvalidIndex, "negative Taylor index");
  if (matrix_) {
    for (const auto& c : matrix_->fixed)
      if (c.power == power) fixed = to_real(c.value);
    for (std::size_t k = 0; k < matrix_->powers.size(); ++k)
      if (matrix_->powers[k] == power)
        for (std::size_t j = 0; j < n; ++j) {
          w[j] = matrix_->inverse_real(k, j);
          // u = M (v - fixed(x))
          fixed -= w[j] * fixed_part(matrix_->fixed, nodes_[j]);
        }
    return {fixed, w};
  }
  if (static_cast<std::size_t>(power) >= series_length_) return {fixed, w};
  for (std::size_t j = 0; j < n; ++j) {
    if (power == 0) {
      w[j] = eval_series(cardinals_[j], Real(0));
    } else {
      w[j] = series_to_monomial(cardinals_[j])[power];
    }
  }
  return {fixed, w};
}

}  // namespace feigen
