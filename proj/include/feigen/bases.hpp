#pragma once

// Parameterizations of the unknown function.  Each basis fixes a set of
// collocation nodes; the Newton unknowns are always the values g(x_i) at
// those nodes, and the basis decides how values map to a polynomial.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feigen/chebyshev.hpp"

namespace feigen {

enum class BasisKind {
  ChebGrid,              // values at n Chebyshev roots
  MonomialFull,          // a_0 + a_1 x + ... at rational Chebyshev approximants
  EvenMonomial,          // a_0 + a_1 x^2 + ... + a_m x^2m at i/m, i = 0..m
  Lanford,               // 1 + a_1 x^2 + ... + a_m x^2m at i/m, i = 1..m
  RationalNodeMonomial,  // a_0 + a_1 x + ... at caller-chosen rational nodes
};

std::string_view to_string(BasisKind k);
BasisKind parse_basis_kind(std::string_view s);

/// Fixes the monomial coefficient of x^power.
struct CoefficientConstraint {
  int power = 0;
  Rational value;
};

struct BasisSpec {
  BasisKind kind = BasisKind::ChebGrid;
  /// ChebGrid: node count.  Lanford/EvenMonomial: m.  Monomial kinds: number
  /// of powers x^0..x^(dimension-1) before constraints.
  std::size_t dimension = 32;
  std::vector<CoefficientConstraint> constraints;
  /// Denominator cap for rational Chebyshev node approximants.
  long denominator_cap = 1000;
  /// MonomialFull only: false uses the true Chebyshev nodes and an
  /// extended-precision inverse (ill-conditioned; flagged in reports).
  bool exact = true;
  /// RationalNodeMonomial only; empty means equispaced midpoints of [-1, 1].
  std::vector<Rational> nodes;

  static BasisSpec cheb(std::size_t n) { return make(BasisKind::ChebGrid, n); }
  static BasisSpec lanford(std::size_t m) { return make(BasisKind::Lanford, m); }
  static BasisSpec even(std::size_t m) { return make(BasisKind::EvenMonomial, m); }
  static BasisSpec monomial(std::size_t dimension,
                            std::vector<CoefficientConstraint> constraints = {}) {
    BasisSpec s = make(BasisKind::MonomialFull, dimension);
    s.constraints = std::move(constraints);
    return s;
  }
  static BasisSpec make(BasisKind kind, std::size_t dimension) {
    BasisSpec s;
    s.kind = kind;
    s.dimension = dimension;
    return s;
  }

  /// Throws InvalidArgument on an inconsistent spec.
  void validate() const;
};

/// Maps node values to the free monomial coefficients:
///   u = M (v - fixed(x_i)).
struct InterpolationMatrix {
  std::vector<int> powers;  // free powers, one per unknown
  std::vector<CoefficientConstraint> fixed;
  std::vector<Rational> nodes;  // empty for a non-exact build
  bool exact = true;
  RationalMatrix inverse;  // exact M (when exact)
  RealMatrix inverse_real;  // M at working precision

  /// The Vandermonde-type matrix V_ij = x_i^(p_j) (exact builds only).
  RationalMatrix vandermonde() const;
};

struct BasisBuild {
  RealVector nodes;
  std::optional<InterpolationMatrix> matrix;  // absent for ChebGrid
};

BasisBuild build_basis(const BasisSpec& spec, const PrecisionCtx& ctx);

/// Coefficients of the free powers from node values, evaluated at working
/// precision from the (exact) matrix.
RealVector coeffs_from_values(const InterpolationMatrix& m,
                              std::span<const Real> values);

/// Continued-fraction convergent of x with the largest denominator <= cap.
Rational rational_approximant(const Real& x, long denominator_cap);

/// A built basis ready for collocation.
class Discretization {
 public:
  Discretization(const BasisSpec& spec, const PrecisionCtx& ctx);

  const BasisSpec& spec() const noexcept { return spec_; }
  std::size_t dimension() const noexcept { return nodes_.size(); }
  const RealVector& nodes() const noexcept { return nodes_; }
  const std::optional<InterpolationMatrix>& matrix() const noexcept {
    return matrix_;
  }
  std::size_t series_length() const noexcept { return series_length_; }

  ChebSeries to_series(std::span<const Real> values) const;
  RealVector values_of(const ChebSeries& g) const;

  /// d g / d v_j as a series.
  const ChebSeries& cardinal(std::size_t j) const { return cardinals_[j]; }

  /// Weights w with  (Taylor coefficient `power` of g) = fixed + w . v.
  std::pair<Real, RealVector> taylor_functional(int power) const;

 private:
  BasisSpec spec_;
  RealVector nodes_;
  std::optional<InterpolationMatrix> matrix_;
  std::shared_ptr<const ChebTransform> transform_;
  std::vector<ChebSeries> cardinals_;
  std::size_t series_length_ = 0;
};

}  // namespace feigen
