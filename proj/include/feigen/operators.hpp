#pragma once

// The period-doubling operators and their linearizations.
//
// All four variants share the form
//     T(g)(x) = s c g(g(y)),   y = sigma x / c,
// with
//     T  : c = 1/g(1),                 s = +1, sigma = +1
//     T2 : c = 1/g(1),                 s = +1, sigma = -1
//     T3 : c = a = -g(0)/g(g(0)),      s = -1, sigma = +1
//     T4 : c = a,                      s = -1, sigma = -1
// The frozen linearization holds c fixed; the full derivative adds the
// rank-one term s dc (g(g(y)) - y g'(g(y)) g'(y)) where dc is the variation
// of c in direction h.

#include <span>
#include <string_view>

#include "feigen/chebyshev.hpp"

namespace feigen {

enum class Variant { T, T2, T3, T4 };
enum class Linearization { FrozenAlpha, FullDerivative };

struct OperatorSpec {
  Variant variant = Variant::T;
  Linearization linearization = Linearization::FullDerivative;
};

std::string_view to_string(Variant v);
std::string_view to_string(Linearization l);
Variant parse_variant(std::string_view s);
Linearization parse_linearization(std::string_view s);

enum class ScalingKind { InverseValueAtOne, MinusRatioAtZero };

struct ScalingConstant {
  Real value;
  ScalingKind kind = ScalingKind::InverseValueAtOne;

  /// The value in the alpha = 1/g(1) convention (a = -alpha for T3/T4).
  Real alpha() const {
    return kind == ScalingKind::InverseValueAtOne ? value : Real(-value);
  }
};

/// alpha = 1/g(1) for T/T2; a = -g(0)/g(g(0)) for T3/T4.
ScalingConstant scaling_of(Variant variant, const ChebSeries& g);

/// Base b such that the alpha-power eigenvalues are b^(1-k): alpha for T and
/// T4, -alpha for the sign-flipped T2 and T3.
Real spectral_base(Variant variant, const ScalingConstant& scaling);

RealVector apply(Variant variant, const ChebSeries& g,
                 std::span<const Real> points);
GridFn apply(Variant variant, const ChebSeries& g, std::size_t n);

/// dT(g) (or its frozen-scaling counterpart) precomputed at one g and one
/// set of evaluation points, for applying to many directions h.
class LinearizedOperator {
 public:
  LinearizedOperator(const OperatorSpec& spec, const ChebSeries& g,
                     std::span<const Real> points);

  RealVector operator()(const ChebSeries& h) const;

  /// Only the rank-one scaling-variation part (zero for the frozen form).
  RealVector correction(const ChebSeries& h) const;

  const ScalingConstant& scaling() const noexcept { return scaling_; }

 private:
  Real scaling_variation(const ChebSeries& h) const;

  OperatorSpec spec_;
  ScalingConstant scaling_;
  Real outer_sign_;
  RealVector y_;          // sigma x / c
  RealVector g_y_;        // g(y)
  RealVector dg_g_y_;     // g'(g(y))
  RealVector rank_one_;   // g(g(y)) - y g'(g(y)) g'(y)
  Real g0_, g_g0_, dg_g0_;
};

RealVector linearized_apply(const OperatorSpec& spec, const ChebSeries& g,
                            const ChebSeries& h, std::span<const Real> points);
GridFn linearized_apply(const OperatorSpec& spec, const ChebSeries& g,
                        const ChebSeries& h, std::size_t n);

enum class EigenfunctionKind {
  FullPower,    // g - x g' - g^k + x^k g'   (eigenvalue alpha^(1-k) of dT)
  GMinusXDg,    // g - x g'                  (eigenvalue alpha^2 of dT)
  FrozenPower,  // g^k - x^k g'              (eigenvalue alpha^(1-k) of L)
};

/// Closed-form eigenfunctions on the working grid (series truncated to the
/// length of g).  InvalidIndex for k = 1 or k < 0 in the k-indexed forms.
ChebSeries explicit_eigenfunction(EigenfunctionKind kind, const ChebSeries& g,
                                  int k = 0);

}  // namespace feigen
