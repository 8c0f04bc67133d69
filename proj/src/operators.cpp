#include "feigen/operators.hpp"

#include <string>

namespace feigen {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::T: return "T";
    case Variant::T2: return "T2";
    case Variant::T3: return "T3";
    case Variant::T4: return "T4";
  }
  return "?";
}

std::string_view to_string(Linearization l) {
  return l == Linearization::FrozenAlpha ? "frozen" : "full";
}

Variant parse_variant(std::string_view s) {
  if (s == "T") return Variant::T;
  if (s == "T2") return Variant::T2;
  if (s == "T3") return Variant::T3;
  if (s == "T4") return Variant::T4;
  throw Error(ErrorCode::InvalidArgument,
              "unknown operator variant '" + std::string(s) + "'");
}

Linearization parse_linearization(std::string_view s) {
  if (s == "full") return Linearization::FullDerivative;
  if (s == "frozen") return Linearization::FrozenAlpha;
  throw Error(ErrorCode::InvalidArgument,
              "unknown linearization '" + std::string(s) + "'");
}

namespace {

bool uses_value_at_one(Variant v) { return v == Variant::T || v == Variant::T2; }
bool reflects(Variant v) { return v == Variant::T2 || v == Variant::T4; }

}  // namespace

ScalingConstant scaling_of(Variant variant, const ChebSeries& g) {
  if (uses_value_at_one(variant)) {
    Real g1 = eval_series(g, Real(1));
    if (g1 == 0)
      throw Error(ErrorCode::DivideByZero, "scaling_of: g(1) = 0");
    return {1 / g1, ScalingKind::InverseValueAtOne};
  }
  Real g0 = eval_series(g, Real(0));
  Real gg0 = eval_series(g, g0);
  if (gg0 == 0)
    throw Error(ErrorCode::DivideByZero, "scaling_of: g(g(0)) = 0");
  return {-g0 / gg0, ScalingKind::MinusRatioAtZero};
}

Real spectral_base(Variant variant, const ScalingConstant& scaling) {
  const Real alpha = scaling.alpha();
  return (variant == Variant::T || variant == Variant::T4) ? alpha : Real(-alpha);
}

RealVector apply(Variant variant, const ChebSeries& g,
                 std::span<const Real> points) {
  const ScalingConstant c = scaling_of(variant, g);
  const Real sigma = reflects(variant) ? -1 : 1;
  const Real outer = uses_value_at_one(variant) ? c.value : Real(-c.value);
  RealVector out(points.size());
  if (variant == Variant::T) {
    // literally g(g(g(1) x)) / g(1)
    const Real g1 = eval_series(g, Real(1));
    for (std::size_t i = 0; i < points.size(); ++i)
      out[i] = eval_series(g, eval_series(g, g1 * points[i])) / g1;
    return out;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Real y = sigma * points[i] / c.value;
    out[i] = outer * eval_series(g, eval_series(g, y));
  }
  return out;
}

GridFn apply(Variant variant, const ChebSeries& g, std::size_t n) {
  return GridFn{apply(variant, g, cheb_nodes(n))};
}

LinearizedOperator::LinearizedOperator(const OperatorSpec& spec,
                                       const ChebSeries& g,
                                       std::span<const Real> points)
    : spec_(spec), scaling_(scaling_of(spec.variant, g)) {
  const Variant v = spec.variant;
  const Real sigma = reflects(v) ? -1 : 1;
  outer_sign_ = uses_value_at_one(v) ? 1 : -1;
  const ChebSeries dg = series_derivative(g);
  const std::size_t n = points.size();
  y_.resize(n);
  g_y_.resize(n);
  dg_g_y_.resize(n);
  rank_one_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    y_[i] = sigma * points[i] / scaling_.value;
    g_y_[i] = eval_series(g, y_[i]);
    dg_g_y_[i] = eval_series(dg, g_y_[i]);
    const Real g_g_y = eval_series(g, g_y_[i]);
    const Real dg_y = eval_series(dg, y_[i]);
    rank_one_[i] = g_g_y - y_[i] * dg_g_y_[i] * dg_y;
  }
  g0_ = eval_series(g, Real(0));
  g_g0_ = eval_series(g, g0_);
  dg_g0_ = eval_series(dg, g0_);
}

Real LinearizedOperator::scaling_variation(const ChebSeries& h) const {
  if (uses_value_at_one(spec_.variant)) {
    // c = 1/g(1): dc = -c^2 h(1)
    return -scaling_.value * scaling_.value * eval_series(h, Real(1));
  }
  // a = -g(0)/g(g(0)): da = -h(0)/d + g(0) (g'(g(0)) h(0) + h(g(0))) / d^2
  const Real h0 = eval_series(h, Real(0));
  const Real h_g0 = eval_series(h, g0_);
  return -h0 / g_g0_ + g0_ * (dg_g0_ * h0 + h_g0) / (g_g0_ * g_g0_);
}

RealVector LinearizedOperator::correction(const ChebSeries& h) const {
  RealVector out(y_.size(), Real(0));
  if (spec_.linearization == Linearization::FrozenAlpha) return out;
  const Real dc = outer_sign_ * scaling_variation(h);
  for (std::size_t i = 0; i < y_.size(); ++i) out[i] = dc * rank_one_[i];
  return out;
}

RealVector LinearizedOperator::operator()(const ChebSeries& h) const {
  const Real outer = outer_sign_ * scaling_.value;
  RealVector out = correction(h);
  for (std::size_t i = 0; i < y_.size(); ++i)
    out[i] += outer * (dg_g_y_[i] * eval_series(h, y_[i]) +
                       eval_series(h, g_y_[i]));
  return out;
}

RealVector linearized_apply(const OperatorSpec& spec, const ChebSeries& g,
                            const ChebSeries& h, std::span<const Real> points) {
  return LinearizedOperator(spec, g, points)(h);
}

GridFn linearized_apply(const OperatorSpec& spec, const ChebSeries& g,
                        const ChebSeries& h, std::size_t n) {
  return GridFn{linearized_apply(spec, g, h, cheb_nodes(n))};
}

ChebSeries explicit_eigenfunction(EigenfunctionKind kind, const ChebSeries& g,
                                  int k) {
  const std::size_t len = g.size();
  const ChebSeries dg = series_derivative(g);
  auto x_power_times_dg = [&](int power) {
    return series_product(monomial_series(power), dg, len);
  };
  const ChebSeries g_minus_xdg = g - x_power_times_dg(1);
  if (kind == EigenfunctionKind::GMinusXDg) return g_minus_xdg;

  if (k == 1 || k < 0)
    throw Error(ErrorCode::InvalidIndex,
                "explicit eigenfunction index must be 0 or >= 2, got " +
                    std::to_string(k));
  if (static_cast<std::size_t>(k) >= len)
    throw Error(ErrorCode::InvalidIndex,
                "explicit eigenfunction index exceeds the series length");
  const ChebSeries power_part = series_power(g, k, len) - x_power_times_dg(k);
  if (kind == EigenfunctionKind::FrozenPower) return power_part;
  return g_minus_xdg - power_part;
}

}  // namespace feigen
