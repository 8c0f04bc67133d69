#pragma once

#include <memory>

#include "feigen/spectrum.hpp"

namespace feigen::test {

inline const PrecisionCtx& ctx64() {
  static const PrecisionCtx ctx(64);
  return ctx;
}

inline std::shared_ptr<const Discretization> cheb_basis(std::size_t n) {
  PrecisionScope scope(ctx64());
  return std::make_shared<const Discretization>(BasisSpec::cheb(n), ctx64());
}

inline NewtonResult solve_exact(const OperatorSpec& spec, std::size_t n,
                                std::vector<Pin> pins = {}) {
  NewtonConfig cfg;
  cfg.jacobian_mode = JacobianMode::Exact;
  cfg.pins = std::move(pins);
  return newton_solve(spec, cheb_basis(n), default_seed(1), cfg, ctx64());
}

// Quadratic fixed point of T on 32 Chebyshev nodes, solved once per binary.
inline const NewtonResult& quadratic() {
  static const NewtonResult r = solve_exact({Variant::T, Linearization::FullDerivative}, 32);
  return r;
}

inline const SpectrumReport& quadratic_spectrum() {
  static const SpectrumReport rep = [] {
    PrecisionScope scope(ctx64());
    return compute_spectrum(quadratic(), ctx64().pow10(-32), ctx64());
  }();
  return rep;
}

inline double to_d(const Real& x) { return x.convert_to<double>(); }

inline Real min_distance(const SpectrumReport& rep, const Real& z) {
  Real best = -1;
  for (const auto& e : rep.eigenvalues) {
    const Real d = hypot(e.re - z, e.im);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

}  // namespace feigen::test
