#include "feigen/spectrum.hpp"

#include <limits>
#include <string>

namespace feigen {

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::AlphaPower: return "alpha_power";
    case Tag::Delta: return "delta";
    case Tag::Unexplained: return "unexplained";
  }
  return "?";
}

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Mixed: return "mixed";
  }
  return "?";
}

std::size_t SpectrumReport::nearest(const Real& z) const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  Real best_d = -1;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const auto& e = eigenvalues[i];
    const Real d = hypot(e.re - z, e.im);
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

ChebSeries eigenvector_function(const Discretization& basis,
                                std::span<const Real> v) {
  ChebSeries h;
  h.coeffs.assign(basis.series_length(), Real(0));
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto& c = basis.cardinal(j).coeffs;
    for (std::size_t k = 0; k < c.size(); ++k) h.coeffs[k] += v[j] * c[k];
  }
  return h;
}

Parity eigenfunction_parity(const ChebSeries& h) {
  Real scale = 0, even_dev = 0, odd_dev = 0;
  for (int i = 0; i <= 32; ++i) {
    const Real x = Real(-1) + Real(2 * i) / 32;
    const Real a = eval_series(h, x);
    const Real b = eval_series(h, Real(-x));
    scale = std::max<Real>(scale, abs(a));
    even_dev = std::max<Real>(even_dev, abs(a - b));
    odd_dev = std::max<Real>(odd_dev, abs(a + b));
  }
  const Real tol = scale / 100000000;
  if (even_dev <= tol) return Parity::Even;
  if (odd_dev <= tol) return Parity::Odd;
  return Parity::Mixed;
}

std::vector<Classification> classify_spectrum(
    const std::vector<std::pair<Real, Real>>& eigs, const Real& base,
    const std::vector<Parity>& parities, double tol_rel) {
  if (parities.size() != eigs.size())
    throw Error(ErrorCode::InvalidArgument,
                "classify_spectrum: one parity per eigenvalue required");
  std::vector<Classification> out(eigs.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const auto& [re, im] = eigs[i];
    std::vector<int> hits;
    for (int k = kMinAlphaPower; k <= kMaxAlphaPower; ++k) {
      const Real target = pow(base, 1 - k);
      const Real err = hypot(re - target, im);
      if (err <= tol_rel * abs(target)) {
        hits.push_back(k);
        out[i] = {Tag::AlphaPower, k, err};
      }
    }
    if (hits.size() > 1) {
      std::string ks;
      for (int k : hits) ks += (ks.empty() ? "" : ", ") + std::to_string(k);
      throw Error(ErrorCode::AmbiguousMatch,
                  "eigenvalue " + re.str(12) + " matches alpha powers k = " +
                      ks);
    }
  }
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (out[i].tag == Tag::Unexplained && parities[i] == Parity::Even) {
      out[i].tag = Tag::Delta;
      break;
    }
  }
  return out;
}

SpectrumReport compute_spectrum(const NewtonResult& result, const Real& tol,
                                const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx);
  const std::size_t n = result.jacobian.rows();
  RealMatrix dt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dt(i, j) = (i == j ? Real(1) : Real(0)) - result.jacobian(i, j);
  const std::vector<EigenPair> pairs = eig_dense(dt, tol, ctx);

  SpectrumReport rep;
  rep.spec = result.spec;
  rep.basis = result.basis->spec();
  rep.discretization = result.basis;
  rep.digits = ctx.digits();
  rep.n = n;
  rep.alpha = result.scaling.alpha();
  rep.base = spectral_base(result.spec.variant, result.scaling);

  std::vector<std::pair<Real, Real>> eigs;
  std::vector<Parity> parities;
  for (const auto& p : pairs) {
    SpectralEntry e;
    e.re = p.re;
    e.im = p.im;
    e.modulus = p.modulus();
    e.residual = p.residual;
    e.eigenfunction = eigenvector_function(*result.basis, p.vec_re);
    e.parity = eigenfunction_parity(e.eigenfunction);
    eigs.emplace_back(e.re, e.im);
    parities.push_back(e.parity);
    rep.eigenvalues.push_back(std::move(e));
  }
  const auto cls = classify_spectrum(eigs, rep.base, parities);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    rep.eigenvalues[i].cls = cls[i];
    if (cls[i].tag == Tag::Delta) rep.delta = rep.eigenvalues[i].re;
  }
  return rep;
}

std::pair<ChebSeries, Real> explicit_pair(const OperatorSpec& spec,
                                          const ChebSeries& g, int k) {
  const Variant v = spec.variant;
  const bool full = spec.linearization == Linearization::FullDerivative;
  const bool flipped = v == Variant::T2 || v == Variant::T3;
  const bool value_at_one = v == Variant::T || v == Variant::T2;
  const Real b = spectral_base(v, scaling_of(v, g));
  const auto none = [&](const std::string& why) {
    return Error(ErrorCode::NoExplicitForm,
                 std::string(to_string(v)) + " " +
                     std::string(to_string(spec.linearization)) + ": " + why);
  };

  if (k == -1) {
    if (!full) throw none("g - x g' is not an eigenfunction of the frozen form");
    const ChebSeries h =
        explicit_eigenfunction(EigenfunctionKind::GMinusXDg, g, 0);
    return {h, value_at_one ? Real(b * b) : Real(1)};
  }
  if (k == 1)
    throw Error(ErrorCode::InvalidIndex, "explicit eigenfunction index k = 1");
  if (flipped && k % 2 == 0)
    throw none("no explicit eigenfunction for even k = " + std::to_string(k));
  if (full && !value_at_one)
    throw none("only g - x g' (eigenvalue 1) is known in closed form");
  const auto kind = full ? EigenfunctionKind::FullPower : EigenfunctionKind::FrozenPower;
  return {explicit_eigenfunction(kind, g, k), pow(b, 1 - k)};
}

Real verify_explicit(const ChebSeries& g, const OperatorSpec& spec,
                     const ChebSeries& h, const Real& lambda) {
  const RealVector x = cheb_nodes(g.size());
  const RealVector dh = linearized_apply(spec, g, h, x);
  Real num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Real hv = eval_series(h, x[i]);
    num = std::max<Real>(num, abs(dh[i] - lambda * hv));
    den = std::max<Real>(den, abs(hv));
  }
  if (den == 0)
    throw Error(ErrorCode::DivideByZero, "verify_explicit: h vanishes");
  return num / den;
}

Real verify_explicit(const ChebSeries& g, const OperatorSpec& spec, int k) {
  auto [h, lambda] = explicit_pair(spec, g, k);
  return verify_explicit(g, spec, h, lambda);
}

}  // namespace feigen
