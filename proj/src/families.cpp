#include "feigen/families.hpp"

#include <string>

namespace feigen {

FamilyMember family_member(const ChebSeries& g, const Real& mu,
                           bool allow_extrapolation) {
  if (mu == 0) throw Error(ErrorCode::InvalidArgument, "family parameter mu = 0");
  const bool outside = abs(mu) < 1;
  if (outside && !allow_extrapolation)
    throw Error(ErrorCode::InvalidArgument,
                "|mu| < 1 evaluates g outside [-1, 1]; enable extrapolation "
                "to allow it");
  RealVector mono = series_to_monomial(g);
  Real scale = mu;
  for (auto& a : mono) {
    a *= scale;
    scale /= mu;
  }
  return {mu, monomial_to_series(mono), outside};
}

Real family_residual(const ChebSeries& g, const Real& beta) {
  Real worst = 0;
  for (int i = 0; i <= 200; ++i) {
    const Real x = Real(-1) + Real(i) / 100;
    const Real inner = eval_series(g, eval_series(g, x / beta));
    worst = std::max<Real>(worst, abs(eval_series(g, x) - beta * inner));
  }
  return worst;
}

Real FamilyCheck::worst_match() const {
  Real w = 0;
  for (const auto& m : matches) w = std::max<Real>(w, m.max_difference);
  return w;
}

FamilyCheck family_spectrum_check(const ChebSeries& g,
                                  const std::vector<Real>& mus, Variant variant,
                                  std::size_t n, const PrecisionCtx& ctx,
                                  std::size_t compared,
                                  bool allow_extrapolation) {
  if (variant != Variant::T3 && variant != Variant::T4)
    throw Error(ErrorCode::InvalidArgument,
                "family spectra are defined for T3 and T4");
  PrecisionScope scope(ctx);
  FamilyCheck out;
  out.spec = {variant, Linearization::FullDerivative};
  out.compared = compared;
  auto basis = std::make_shared<const Discretization>(BasisSpec::cheb(n), ctx);
  for (const Real& mu : mus) {
    FamilyMember m = family_member(g, mu, allow_extrapolation);
    const NewtonResult r = evaluate_at(out.spec, basis, m.g, ctx);
    SpectrumReport rep = compute_spectrum(r, ctx.pow10(-ctx.digits() / 2), ctx);
    out.scaling.push_back(r.scaling.value);

    const ChebSeries e =
        explicit_eigenfunction(EigenfunctionKind::GMinusXDg, r.solution, 0);
    out.unit_residual.push_back(verify_explicit(r.solution, out.spec, e, Real(1)));
    // least-squares multiple of e closest to the computed eigenvector
    const ChebSeries& h = rep.eigenvalues[rep.nearest(Real(1))].eigenfunction;
    Real eh = 0, ee = 0, hmax = 0;
    for (const Real& x : basis->nodes()) {
      const Real ev = eval_series(e, x), hv = eval_series(h, x);
      eh += ev * hv;
      ee += ev * ev;
      hmax = std::max<Real>(hmax, abs(hv));
    }
    Real misfit = 0;
    for (const Real& x : basis->nodes())
      misfit = std::max<Real>(misfit, abs(eval_series(h, x) - eh / ee * eval_series(e, x)));
    out.unit_misfit.push_back(misfit / hmax);

    out.members.push_back(std::move(m));
    out.reports.push_back(std::move(rep));
  }
  for (std::size_t a = 0; a < out.reports.size(); ++a)
    for (std::size_t b = a + 1; b < out.reports.size(); ++b) {
      const auto& ea = out.reports[a].eigenvalues;
      const auto& eb = out.reports[b].eigenvalues;
      Real d = 0;
      for (std::size_t i = 0; i < compared && i < ea.size() && i < eb.size(); ++i)
        d = std::max<Real>(d, hypot(ea[i].re - eb[i].re, ea[i].im - eb[i].im));
      out.matches.push_back({a, b, d});
    }
  return out;
}

std::vector<EigenPair> constant_family_spectrum(const Real& c, Variant variant,
                                                std::size_t n,
                                                const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx);
  auto basis = std::make_shared<const Discretization>(BasisSpec::cheb(n), ctx);
  const ChebSeries g{{Real(2 * c)}};
  const NewtonResult r =
      evaluate_at({variant, Linearization::FullDerivative}, basis, g, ctx);
  RealMatrix dt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dt(i, j) = (i == j ? Real(1) : Real(0)) - r.jacobian(i, j);
  return eig_dense(dt, ctx.pow10(-ctx.digits() / 2), ctx);
}

Real extremum_order_tolerance(const PrecisionCtx& ctx) {
  return ctx.pow10(-ctx.digits() / 4);
}

void check_extremum_order(const ChebSeries& g, int k, const PrecisionCtx& ctx) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "extremum order k must be >= 1");
  const RealVector mono = series_to_monomial(g);
  const Real tol = extremum_order_tolerance(ctx) * std::max<Real>(Real(1), abs(mono[0]));
  for (int j = 1; j < 2 * k; ++j)
    if (static_cast<std::size_t>(j) < mono.size() && abs(mono[j]) > tol)
      throw Error(ErrorCode::WrongBranch,
                  "extremum order is not " + std::to_string(2 * k) +
                      ": coefficient of x^" + std::to_string(j) + " is " +
                      mono[j].str(6, std::ios_base::scientific));
  if (static_cast<std::size_t>(2 * k) >= mono.size() || abs(mono[2 * k]) <= tol)
    throw Error(ErrorCode::WrongBranch,
                "extremum order exceeds " + std::to_string(2 * k) +
                    ": coefficient of x^" + std::to_string(2 * k) + " vanishes");
}

ExtremumRun solve_extremum_order(int k, std::size_t n, NewtonConfig config,
                                 const PrecisionCtx& ctx) {
  return solve_extremum_order(k, n, std::move(config), ctx, default_seed(k));
}

ExtremumRun solve_extremum_order(int k, std::size_t n, NewtonConfig config,
                                 const PrecisionCtx& ctx,
                                 const ChebSeries& seed) {
  PrecisionScope scope(ctx);
  config.jacobian_mode = JacobianMode::Exact;
  auto basis = std::make_shared<const Discretization>(BasisSpec::cheb(n), ctx);
  ExtremumRun run;
  run.k = k;
  run.result = newton_solve({Variant::T, Linearization::FullDerivative}, basis,
                            seed, config, ctx);
  check_extremum_order(run.result.solution, k, ctx);
  run.report = compute_spectrum(run.result, ctx.pow10(-ctx.digits() / 2), ctx);
  return run;
}

}  // namespace feigen
