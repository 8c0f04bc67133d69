#include "feigen/solver.hpp"

#include <cmath>
#include <set>

namespace feigen {

Real NewtonConfig::step(const PrecisionCtx& ctx) const {
  return fd_step ? *fd_step : ctx.pow10(-ctx.digits() / 2);
}

void NewtonConfig::validate(const PrecisionCtx& ctx) const {
  if (max_iterations < 1)
    throw Error(ErrorCode::InvalidArgument, "max_iterations must be positive");
  const Real s = step(ctx);
  if (!(s > ctx.pow10(-ctx.digits()) && s < ctx.pow10(-4)))
    throw Error(ErrorCode::InvalidArgument,
                "finite-difference step must lie in (10^-D, 10^-4)");
  std::set<int> powers;
  for (const auto& p : pins)
    if (p.power < 0 || !powers.insert(p.power).second)
      throw Error(ErrorCode::InvalidArgument, "invalid or duplicate pin");
}

Real singular_jacobian_tolerance(const PrecisionCtx& ctx) {
  return ctx.pow10(-ctx.digits() / 4);
}

ChebSeries default_seed(int extremum_order_k) {
  if (extremum_order_k < 1)
    throw Error(ErrorCode::InvalidArgument, "extremum order k must be >= 1");
  const int degree = 2 * extremum_order_k;
  RealVector mono(degree + 1, Real(0));
  mono[0] = 1;
  mono[degree] = extremum_order_k == 1 ? Real(-1.5) : Real(-1.6);
  return monomial_to_series(mono);
}

RealVector residual(Variant variant, const ChebSeries& g,
                    std::span<const Real> points) {
  RealVector t = apply(variant, g, points);
  for (std::size_t i = 0; i < points.size(); ++i)
    t[i] = eval_series(g, points[i]) - t[i];
  return t;
}

GridFn residual(Variant variant, const ChebSeries& g, std::size_t n) {
  return GridFn{residual(variant, g, cheb_nodes(n))};
}

namespace {

// Phi on node values: v - T(g_v)(x).
RealVector phi(Variant variant, const Discretization& basis,
               std::span<const Real> values) {
  const ChebSeries g = basis.to_series(values);
  RealVector t = apply(variant, g, basis.nodes());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = values[i] - t[i];
  return t;
}

RealMatrix exact_jacobian(const OperatorSpec& spec, const ChebSeries& g,
                          const Discretization& basis) {
  const std::size_t n = basis.dimension();
  const LinearizedOperator dt(spec, g, basis.nodes());
  RealMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RealVector col = dt(basis.cardinal(j));
    for (std::size_t i = 0; i < n; ++i) a(i, j) = -col[i];
    a(j, j) += 1;
  }
  return a;
}

RealMatrix fd_jacobian(Variant variant, const Discretization& basis,
                       std::span<const Real> values, const Real& step) {
  const std::size_t n = basis.dimension();
  RealMatrix a(n, n);
  RealVector shifted(values.begin(), values.end());
  for (std::size_t j = 0; j < n; ++j) {
    shifted[j] = values[j] + step;
    const RealVector up = phi(variant, basis, shifted);
    shifted[j] = values[j] - step;
    const RealVector down = phi(variant, basis, shifted);
    shifted[j] = values[j];
    for (std::size_t i = 0; i < n; ++i) a(i, j) = (up[i] - down[i]) / (2 * step);
  }
  return a;
}

struct PinRow {
  std::size_t row;
  Real fixed;
  RealVector weights;
  Real value;
};

std::vector<PinRow> pin_rows(const Discretization& basis,
                             const std::vector<Pin>& pins) {
  std::vector<PinRow> rows;
  std::set<std::size_t> used;
  for (const auto& pin : pins) {
    auto [fixed, w] = basis.taylor_functional(pin.power);
    // the equation dropped is the one whose node carries most weight
    std::size_t best = basis.dimension();
    Real best_w = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (used.count(i)) continue;
      if (abs(w[i]) > best_w) {
        best_w = abs(w[i]);
        best = i;
      }
    }
    if (best == basis.dimension() || best_w == 0)
      throw Error(ErrorCode::InvalidArgument,
                  "pin on x^" + std::to_string(pin.power) +
                      " is not controlled by this basis");
    used.insert(best);
    rows.push_back({best, fixed, std::move(w), pin.value});
  }
  return rows;
}

Real scale_of(std::span<const Real> values) {
  Real s = norm_inf(values);
  return s > 1 ? s : Real(1);
}

}  // namespace

RealMatrix assemble_jacobian(const OperatorSpec& spec, const ChebSeries& g,
                             const Discretization& basis,
                             const NewtonConfig& config,
                             const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx);
  if (config.jacobian_mode == JacobianMode::Exact)
    return exact_jacobian(spec, g, basis);
  if (spec.linearization == Linearization::FrozenAlpha)
    throw Error(ErrorCode::InvalidArgument,
                "finite differences only produce the full derivative");
  const RealVector v = basis.values_of(g);
  return fd_jacobian(spec.variant, basis, v, config.step(ctx));
}

NewtonResult evaluate_at(const OperatorSpec& spec,
                         std::shared_ptr<const Discretization> basis,
                         const ChebSeries& g, const PrecisionCtx& ctx) {
  PrecisionScope scope(ctx);
  NewtonResult r;
  r.spec = spec;
  r.digits = ctx.digits();
  r.values = basis->values_of(g);
  r.solution = basis->to_series(r.values);
  r.jacobian = exact_jacobian(spec, r.solution, *basis);
  r.residual_norm = norm_inf(phi(spec.variant, *basis, r.values));
  r.converged = true;
  r.scaling = scaling_of(spec.variant, r.solution);
  r.basis = std::move(basis);
  return r;
}

namespace {

// The pivot ratio depends on the node parametrization (equispaced bases
// inflate ||A||); the eigenvalues of A do not.
bool spectrally_singular(const RealMatrix& a, const Real& tol,
                         const PrecisionCtx& ctx) {
  Real lo = -1, hi = 0;
  for (const auto& [re, im] : eigenvalues_hqr(a, ctx)) {
    const Real m = hypot(re, im);
    hi = std::max<Real>(hi, m);
    lo = lo < 0 ? m : std::min<Real>(lo, m);
  }
  return lo <= tol * hi;
}

}  // namespace

NewtonResult newton_solve(const OperatorSpec& spec,
                          std::shared_ptr<const Discretization> basis,
                          const ChebSeries& seed, const NewtonConfig& config,
                          const PrecisionCtx& ctx) {
  config.validate(ctx);
  PrecisionScope scope(ctx);
  const OperatorSpec full{spec.variant, Linearization::FullDerivative};
  const std::vector<PinRow> pins = pin_rows(*basis, config.pins);
  const Real stop = ctx.pow10(-ctx.digits() + 10);
  const Real plateau_zone = ctx.pow10(-ctx.digits() / 2);
  const Real singular_tol = singular_jacobian_tolerance(ctx);
  const Real step = config.step(ctx);

  RealVector v = basis->values_of(seed);
  std::vector<Real> history;
  for (int it = 0; it < config.max_iterations; ++it) {
    RealVector r = phi(spec.variant, *basis, v);
    RealMatrix a = config.jacobian_mode == JacobianMode::Exact
                       ? exact_jacobian(full, basis->to_series(v), *basis)
                       : fd_jacobian(spec.variant, *basis, v, step);
    for (const auto& p : pins) {
      Real value = p.fixed;
      for (std::size_t j = 0; j < v.size(); ++j) {
        a(p.row, j) = p.weights[j];
        value += p.weights[j] * v[j];
      }
      r[p.row] = value - p.value;
    }
    const Real pivot = min_relative_pivot(a);
    if (pivot <= singular_tol && spectrally_singular(a, singular_tol, ctx))
      throw Error(ErrorCode::SingularJacobian,
                  "Jacobian I - dT is singular (pivot ratio " +
                      pivot.str(3, std::ios_base::scientific) +
                      "): the operator has eigenvalue 1, so fixed points form "
                      "a family; pin g(0) to select one");
    RealVector dv;
    try {
      dv = solve_linear(a, r, ctx);
    } catch (const Error& e) {
      throw Error(ErrorCode::SingularJacobian, e.what());
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dv[i];
    const Real u = norm_inf(dv);
    history.push_back(u);
    if (u <= stop * scale_of(v)) break;
    if (history.size() >= 2 && u < plateau_zone &&
        u * 2 > history[history.size() - 2])
      break;
  }

  NewtonResult result;
  result.spec = spec;
  result.digits = ctx.digits();
  result.values = v;
  result.solution = basis->to_series(v);
  result.history = history;
  RealVector final_phi = phi(spec.variant, *basis, v);
  for (const auto& p : pins) final_phi[p.row] = 0;
  result.residual_norm = norm_inf(final_phi);
  result.converged =
      result.residual_norm <= ctx.pow10(-ctx.digits() + 12) * scale_of(v);
  if (!result.converged)
    throw NewtonFailure("Newton iteration did not converge: residual " +
                            result.residual_norm.str(4, std::ios_base::scientific),
                        history);
  result.jacobian = exact_jacobian(spec, result.solution, *basis);
  result.scaling = scaling_of(spec.variant, result.solution);
  result.basis = std::move(basis);
  return result;
}

ConvergenceReport convergence_diagnostics(const std::vector<Real>& history,
                                          const PrecisionCtx& ctx) {
  ConvergenceReport rep;
  // Pairs in the asymptotic regime (u_k < 1) and above the round-off floor.
  const double floor_log = -(ctx.digits() - 12);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k + 1 < history.size(); ++k) {
    if (history[k] <= 0 || history[k + 1] <= 0) continue;
    const double a = static_cast<double>(log10(history[k]));
    const double b = static_cast<double>(log10(history[k + 1]));
    if (a >= 0 || b <= floor_log) continue;
    pts.emplace_back(a, b);
  }
  rep.points_used = pts.size();
  if (pts.size() < 2) return rep;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double den = n * sxx - sx * sx;
  if (den != 0) rep.exponent = (n * sxy - sx * sy) / den;
  return rep;
}

}  // namespace feigen
