#include "feigen/report.hpp"

#include <sstream>

namespace feigen {

namespace {

std::string rational_string(const Rational& q) { return q.str(); }

Json real_array(const RealVector& v, const PrecisionCtx& ctx) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(ctx.format(x));
  return a;
}

}  // namespace

Json basis_json(const BasisSpec& spec, const Discretization* built) {
  Json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["dimension"] = spec.dimension;
  Json cons = Json::array();
  for (const auto& c : spec.constraints)
    cons.push_back({{"power", c.power}, {"value", rational_string(c.value)}});
  j["constraints"] = cons;
  j["exact"] = spec.exact;
  if (spec.kind == BasisKind::MonomialFull)
    j["denominator_cap"] = spec.denominator_cap;
  Json nodes = Json::array();
  if (built && built->matrix() && built->matrix()->exact) {
    for (const auto& q : built->matrix()->nodes) nodes.push_back(rational_string(q));
  } else {
    for (const auto& q : spec.nodes) nodes.push_back(rational_string(q));
  }
  j["nodes"] = nodes;
  return j;
}

BasisSpec basis_from_json(const Json& j) {
  BasisSpec s;
  s.kind = parse_basis_kind(j.at("kind").get<std::string>());
  s.dimension = j.at("dimension").get<std::size_t>();
  for (const auto& c : j.at("constraints"))
    s.constraints.push_back(
        {c.at("power").get<int>(), Rational(c.at("value").get<std::string>())});
  s.exact = j.value("exact", true);
  s.denominator_cap = j.value("denominator_cap", 1000L);
  if (s.kind == BasisKind::RationalNodeMonomial)
    for (const auto& q : j.at("nodes")) s.nodes.emplace_back(q.get<std::string>());
  return s;
}

Json spectrum_json(const SpectrumReport& rep, const PrecisionCtx& ctx) {
  Json j;
  j["operator"] = std::string(to_string(rep.spec.variant));
  j["linearization"] = std::string(to_string(rep.spec.linearization));
  j["basis"] = basis_json(rep.basis, rep.discretization.get());
  j["digits"] = rep.digits;
  j["n"] = rep.n;
  j["alpha"] = ctx.format(rep.alpha);
  j["delta"] = rep.delta ? Json(ctx.format(*rep.delta)) : Json(nullptr);
  Json eigs = Json::array();
  for (const auto& e : rep.eigenvalues) {
    Json row;
    row["re"] = ctx.format(e.re);
    row["im"] = ctx.format(e.im);
    row["modulus"] = ctx.format(e.modulus);
    row["residual"] = ctx.format(e.residual);
    row["tag"] = std::string(to_string(e.cls.tag));
    row["k"] = e.cls.tag == Tag::AlphaPower ? Json(e.cls.k) : Json(nullptr);
    row["parity"] = std::string(to_string(e.parity));
    row["match_error"] =
        e.cls.match_error ? Json(ctx.format(*e.cls.match_error)) : Json(nullptr);
    eigs.push_back(row);
  }
  j["eigenvalues"] = eigs;
  return j;
}

std::string spectrum_csv(const SpectrumReport& rep, const PrecisionCtx& ctx) {
  std::ostringstream out;
  out << "index,re,im,modulus,residual,tag,k,parity,match_error\n";
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    const auto& e = rep.eigenvalues[i];
    out << i + 1 << ',' << ctx.format(e.re) << ',' << ctx.format(e.im) << ','
        << ctx.format(e.modulus) << ',' << ctx.format(e.residual) << ','
        << to_string(e.cls.tag) << ',';
    if (e.cls.tag == Tag::AlphaPower) out << e.cls.k;
    out << ',' << to_string(e.parity) << ',';
    if (e.cls.match_error) out << ctx.format(*e.cls.match_error);
    out << '\n';
  }
  return out.str();
}

Json solution_json(const NewtonResult& r, const PrecisionCtx& ctx) {
  Json j;
  j["operator"] = std::string(to_string(r.spec.variant));
  j["linearization"] = std::string(to_string(r.spec.linearization));
  j["basis"] = basis_json(r.basis->spec(), r.basis.get());
  j["digits"] = r.digits;
  j["n"] = r.basis->dimension();
  j["scaling"] = ctx.format(r.scaling.value);
  j["alpha"] = ctx.format(r.scaling.alpha());
  j["residual_norm"] = ctx.format(r.residual_norm);
  j["history"] = real_array(r.history, ctx);
  const ConvergenceReport conv = convergence_diagnostics(r.history, ctx);
  j["convergence_exponent"] =
      conv.exponent ? Json(*conv.exponent) : Json(nullptr);
  j["values"] = real_array(r.values, ctx);
  j["chebyshev"] = real_array(r.solution.coeffs, ctx);
  j["monomial"] = real_array(series_to_monomial(r.solution), ctx);
  if (r.solution.size() >= 8) {
    const DecayReport d = decay_report(r.solution, ctx);
    Json dj;
    dj["log_inverse_magnitudes"] = real_array(d.log_inverse_magnitudes, ctx);
    dj["slope"] = d.slope;
    dj["tail"] = ctx.format(d.tail);
    dj["healthy"] = d.healthy;
    j["decay"] = dj;
  }
  return j;
}

Json family_json(const FamilyCheck& check, const PrecisionCtx& ctx) {
  Json j;
  j["operator"] = std::string(to_string(check.spec.variant));
  j["compared"] = check.compared;
  Json members = Json::array();
  for (std::size_t i = 0; i < check.members.size(); ++i) {
    Json m;
    m["mu"] = ctx.format(check.members[i].mu);
    m["extrapolated"] = check.members[i].extrapolated;
    m["scaling"] = ctx.format(check.scaling[i]);
    m["unit_residual"] = ctx.format(check.unit_residual[i]);
    m["unit_misfit"] = ctx.format(check.unit_misfit[i]);
    m["spectrum"] = spectrum_json(check.reports[i], ctx);
    members.push_back(m);
  }
  j["members"] = members;
  Json matches = Json::array();
  for (const auto& m : check.matches)
    matches.push_back({{"mu_a", ctx.format(check.members[m.a].mu)},
                       {"mu_b", ctx.format(check.members[m.b].mu)},
                       {"max_difference", ctx.format(m.max_difference)}});
  j["matches"] = matches;
  return j;
}

}  // namespace feigen
