#include "feigen/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "feigen/basis_spectrum.hpp"
#include "feigen/report.hpp"

namespace feigen {

namespace fs = std::filesystem;

namespace {

Error config_error(const std::string& message) {
  return Error(ErrorCode::InvalidArgument, message);
}

// "3/4", "-2", "0.125" -> exact rational
Rational parse_rational(const std::string& text) {
  try {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+")
      throw config_error("bad number '" + text + "'");
    Integer den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(Integer(digits), den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("bad rational '" + text + "'");
  }
}

// "a3=V" -> (3, "V"); "g0=V" -> (0, "V") when g0 is allowed
std::pair<int, std::string> parse_assignment(const std::string& text,
                                             bool allow_g0) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq < 2)
    throw config_error("expected aJ=V, got '" + text + "'");
  const std::string lhs = text.substr(0, eq);
  const std::string rhs = text.substr(eq + 1);
  if (allow_g0 && lhs == "g0") return {0, rhs};
  if (lhs[0] != 'a' || lhs.find_first_not_of("0123456789", 1) != std::string::npos)
    throw config_error("expected aJ=V, got '" + text + "'");
  return {std::stoi(lhs.substr(1)), rhs};
}

struct Setup {
  PrecisionCtx ctx;
  OperatorSpec spec;
  BasisSpec basis;
  NewtonConfig newton;
  ChebSeries seed;
  int k = 1;
};

ChebSeries load_coefficients(const std::string& path, const PrecisionCtx& ctx) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::MissingArtifact, "cannot read '" + path + "'");
  return read_coefficients(in, ctx);
}

Setup prepare(const RunConfig& cfg, std::ostream& err,
              const std::string& default_op = "T") {
  Setup s{PrecisionCtx(cfg.digits), {}, {}, {}, {}, cfg.extremum_order};
  PrecisionScope scope(s.ctx);
  s.spec.variant = parse_variant(cfg.op.value_or(default_op));
  s.spec.linearization = parse_linearization(cfg.linearization);
  if (cfg.extremum_order < 1) throw config_error("--extremum-order must be >= 1");

  s.basis.kind = parse_basis_kind(cfg.basis);
  const std::size_t n = cfg.nodes.value_or(cfg.extremum_order >= 2 ? 70 : 32);
  if (s.basis.kind == BasisKind::ChebGrid) {
    if (cfg.dim && *cfg.dim != n)
      throw config_error("--dim and --nodes disagree for the cheb basis");
    s.basis.dimension = n;
  } else if (cfg.dim) {
    s.basis.dimension = *cfg.dim;
  } else {
    const bool even = s.basis.kind == BasisKind::Lanford ||
                      s.basis.kind == BasisKind::EvenMonomial;
    s.basis.dimension = even ? 15 : n;
  }
  for (const auto& c : cfg.constrain) {
    auto [power, value] = parse_assignment(c, false);
    s.basis.constraints.push_back({power, parse_rational(value)});
  }
  s.basis.exact = !cfg.inexact;
  s.basis.validate();
  if (cfg.extremum_order >= 2 && s.basis.kind != BasisKind::ChebGrid)
    throw config_error("--extremum-order >= 2 needs the cheb basis");

  for (const auto& p : cfg.pins) {
    auto [power, value] = parse_assignment(p, true);
    try {
      s.newton.pins.push_back({power, s.ctx.parse(value)});
    } catch (const std::exception&) {
      throw config_error("bad pin value '" + value + "'");
    }
  }
  if (cfg.jacobian == "exact" || cfg.extremum_order >= 2)
    s.newton.jacobian_mode = JacobianMode::Exact;
  else if (cfg.jacobian != "fd")
    throw config_error("--jacobian must be fd or exact");
  s.newton.validate(s.ctx);

  s.seed = cfg.seed_file.empty() ? default_seed(cfg.extremum_order)
                                 : load_coefficients(cfg.seed_file, s.ctx);

  const bool family_variant =
      s.spec.variant == Variant::T3 || s.spec.variant == Variant::T4;
  const bool pinned_g0 = std::any_of(s.newton.pins.begin(), s.newton.pins.end(),
                                     [](const Pin& p) { return p.power == 0; });
  const bool fixed_a0 = std::any_of(
      s.basis.constraints.begin(), s.basis.constraints.end(),
      [](const CoefficientConstraint& c) { return c.power == 0; });
  if (family_variant && !pinned_g0 && !fixed_a0 &&
      s.basis.kind != BasisKind::Lanford && cfg.command != "family")
    err << Json{{"warning",
                 std::string(to_string(s.spec.variant)) +
                     " has a one-parameter family of fixed points; Newton will "
                     "fail without --pin g0=1"}}
               .dump()
        << '\n';
  return s;
}

NewtonResult solve(const Setup& s) {
  PrecisionScope scope(s.ctx);
  if (s.k >= 2) {
    if (s.spec.variant != Variant::T)
      throw config_error("--extremum-order >= 2 is solved with operator T");
    ExtremumRun run = solve_extremum_order(s.k, s.basis.dimension, s.newton,
                                           s.ctx, s.seed);
    run.result.spec = s.spec;
    return run.result;
  }
  auto disc = std::make_shared<const Discretization>(s.basis, s.ctx);
  return newton_solve(s.spec, disc, s.seed, s.newton, s.ctx);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw config_error("cannot write '" + cfg.out + "'");
  f << text;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw config_error("cannot write '" + path.string() + "'");
  f << text;
}

void store_solution(const RunConfig& cfg, const NewtonResult& r,
                    const PrecisionCtx& ctx) {
  if (cfg.run_dir.empty()) return;
  fs::create_directories(cfg.run_dir);
  write_file(fs::path(cfg.run_dir) / "solution.json",
             solution_json(r, ctx).dump(2) + "\n");
  std::ostringstream coeffs;
  write_coefficients(coeffs, r.solution, ctx);
  write_file(fs::path(cfg.run_dir) / "coefficients.tsv", coeffs.str());
}

Real spectrum_tol(const PrecisionCtx& ctx) {
  return ctx.pow10(-ctx.digits() / 2);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Setup s = prepare(cfg, err);
  PrecisionScope scope(s.ctx);
  const NewtonResult r = solve(s);
  store_solution(cfg, r, s.ctx);
  emit(cfg, out, solution_json(r, s.ctx).dump(2) + "\n");
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Setup s = prepare(cfg, err);
  PrecisionScope scope(s.ctx);
  if (cfg.format != "json" && cfg.format != "csv")
    throw config_error("--format must be json or csv");
  const NewtonResult r = solve(s);
  const SpectrumReport rep = compute_spectrum(r, spectrum_tol(s.ctx), s.ctx);
  store_solution(cfg, r, s.ctx);
  const std::string json = spectrum_json(rep, s.ctx).dump(2) + "\n";
  if (!cfg.run_dir.empty())
    write_file(fs::path(cfg.run_dir) / "spectrum.json", json);
  emit(cfg, out, cfg.format == "csv" ? spectrum_csv(rep, s.ctx) : json);
  return kExitOk;
}

struct Check {
  std::string name;
  std::optional<Real> value;
  Real threshold;
  bool pass = true;
  std::string note;
};

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Setup s = prepare(cfg, err);
  const PrecisionCtx& ctx = s.ctx;
  PrecisionScope scope(ctx);
  const OperatorSpec full{s.spec.variant, Linearization::FullDerivative};
  const OperatorSpec frozen{s.spec.variant, Linearization::FrozenAlpha};

  NewtonResult r;
  if (!cfg.solution.empty()) {
    const ChebSeries g = load_coefficients(cfg.solution, ctx);
    auto disc = std::make_shared<const Discretization>(BasisSpec::cheb(g.size()), ctx);
    r = evaluate_at(full, disc, g, ctx);
  } else {
    if (s.basis.kind != BasisKind::ChebGrid)
      throw config_error("verify works on the cheb basis");
    r = solve(s);
    r = evaluate_at(full, r.basis, r.solution, ctx);
  }
  const ChebSeries& g = r.solution;
  const Real tight = ctx.pow10(-15);
  std::vector<Check> checks;

  checks.push_back({"fixed_point_residual", r.residual_norm, ctx.pow10(-20), true, ""});
  {
    const Real dg1 = eval_series(series_derivative(g), Real(1));
    checks.push_back({"g'(1) = alpha", abs(dg1 - r.scaling.alpha()), ctx.pow10(-20), true, ""});
  }
  for (const auto& [spec, label] :
       {std::pair{full, std::string("full")}, std::pair{frozen, std::string("frozen")}}) {
    for (int k : {-1, 0, 2, 3, 4, 5}) {
      if (k == -1 && spec.linearization == Linearization::FrozenAlpha) continue;
      Check c;
      c.name = "explicit " + label + (k == -1 ? " g-xg'" : " k=" + std::to_string(k));
      c.threshold = tight;
      try {
        c.value = verify_explicit(g, spec, k);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoExplicitForm) throw;
        c.note = "skipped: NoExplicitForm";
      }
      checks.push_back(c);
    }
  }
  {
    const SpectrumReport rep = compute_spectrum(r, spectrum_tol(ctx), ctx);
    const Real exempt = explicit_pair(full, g, -1).second;
    const std::size_t leading = 2 * rep.eigenvalues.size() / 3;
    Real worst = 0;
    for (std::size_t i = 0; i < leading; ++i) {
      const auto& e = rep.eigenvalues[i];
      if (hypot(e.re - exempt, e.im) <= ctx.pow10(-6)) continue;
      Real hmax = 0;
      for (const Real& x : r.basis->nodes())
        hmax = std::max<Real>(hmax, abs(eval_series(e.eigenfunction, x)));
      worst = std::max<Real>(worst, abs(eval_series(e.eigenfunction, Real(0))) / hmax);
    }
    checks.push_back({"h(0) dichotomy", worst, ctx.pow10(-10), true, ""});
  }
  {
    NewtonConfig fd = s.newton;
    fd.jacobian_mode = JacobianMode::FiniteDifference;
    const RealMatrix a = assemble_jacobian(full, g, *r.basis, fd, ctx);
    Real worst = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        worst = std::max<Real>(worst, abs(a(i, j) - r.jacobian(i, j)));
    checks.push_back({"FD vs exact Jacobian", worst, 10 * fd.step(ctx), true, ""});
  }

  bool all = true;
  Json rows = Json::array();
  for (auto& c : checks) {
    c.pass = !c.value || *c.value <= c.threshold;
    all = all && c.pass;
    Json row;
    row["check"] = c.name;
    row["value"] = c.value ? Json(ctx.format(*c.value)) : Json(nullptr);
    row["threshold"] = ctx.format(c.threshold);
    row["pass"] = c.pass;
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(row);
  }
  Json j;
  j["operator"] = std::string(to_string(s.spec.variant));
  j["digits"] = ctx.digits();
  j["n"] = r.basis->dimension();
  j["checks"] = rows;
  j["pass"] = all;
  emit(cfg, out, j.dump(2) + "\n");
  if (!all) {
    Json failed = Json::array();
    for (const auto& c : checks)
      if (!c.pass) failed.push_back(c.name);
    err << Json{{"code", "VerificationFailed"},
                {"message", "checks outside their thresholds"},
                {"failed", failed},
                {"hint", "re-solve the fixed point or raise --digits/--nodes"}}
               .dump()
        << '\n';
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_plotdata(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.run_dir.empty()) throw config_error("plotdata needs --run-dir");
  const fs::path dir(cfg.run_dir);
  const fs::path sol = dir / "solution.json";
  if (!fs::exists(sol))
    throw Error(ErrorCode::MissingArtifact,
                "no solution.json in '" + cfg.run_dir + "'");
  std::ifstream in(sol);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::MissingArtifact,
                "unreadable solution.json: " + std::string(e.what()));
  }
  const PrecisionCtx ctx(j.at("digits").get<int>());
  PrecisionScope scope(ctx);
  const OperatorSpec spec{parse_variant(j.at("operator").get<std::string>()),
                          parse_linearization(j.at("linearization").get<std::string>())};
  auto disc = std::make_shared<const Discretization>(basis_from_json(j.at("basis")), ctx);
  RealVector values;
  for (const auto& v : j.at("values")) values.push_back(ctx.parse(v.get<std::string>()));
  const NewtonResult r = evaluate_at(spec, disc, disc->to_series(values), ctx);

  std::ostringstream decay;
  decay << "# k\tlog10(1/|a_k|)\n";
  const auto& cheb = j.at("chebyshev");
  for (std::size_t k = 0; k < cheb.size(); ++k) {
    const Real a = abs(ctx.parse(cheb[k].get<std::string>()));
    decay << k << '\t'
          << (a > 0 ? Real(-log10(a)).str(12) : std::string("inf")) << '\n';
  }
  write_file(dir / "decay.tsv", decay.str());

  const SpectrumReport rep = compute_spectrum(r, spectrum_tol(ctx), ctx);
  Json files = Json::array({"decay.tsv"});
  for (std::size_t i = 0; i < cfg.eigenfunctions && i < rep.eigenvalues.size(); ++i) {
    const auto& e = rep.eigenvalues[i];
    RealVector samples(201);
    Real peak = 0;
    for (int s = 0; s <= 200; ++s) {
      samples[s] = eval_series(e.eigenfunction, Real(-1) + Real(s) / 100);
      if (abs(samples[s]) > abs(peak)) peak = samples[s];
    }
    std::ostringstream f;
    f << "# x\th(x) for lambda_" << i + 1 << " = " << e.re.str(12) << '\n';
    for (int s = 0; s <= 200; ++s)
      f << Real(Real(-1) + Real(s) / 100).str(6, std::ios_base::fixed) << '\t'
        << ctx.format(samples[s] / peak)
        << '\n';
    char name[32];
    std::snprintf(name, sizeof name, "eigenfunction_%02zu.tsv", i + 1);
    write_file(dir / name, f.str());
    files.push_back(name);
  }
  emit(cfg, out, Json{{"run_dir", cfg.run_dir}, {"files", files}}.dump(2) + "\n");
  return kExitOk;
}

int cmd_family(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Setup s = prepare(cfg, err, "T4");
  PrecisionScope scope(s.ctx);
  if (s.basis.kind != BasisKind::ChebGrid)
    throw config_error("family works on the cheb basis");
  if (s.spec.linearization != Linearization::FullDerivative)
    throw config_error("family spectra use the full derivative");
  std::vector<Real> mus;
  for (const auto& m : cfg.mu) {
    try {
      mus.push_back(s.ctx.parse(m));
    } catch (const std::exception&) {
      throw config_error("bad --mu value '" + m + "'");
    }
  }
  if (mus.empty()) mus = {Real(1), Real(12) / 10, Real(15) / 10};

  Setup base = s;
  base.spec = {Variant::T, Linearization::FullDerivative};
  base.newton.pins.clear();
  const NewtonResult r = solve(base);
  const FamilyCheck check = family_spectrum_check(
      r.solution, mus, s.spec.variant, s.basis.dimension, s.ctx, 8, cfg.extrapolate);

  Json j = family_json(check, s.ctx);
  Json residuals = Json::array();
  for (const auto& m : check.members)
    residuals.push_back(s.ctx.format(family_residual(m.g, r.scaling.alpha())));
  j["family_residuals"] = residuals;
  const auto constant =
      constant_family_spectrum(Real(1), s.spec.variant, s.basis.dimension, s.ctx);
  Json cj = Json::array();
  Real constant_dev = 0;
  for (std::size_t i = 0; i < constant.size(); ++i) {
    const Real expect = i == 0 ? 1 : 0;
    constant_dev = std::max<Real>(constant_dev, hypot(constant[i].re - expect, constant[i].im));
    if (i < 4) cj.push_back(s.ctx.format(constant[i].re));
  }
  j["constant_family"] = {{"leading", cj}, {"deviation", s.ctx.format(constant_dev)}};

  bool pass = check.worst_match() <= s.ctx.pow10(-8) && constant_dev <= s.ctx.pow10(-10);
  for (const auto& u : check.unit_residual) pass = pass && u <= s.ctx.pow10(-12);
  for (const auto& u : check.unit_misfit) pass = pass && u <= s.ctx.pow10(-12);
  j["pass"] = pass;
  emit(cfg, out, j.dump(2) + "\n");
  if (!pass) {
    err << Json{{"code", "VerificationFailed"},
                {"message", "family spectra or eigenfunctions disagree"},
                {"hint", "members far from mu = 1 need more --nodes"}}
               .dump()
        << '\n';
    return kExitVerification;
  }
  return kExitOk;
}

std::string hint_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularJacobian:
      return "use --pin g0=1 (T3/T4 fix points form a family)";
    case ErrorCode::NoConvergence:
      return "try another seed (--seed-file) or --jacobian exact";
    case ErrorCode::WrongBranch:
      return "the seed converged to another extremum order; adjust --seed-file";
    case ErrorCode::ExactlySingular:
      return "the nodes cannot separate the chosen powers; change --dim or "
             "--constrain";
    case ErrorCode::MissingArtifact:
      return "run solve or spectrum with --run-dir first";
    case ErrorCode::AmbiguousMatch:
      return "alpha is too close to +-1 for power classification";
    case ErrorCode::DivideByZero:
      return "the seed has g(1) = 0 or g(g(0)) = 0";
    default:
      return "see --help";
  }
}

int exit_for(const Error& e, bool newton) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidIndex:
    case ErrorCode::MissingArtifact:
      return kExitConfig;
    case ErrorCode::NoConvergence:
      return newton ? kExitSolver : kExitEigensolver;
    case ErrorCode::AmbiguousMatch:
      return kExitEigensolver;
    case ErrorCode::NoExplicitForm:
      return kExitVerification;
    default:
      return kExitSolver;
  }
}

void report_error(std::ostream& err, const std::string& code,
                  const std::string& message, const std::string& hint) {
  err << Json{{"code", code}, {"message", message}, {"hint", hint}}.dump() << '\n';
}

}  // namespace

int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "solve") return cmd_solve(cfg, out, err);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "plotdata") return cmd_plotdata(cfg, out, err);
    if (cfg.command == "family") return cmd_family(cfg, out, err);
    throw config_error("unknown command '" + cfg.command + "'");
  } catch (const NewtonFailure& e) {
    report_error(err, std::string(to_string(e.code())), e.what(),
                 hint_for(e.code()));
    return kExitSolver;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what(),
                 hint_for(e.code()));
    return exit_for(e, false);
  } catch (const Json::exception& e) {
    report_error(err, "MissingArtifact", e.what(), hint_for(ErrorCode::MissingArtifact));
    return kExitConfig;
  } catch (const std::exception& e) {
    report_error(err, "InvalidArgument", e.what(), "see --help");
    return kExitConfig;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Period-doubling fixed points and their spectra"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--digits", cfg.digits, "decimal digits D")->capture_default_str();
    sub->add_option("--nodes", cfg.nodes, "Chebyshev nodes n (32; 70 for order 4)");
    sub->add_option("--operator", cfg.op, "T, T2, T3 or T4");
    sub->add_option("--linearization", cfg.linearization, "full or frozen")
        ->capture_default_str();
    sub->add_option("--basis", cfg.basis, "cheb, monomial, even, lanford, rational")
        ->capture_default_str();
    sub->add_option("--dim", cfg.dim, "basis dimension");
    sub->add_option("--constrain", cfg.constrain, "fix a monomial coefficient, aJ=V");
    sub->add_option("--pin", cfg.pins, "pin g(0) or a Taylor coefficient, g0=V");
    sub->add_option("--extremum-order", cfg.extremum_order, "k for g - g(0) = O(x^2k)")
        ->capture_default_str();
    sub->add_option("--seed-file", cfg.seed_file, "initial Chebyshev coefficients");
    sub->add_option("--jacobian", cfg.jacobian, "fd or exact Newton Jacobian")
        ->capture_default_str();
    sub->add_flag("--inexact", cfg.inexact,
                  "monomial basis: real Chebyshev nodes, floating inverse");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--run-dir", cfg.run_dir, "directory for run artifacts");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Newton solve of g = T(g)");
  add_common(solve_cmd);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "solve and classify dT(g)");
  add_common(spectrum_cmd);
  spectrum_cmd->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  auto* verify_cmd = app.add_subcommand("verify", "residual table at a fixed point");
  add_common(verify_cmd);
  verify_cmd->add_option("--solution", cfg.solution, "coefficient file to check");
  auto* plot_cmd = app.add_subcommand("plotdata", "decay and eigenfunction samples");
  plot_cmd->add_option("--run-dir", cfg.run_dir, "directory written by solve")
      ->required();
  plot_cmd->add_option("--eigenfunctions", cfg.eigenfunctions,
                       "number of leading eigenfunctions")
      ->capture_default_str();
  plot_cmd->add_option("--out", cfg.out, "summary file (default stdout)");
  auto* family_cmd = app.add_subcommand("family", "spectra along g_mu = mu g(x/mu)");
  add_common(family_cmd);
  family_cmd->add_option("--mu", cfg.mu, "family parameter (repeatable)");
  family_cmd->add_flag("--extrapolate", cfg.extrapolate, "allow |mu| < 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "InvalidArgument", e.what(), "see --help");
    return kExitConfig;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run_config(cfg, out, err);
}

}  // namespace feigen
