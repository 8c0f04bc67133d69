#include "doctest.h"

#include <random>

#include "feigen/basis_spectrum.hpp"
#include "support.hpp"

using namespace feigen;
using feigen::test::ctx64;
using feigen::test::quadratic;
using feigen::test::quadratic_spectrum;

namespace {

const Real kAlpha("-2.502907875");

NewtonConfig exact_config() {
  NewtonConfig cfg;
  cfg.jacobian_mode = JacobianMode::Exact;
  return cfg;
}

const BasisRun& lanford_run() {
  static const BasisRun r = spectrum_in_basis({Variant::T, Linearization::FullDerivative},
                                              BasisSpec::lanford(15), exact_config(), ctx64());
  return r;
}

}  // namespace

TEST_CASE("basis names") {
  for (BasisKind k : {BasisKind::ChebGrid, BasisKind::MonomialFull, BasisKind::EvenMonomial,
                      BasisKind::Lanford, BasisKind::RationalNodeMonomial})
    CHECK(parse_basis_kind(to_string(k)) == k);
}

TEST_CASE("rational node approximants") {
  PrecisionScope scope(ctx64());
  const Real pi = acos(Real(-1));
  CHECK(rational_approximant(pi, 1000) == Rational(355, 113));
  CHECK(rational_approximant(-pi, 10) == Rational(-22, 7));
  CHECK(rational_approximant(Real("0.5"), 1000) == Rational(1, 2));
  const BasisBuild b = build_basis(BasisSpec::monomial(31), ctx64());
  REQUIRE(b.matrix);
  for (const Rational& q : b.matrix->nodes) {
    CHECK(boost::multiprecision::denominator(q) <= 1000);
    CHECK(abs(q) < 1);
  }
}

TEST_CASE("exact interpolation matrices invert their Vandermonde matrices") {
  PrecisionScope scope(ctx64());
  for (const BasisSpec& spec :
       {BasisSpec::lanford(15), BasisSpec::even(15), BasisSpec::monomial(31),
        BasisSpec::monomial(31, {{0, Rational(1)}}), BasisSpec::monomial(32, {{1, Rational(0)}}),
        BasisSpec::monomial(32, {{0, Rational(1)}, {1, Rational(0)}})}) {
    CAPTURE(to_string(spec.kind));
    const BasisBuild b = build_basis(spec, ctx64());
    REQUIRE(b.matrix);
    REQUIRE(b.matrix->exact);
    const std::size_t n = b.matrix->powers.size();
    CHECK(multiply(b.matrix->inverse, b.matrix->vandermonde()) == RationalMatrix::identity(n));
  }
  const BasisBuild lan = build_basis(BasisSpec::lanford(15), ctx64());
  CHECK(lan.matrix->inverse.rows() == 15);
  for (int i = 1; i <= 15; ++i) CHECK(lan.matrix->nodes[i - 1] == Rational(i, 15));
}

TEST_CASE("constraints reduce the dimension") {
  PrecisionScope scope(ctx64());
  const BasisBuild b = build_basis(BasisSpec::monomial(32, {{0, Rational(1)}, {1, Rational(0)}}), ctx64());
  CHECK(b.matrix->powers.size() == 30);
  CHECK(b.nodes.size() == 30);
}

TEST_CASE("even basis with m = 2 recovers x^4 exactly") {
  PrecisionScope scope(ctx64());
  const BasisBuild b = build_basis(BasisSpec::even(2), ctx64());
  REQUIRE(b.matrix);
  REQUIRE(b.matrix->nodes.size() == 3);
  CHECK(b.matrix->nodes[0] == 0);
  CHECK(b.matrix->nodes[1] == Rational(1, 2));
  CHECK(b.matrix->nodes[2] == 1);
  RationalMatrix v(3, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    const Rational x = b.matrix->nodes[i];
    v(i, 0) = x * x * x * x;
  }
  const RationalMatrix c = multiply(b.matrix->inverse, v);
  CHECK(c(0, 0) == 0);
  CHECK(c(1, 0) == 0);
  CHECK(c(2, 0) == 1);
}

TEST_CASE("coefficients of simple node data") {
  PrecisionScope scope(ctx64());
  const BasisBuild m = build_basis(BasisSpec::monomial(9), ctx64());
  const RealVector cm = coeffs_from_values(*m.matrix, RealVector(m.nodes.size(), Real(1)));
  for (std::size_t j = 0; j < cm.size(); ++j)
    CHECK(abs(cm[j] - (m.matrix->powers[j] == 0 ? 1 : 0)) < ctx64().pow10(-60));

  const BasisBuild l = build_basis(BasisSpec::lanford(6), ctx64());
  const RealVector cl = coeffs_from_values(*l.matrix, RealVector(l.nodes.size(), Real(1)));
  for (const Real& c : cl) CHECK(abs(c) < ctx64().pow10(-60));
}

TEST_CASE("polynomial round trip through each basis") {
  PrecisionScope scope(ctx64());
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  for (const BasisSpec& spec : {BasisSpec::even(8), BasisSpec::lanford(8), BasisSpec::monomial(13)}) {
    const Discretization basis(spec, ctx64());
    RealVector mono(spec.kind == BasisKind::MonomialFull ? 13 : 17, Real(0));
    for (std::size_t j = 0; j < mono.size(); ++j)
      if (spec.kind == BasisKind::MonomialFull || j % 2 == 0) mono[j] = Real(d(rng));
    if (spec.kind == BasisKind::Lanford) mono[0] = 1;
    const ChebSeries p = monomial_to_series(mono);
    const ChebSeries back = basis.to_series(basis.values_of(p));
    for (const char* t : {"-1", "-0.3", "0.2", "0.7"})
      CHECK(abs(eval_series(back, Real(t)) - eval_series(p, Real(t))) <= ctx64().pow10(-64 + 8));
    const auto [fixed, w] = basis.taylor_functional(2);
    Real a2 = fixed;
    const RealVector v = basis.values_of(p);
    for (std::size_t j = 0; j < v.size(); ++j) a2 += w[j] * v[j];
    CHECK(abs(a2 - mono[2]) <= ctx64().pow10(-64 + 8));
  }
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(BasisSpec::lanford(15).validate());
  BasisSpec odd = BasisSpec::even(6);
  odd.constraints = {{3, Rational(0)}};
  CHECK_THROWS_AS(odd.validate(), Error);
  CHECK_THROWS_AS(BasisSpec::cheb(1).validate(), Error);
  CHECK_THROWS_AS(BasisSpec::monomial(31, {{1, Rational(0)}}).validate(), Error);
  BasisSpec cheb = BasisSpec::cheb(8);
  cheb.constraints = {{0, Rational(1)}};
  CHECK_THROWS_AS(cheb.validate(), Error);
  CHECK_THROWS_AS(BasisSpec::monomial(4, {{7, Rational(1)}}).validate(), Error);
}

TEST_CASE("Lanford basis: Taylor coefficient and agreement with the grid solution") {
  PrecisionScope scope(ctx64());
  const BasisRun& run = lanford_run();
  const RealVector a = coeffs_from_values(*run.result.basis->matrix(), run.result.values);
  CHECK(abs(a[0] + Real("1.5276")) < Real("0.01"));
  const RealVector grid = series_to_monomial(quadratic().solution);
  CHECK(abs(a[0] - grid[2]) < Real("1e-15"));
  Real d = 0;
  for (int i = 0; i <= 200; ++i) {
    const Real x = Real(-1) + Real(i) / 100;
    d = std::max<Real>(d, abs(eval_series(run.result.solution, x) - eval_series(quadratic().solution, x)));
  }
  CHECK(d <= Real("1e-15"));
}

TEST_CASE("Lanford spectrum") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& rep = lanford_run().report;
  REQUIRE(rep.delta);
  CHECK(abs(rep.eigenvalues[0].re - Real("4.669201609")) < Real("1e-9"));
  CHECK(rep.eigenvalues[0].cls.tag == Tag::Delta);
  for (const Real& gone : {Real(kAlpha * kAlpha), kAlpha, Real(1 / kAlpha)})
    CHECK(test::min_distance(rep, gone) > Real("1e-3"));

  // every leading eigenvalue reappears in the full run with an even eigenfunction;
  // from the 7th on the m = 15 spectrum moves with m
  const SpectrumReport& full = quadratic_spectrum();
  for (std::size_t i = 0; i < 6; ++i) {
    CAPTURE(i);
    const std::size_t j = full.nearest(rep.eigenvalues[i].re);
    CHECK(abs(full.eigenvalues[j].re - rep.eigenvalues[i].re) < Real("1e-8"));
    CHECK(full.eigenvalues[j].parity == Parity::Even);
  }
}

TEST_CASE("larger Lanford bases keep delta") {
  PrecisionScope scope(ctx64());
  for (std::size_t m : {16u, 20u}) {
    CAPTURE(m);
    const BasisRun run = spectrum_in_basis({Variant::T, Linearization::FullDerivative}, BasisSpec::lanford(m),
                                           exact_config(), ctx64());
    REQUIRE(run.report.delta);
    CHECK(abs(*run.report.delta - *quadratic_spectrum().delta) <= Real("1e-15"));
  }
}

TEST_CASE("even basis restores alpha squared") {
  PrecisionScope scope(ctx64());
  const BasisRun run = spectrum_in_basis({Variant::T, Linearization::FullDerivative}, BasisSpec::even(15),
                                         exact_config(), ctx64());
  CHECK(test::min_distance(run.report, Real(kAlpha * kAlpha)) < Real("1e-6"));
  CHECK(test::min_distance(run.report, kAlpha) > Real("1e-3"));
}

TEST_CASE("monomial constraints remove single eigenvalues") {
  PrecisionScope scope(ctx64());
  const OperatorSpec t{Variant::T, Linearization::FullDerivative};
  const BasisRun free31 = spectrum_in_basis(t, BasisSpec::monomial(31), exact_config(), ctx64());
  const BasisRun a0 = spectrum_in_basis(t, BasisSpec::monomial(31, {{0, Rational(1)}}), exact_config(), ctx64());
  const BasisRun a1 = spectrum_in_basis(t, BasisSpec::monomial(32, {{1, Rational(0)}}), exact_config(), ctx64());
  const BasisRun both = spectrum_in_basis(t, BasisSpec::monomial(32, {{0, Rational(1)}, {1, Rational(0)}}),
                                          exact_config(), ctx64());
  const Real alpha = free31.report.alpha;
  CHECK(test::min_distance(free31.report, alpha * alpha) < Real("1e-8"));
  CHECK(test::min_distance(free31.report, alpha) < Real("1e-8"));

  CHECK(test::min_distance(a0.report, alpha * alpha) > Real("1e-3"));
  CHECK(test::min_distance(a0.report, alpha) < Real("1e-8"));

  CHECK(test::min_distance(a1.report, alpha) > Real("1e-3"));
  CHECK(test::min_distance(a1.report, alpha * alpha) < Real("1e-8"));

  REQUIRE(both.report.eigenvalues.size() > 1);
  CHECK(both.report.eigenvalues[0].cls.tag == Tag::Delta);
  CHECK(abs(both.report.eigenvalues[0].re - Real("4.669201609")) < Real("1e-9"));

  // pinning a0 only drops alpha^2: the rest of the leading spectrum survives
  for (std::size_t i = 0; i < 12; ++i) {
    CAPTURE(i);
    CHECK(test::min_distance(free31.report, a0.report.eigenvalues[i].re) < Real("1e-8"));
  }
}
