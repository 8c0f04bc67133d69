#include "doctest.h"

#include "support.hpp"

using namespace feigen;
using feigen::test::ctx64;
using feigen::test::quadratic;
using feigen::test::quadratic_spectrum;

namespace {

const char* kTable[] = {"6.264547831",  "4.669201609",  "-2.502907875", "-0.399535280",
                        "0.159628440",  "-0.123652712", "-0.063777193", "-0.057307021",
                        "0.025481238",  "-0.010180653", "-0.010145805"};

SpectrumReport spectrum_of(const OperatorSpec& spec, std::size_t n = 32, std::vector<Pin> pins = {}) {
  const NewtonResult r = test::solve_exact(spec, n, std::move(pins));
  PrecisionScope scope(ctx64());
  return compute_spectrum(r, ctx64().pow10(-32), ctx64());
}

const SpectrumReport& frozen() {
  static const SpectrumReport rep = spectrum_of({Variant::T, Linearization::FrozenAlpha});
  return rep;
}

Real h_at_zero_ratio(const SpectralEntry& e) {
  const RealVector x = cheb_nodes(64);
  Real peak = 0;
  for (const Real& t : x) peak = std::max<Real>(peak, abs(eval_series(e.eigenfunction, t)));
  return abs(eval_series(e.eigenfunction, Real(0))) / peak;
}

}  // namespace

TEST_CASE("first eleven eigenvalues of the full derivative") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& rep = quadratic_spectrum();
  REQUIRE(rep.eigenvalues.size() == 32);
  for (std::size_t i = 0; i < 11; ++i) {
    CAPTURE(i + 1);
    CHECK(abs(rep.eigenvalues[i].re - Real(kTable[i])) <= Real("1e-8"));
    CHECK(rep.eigenvalues[i].im == 0);
  }
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i)
    CHECK(rep.eigenvalues[i - 1].modulus >= rep.eigenvalues[i].modulus);
}

TEST_CASE("alpha-power identities") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& rep = quadratic_spectrum();
  const Real a = rep.alpha;
  const auto& e = rep.eigenvalues;
  CHECK(abs(e[0].re - a * a) <= Real("1e-18") * a * a);
  CHECK(abs(e[3].re - 1 / a) <= Real("1e-18"));
  CHECK(abs(e[4].re - 1 / (a * a)) <= Real("1e-15"));
  CHECK(abs(e[6].re - 1 / (a * a * a)) <= Real("1e-15"));
}

TEST_CASE("tags, parities and delta") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& rep = quadratic_spectrum();
  const int expected_k[] = {-1, 99, 0, 2, 3, 99, 4, 99, 5, 6, 99};
  for (std::size_t i = 0; i < 11; ++i) {
    CAPTURE(i + 1);
    const auto& c = rep.eigenvalues[i].cls;
    if (expected_k[i] == 99) {
      CHECK(c.tag != Tag::AlphaPower);
      CHECK(rep.eigenvalues[i].parity == Parity::Even);
    } else {
      CHECK(c.tag == Tag::AlphaPower);
      CHECK(c.k == expected_k[i]);
      REQUIRE(c.match_error);
      CHECK(*c.match_error <= Real("1e-6") * abs(pow(rep.base, 1 - c.k)));
    }
  }
  CHECK(rep.eigenvalues[1].cls.tag == Tag::Delta);
  CHECK(rep.eigenvalues[5].cls.tag == Tag::Unexplained);
  std::size_t deltas = 0;
  for (const auto& e : rep.eigenvalues) deltas += e.cls.tag == Tag::Delta;
  CHECK(deltas == 1);
  REQUIRE(rep.delta);
  CHECK(abs(*rep.delta - Real("4.669201609")) < Real("1e-9"));

  CHECK(rep.eigenvalues[2].parity == Parity::Mixed);
  CHECK(eigenfunction_parity(ChebSeries{{Real(2)}}) == Parity::Even);
  CHECK(eigenfunction_parity(monomial_series(3)) == Parity::Odd);
}

TEST_CASE("classify_spectrum examples") {
  PrecisionScope scope(ctx64());
  const Real alpha("-2.502907875");
  const std::vector<std::pair<Real, Real>> eigs{
      {Real("6.264547831"), Real(0)}, {Real("4.669201609"), Real(0)}, {Real("-0.123652712"), Real(0)}};
  const auto c = classify_spectrum(eigs, alpha, {Parity::Even, Parity::Even, Parity::Even});
  CHECK(c[0].tag == Tag::AlphaPower);
  CHECK(c[0].k == -1);
  CHECK(c[1].tag == Tag::Delta);
  CHECK(c[2].tag == Tag::Unexplained);

  // a mixed-parity eigenvalue is never delta
  const auto m = classify_spectrum({eigs[1]}, alpha, {Parity::Mixed});
  CHECK(m[0].tag == Tag::Unexplained);

  try {
    classify_spectrum({{Real(1), Real(0)}}, Real(1), {Parity::Even});
    FAIL("expected AmbiguousMatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmbiguousMatch);
  }
  CHECK_THROWS_AS(classify_spectrum(eigs, alpha, {Parity::Even}), Error);
}

TEST_CASE("explicit eigenfunction verification") {
  PrecisionScope scope(ctx64());
  const ChebSeries& g = quadratic().solution;
  const Real a = quadratic().scaling.value;
  const OperatorSpec full{Variant::T, Linearization::FullDerivative};
  const OperatorSpec froz{Variant::T, Linearization::FrozenAlpha};
  const auto [h2, l2] = explicit_pair(full, g, -1);
  CHECK(abs(l2 - a * a) < ctx64().pow10(-60));
  CHECK(verify_explicit(g, full, h2, a * a) <= Real("1e-15"));
  CHECK(verify_explicit(g, froz, explicit_eigenfunction(EigenfunctionKind::FrozenPower, g, 3), pow(a, -2)) <=
        Real("1e-15"));
  CHECK(verify_explicit(g, {Variant::T4, Linearization::FullDerivative}, h2, Real(1)) <= Real("1e-15"));
  for (int k : {0, 2, 3, 4, 5}) {
    CAPTURE(k);
    CHECK(verify_explicit(g, full, k) <= Real("1e-15"));
    CHECK(verify_explicit(g, froz, k) <= Real("1e-15"));
  }
  // sign-flipped operators keep the odd-k forms with base -alpha
  CHECK(verify_explicit(g, {Variant::T2, Linearization::FullDerivative}, 3) <= Real("1e-15"));
  CHECK(verify_explicit(g, {Variant::T3, Linearization::FrozenAlpha}, 3) <= Real("1e-15"));
  for (int k : {0, 2, 4}) {
    try {
      verify_explicit(g, {Variant::T2, Linearization::FullDerivative}, k);
      FAIL("expected NoExplicitForm");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoExplicitForm);
    }
  }
  CHECK_THROWS_AS(explicit_pair(full, g, 1), Error);
  CHECK_THROWS_AS(explicit_pair(froz, g, -1), Error);
}

TEST_CASE("eigenpair residuals and the h(0) dichotomy") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& rep = quadratic_spectrum();
  for (const auto& e : rep.eigenvalues) CHECK(e.residual <= Real("1e-20"));
  const Real a2 = rep.alpha * rep.alpha;
  const std::size_t leading = 2 * rep.n / 3;
  for (std::size_t i = 0; i < leading; ++i) {
    const auto& e = rep.eigenvalues[i];
    CAPTURE(i + 1);
    if (hypot(e.re - a2, e.im) > Real("1e-6"))
      CHECK(h_at_zero_ratio(e) <= Real("1e-10"));
    else
      CHECK(h_at_zero_ratio(e) > Real("0.1"));
  }
}

TEST_CASE("frozen scaling spectrum") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& s = frozen();
  const Real a = s.alpha;
  const Real expected[] = {Real("4.669201609"), a, Real(1), 1 / a, 1 / (a * a)};
  for (std::size_t i = 0; i < 5; ++i) {
    CAPTURE(i + 1);
    CHECK(abs(s.eigenvalues[i].re - expected[i]) <= Real("1e-8"));
  }
  CHECK(abs(s.eigenvalues[5].re - Real(kTable[5])) <= Real("1e-8"));
  CHECK(test::min_distance(s, Real(1)) <= Real("1e-12"));
  CHECK(test::min_distance(s, a * a) > Real("1e-3"));
}

TEST_CASE("T4 and T3 spectra are the frozen spectrum, T2 flips alpha") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& s = frozen();
  const SpectrumReport t4 = spectrum_of({Variant::T4, Linearization::FullDerivative}, 32, {{0, Real(1)}});
  const SpectrumReport t3 = spectrum_of({Variant::T3, Linearization::FullDerivative}, 32, {{0, Real(1)}});
  const SpectrumReport t2 = spectrum_of({Variant::T2, Linearization::FullDerivative});
  const Real a = s.alpha;

  for (std::size_t i = 0; i < 8; ++i) {
    CAPTURE(i + 1);
    CHECK(abs(t4.eigenvalues[i].re - s.eigenvalues[i].re) <= Real("1e-8"));
    const auto& c = s.eigenvalues[i].cls;
    const Real flipped = c.tag == Tag::AlphaPower ? pow(-a, 1 - c.k) : s.eigenvalues[i].re;
    CHECK(abs(t3.eigenvalues[i].re - flipped) <= Real("1e-8"));
  }
  CHECK(test::min_distance(t4, Real(1)) <= Real("1e-12"));
  for (const SpectrumReport* r : {&s, &t4, &t3}) CHECK(test::min_distance(*r, a * a) > Real("1e-3"));

  const Real flipped_s[] = {a * a, Real(kTable[1]), -a, -1 / a, 1 / (a * a), Real(kTable[5])};
  for (std::size_t i = 0; i < 6; ++i) {
    CAPTURE(i + 1);
    CHECK(abs(t2.eigenvalues[i].re - flipped_s[i]) <= Real("1e-8"));
  }
}

TEST_CASE("non-alpha eigenvalues persist under refinement") {
  PrecisionScope scope(ctx64());
  const SpectrumReport& ref = quadratic_spectrum();
  for (std::size_t n : {24u, 40u}) {
    const SpectrumReport rep = spectrum_of({Variant::T, Linearization::FullDerivative}, n);
    for (std::size_t i : {5u, 7u, 10u}) {
      CAPTURE(n);
      CAPTURE(i + 1);
      CHECK(abs(rep.eigenvalues[i].re - ref.eigenvalues[i].re) <= Real("1e-6"));
      CHECK(rep.eigenvalues[i].parity == Parity::Even);
    }
  }
}
