#include "doctest.h"

#include <random>

#include "support.hpp"

using namespace feigen;
using feigen::test::ctx64;

namespace {

RationalMatrix hilbert(std::size_t n) {
  RationalMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = Rational(1, long(i + j + 1));
  return h;
}

Integer binom(long n, long k) {
  Integer r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Closed-form inverse of the Hilbert matrix (1-based indices).
RationalMatrix hilbert_inverse(std::size_t n) {
  RationalMatrix h(n, n);
  const long N = long(n);
  for (long i = 1; i <= N; ++i)
    for (long j = 1; j <= N; ++j) {
      Integer v = (i + j - 1) * binom(N + i - 1, N - j) * binom(N + j - 1, N - i);
      const Integer c = binom(i + j - 2, i - 1);
      v *= c * c;
      if ((i + j) % 2) v = -v;
      h(i - 1, j - 1) = Rational(v);
    }
  return h;
}

RealMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(-9, 9);
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Real(d(rng)) / 7;
  return m;
}

}  // namespace

TEST_CASE("precision context") {
  const PrecisionCtx ctx(64);
  CHECK(ctx.digits() == 64);
  CHECK(ctx.working_bits() == 213 + PrecisionCtx::kGuardBits);
  PrecisionScope scope(ctx);
  const Real third = Real(1) / 3;
  CHECK(abs(ctx.parse(ctx.format(third)) - third) < ctx.pow10(-63));
  CHECK(ctx.format(Real(1)).rfind("1.", 0) == 0);
  CHECK(ctx.pow10(-10) == Real("1e-10"));
}

TEST_CASE("precision scope restores the previous default") {
  const unsigned before = Real::default_precision();
  {
    PrecisionScope scope(PrecisionCtx(100));
    CHECK(Real::default_precision() > before);
  }
  CHECK(Real::default_precision() == before);
}

TEST_CASE("solve_linear small cases") {
  PrecisionScope scope(ctx64());
  const RealVector b{1, 2, 3};
  const RealVector x = solve_linear(RealMatrix::identity(3), b, ctx64());
  CHECK(x == b);

  RealMatrix d(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 4;
  const RealVector y = solve_linear(d, RealVector{2, 4}, ctx64());
  CHECK(y[0] == 1);
  CHECK(y[1] == 1);

  RealMatrix s(2, 2);
  s(0, 0) = 1; s(0, 1) = 2;
  s(1, 0) = 2; s(1, 1) = 4;
  try {
    solve_linear(s, RealVector{1, 1}, ctx64());
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("solve_linear multiply-back and exact oracle") {
  PrecisionScope scope(ctx64());
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const std::size_t n = 6 + seed;
    const RealMatrix a = random_matrix(n, seed);
    RealVector b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = Real(int(i) - 3) / 5;
    const RealVector x = solve_linear(a, b, ctx64());
    const RealVector ax = multiply(a, x);
    Real dev = 0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max<Real>(dev, abs(ax[i] - b[i]));
    CHECK(dev <= ctx64().pow10(-64 + 8) * norm_inf(b));

    // exact rational solve of the same integer system
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(-9, 9);
    RationalMatrix qa(n, n), qb(n, 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) qa(i, j) = Rational(d(rng), 7);
    for (std::size_t i = 0; i < n; ++i) qb(i, 0) = Rational(int(i) - 3, 5);
    const RationalMatrix qx = solve_linear_exact(qa, qb);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(abs(x[i] - Real(qx(i, 0))) <= ctx64().pow10(-50) * (1 + abs(x[i])));
  }
}

TEST_CASE("solve_linear_exact") {
  RationalMatrix a(2, 2);
  a(0, 0) = 1; a(0, 1) = 1;
  a(1, 0) = 1; a(1, 1) = -1;
  const RationalMatrix x = solve_linear_exact(a, RationalMatrix::identity(2));
  CHECK(x(0, 0) == Rational(1, 2));
  CHECK(x(0, 1) == Rational(1, 2));
  CHECK(x(1, 0) == Rational(1, 2));
  CHECK(x(1, 1) == Rational(-1, 2));

  SUBCASE("Hilbert inverse against the closed form") {
    for (std::size_t n : {3u, 6u, 10u}) {
      const RationalMatrix inv = solve_linear_exact(hilbert(n), RationalMatrix::identity(n));
      CHECK(inv == hilbert_inverse(n));
    }
  }

  SUBCASE("Vandermonde in even powers at i/15") {
    RationalMatrix v(15, 15);
    for (int i = 1; i <= 15; ++i) {
      const Rational x(i, 15);
      Rational p = x * x;
      for (int j = 0; j < 15; ++j) {
        v(i - 1, j) = p;
        p *= x * x;
      }
    }
    const RationalMatrix inv = solve_linear_exact(v, RationalMatrix::identity(15));
    CHECK(multiply(v, inv) == RationalMatrix::identity(15));
  }

  RationalMatrix zero(1, 1);
  try {
    solve_linear_exact(zero, RationalMatrix::identity(1));
    FAIL("expected ExactlySingular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExactlySingular);
  }
}

TEST_CASE("eig_dense small matrices") {
  PrecisionScope scope(ctx64());
  const Real tol = ctx64().pow10(-40);

  RealMatrix d(3, 3);
  d(0, 0) = 3;
  d(1, 1) = -2;
  d(2, 2) = Real(1) / 2;
  const auto e = eig_dense(d, tol, ctx64());
  REQUIRE(e.size() == 3);
  CHECK(abs(e[0].re - 3) < tol);
  CHECK(abs(e[1].re + 2) < tol);
  CHECK(abs(e[2].re - Real(1) / 2) < tol);
  for (std::size_t k = 0; k < 3; ++k) {
    const Real scale = norm_inf(e[k].vec_re);
    for (std::size_t i = 0; i < 3; ++i)
      if (i != k) CHECK(abs(e[k].vec_re[i]) / scale < tol);
  }

  RealMatrix r(2, 2);
  r(0, 1) = 1;
  r(1, 0) = -1;
  const auto rot = eig_dense(r, tol, ctx64());
  REQUIRE(rot.size() == 2);
  CHECK(abs(rot[0].re) < tol);
  CHECK(abs(rot[0].im - 1) < tol);
  CHECK(abs(rot[1].im + 1) < tol);
}

TEST_CASE("eig_dense companion matrix of known roots") {
  PrecisionScope scope(ctx64());
  // (x - 4)(x + 3)(x - 2)(x - 1/2)(x^2 + 2x + 5): roots 4, -3, -1 +- 2i, 2, 1/2
  const std::vector<Real> roots_re{4, -3, -1, -1, 2, Real(1) / 2};
  RealVector poly{1};
  auto mul = [&](RealVector q) {
    RealVector out(poly.size() + q.size() - 1, Real(0));
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += poly[i] * q[j];
    poly = out;
  };
  mul({-4, 1});
  mul({3, 1});
  mul({-2, 1});
  mul({Real(-1) / 2, 1});
  mul({5, 2, 1});
  const std::size_t n = poly.size() - 1;
  RealMatrix c(n, n);
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -poly[i];
  const auto e = eig_dense(c, ctx64().pow10(-30), ctx64());
  REQUIRE(e.size() == n);
  for (std::size_t i = 1; i < n; ++i) CHECK(e[i - 1].modulus() >= e[i].modulus());
  CHECK(abs(e[0].re - 4) < ctx64().pow10(-40));
  CHECK(abs(e[1].re + 3) < ctx64().pow10(-40));
  CHECK(abs(e[2].re + 1) < ctx64().pow10(-40));
  CHECK(abs(e[2].im - 2) < ctx64().pow10(-40));
  CHECK(abs(e[3].im + 2) < ctx64().pow10(-40));
  CHECK(abs(e[4].re - 2) < ctx64().pow10(-40));
  CHECK(abs(e[5].re - Real(1) / 2) < ctx64().pow10(-40));

  const auto hqr = eigenvalues_hqr(c, ctx64());
  CHECK(hqr.size() == n);
}

TEST_CASE("eig_dense residual bound and precision independence") {
  const RealMatrix m64 = [] {
    PrecisionScope scope(ctx64());
    return random_matrix(8, 11);
  }();
  std::vector<EigenPair> e32, e64;
  {
    const PrecisionCtx c32(32);
    PrecisionScope scope(c32);
    RealMatrix m(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) m(i, j) = Real(m64(i, j));
    e32 = eig_dense(m, c32.pow10(-20), c32);
  }
  {
    PrecisionScope scope(ctx64());
    e64 = eig_dense(m64, ctx64().pow10(-40), ctx64());
    for (const auto& p : e64) CHECK(p.residual <= ctx64().pow10(-40));
    REQUIRE(e32.size() == e64.size());
    for (std::size_t i = 0; i < e64.size(); ++i) {
      CHECK(abs(Real(e32[i].re) - e64[i].re) < Real("1e-30"));
      CHECK(abs(Real(e32[i].im) - e64[i].im) < Real("1e-30"));
    }
  }
}

TEST_CASE("pivot indicator") {
  PrecisionScope scope(ctx64());
  RealMatrix s(2, 2);
  s(0, 0) = 1; s(0, 1) = 2;
  s(1, 0) = 2; s(1, 1) = 4;
  CHECK(min_relative_pivot(s) < ctx64().pow10(-60));
  CHECK(min_relative_pivot(RealMatrix::identity(4)) == 1);
}
