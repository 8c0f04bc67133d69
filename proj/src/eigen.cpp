#include <algorithm>
#include <random>

#include "feigen/numerics.hpp"

namespace feigen {

RealVector solve_linear_unchecked(const RealMatrix& a, std::span<const Real> b,
                                  const Real& pivot_floor);

namespace {

// Diagonal similarity by powers of two so that row and column norms are
// comparable; eigenvalues are unchanged.
void balance(RealMatrix& a) {
  const std::size_t n = a.rows();
  const Real radix = 2;
  const Real sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      Real r = 0, c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs(a(j, i));
        r += abs(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      Real g = r / radix;
      Real f = 1;
      const Real s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < Real(0.95) * s) {
        done = false;
        const Real ginv = 1 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= ginv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form.
void to_hessenberg(RealMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    RealVector v(len);
    Real norm2 = 0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = h(k + 1 + i, k);
      norm2 += v[i] * v[i];
    }
    if (norm2 == 0) continue;
    const Real alpha = sqrt(norm2);
    v[0] += v[0] < 0 ? -alpha : alpha;
    Real vv = 0;
    for (const auto& x : v) vv += x * x;
    if (vv == 0) continue;
    const Real beta = 2 / vv;
    for (std::size_t j = k; j < n; ++j) {
      Real s = 0;
      for (std::size_t i = 0; i < len; ++i) s += v[i] * h(k + 1 + i, j);
      s *= beta;
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      Real s = 0;
      for (std::size_t l = 0; l < len; ++l) s += h(i, k + 1 + l) * v[l];
      s *= beta;
      for (std::size_t l = 0; l < len; ++l) h(i, k + 1 + l) -= s * v[l];
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0;
  }
}

Real sign_of(const Real& magnitude, const Real& s) {
  return s >= 0 ? abs(magnitude) : -abs(magnitude);
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr
// layout, 1-based internally).  A subdiagonal entry is treated as zero when
// |h(l,l-1)| <= 10^-D (|h(l-1,l-1)| + |h(l,l)|).
std::vector<std::pair<Real, Real>> hqr(const RealMatrix& hess,
                                       const PrecisionCtx& ctx) {
  const int n = static_cast<int>(hess.rows());
  std::vector<RealVector> a(n + 1, RealVector(n + 1, Real(0)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) a[i][j] = hess(i - 1, j - 1);

  const Real deflate = ctx.pow10(-ctx.digits());
  const Real eps = boost::multiprecision::pow(Real(2), -static_cast<int>(ctx.working_bits()) + 2);
  RealVector wr(n + 1), wi(n + 1);

  Real anorm = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += abs(a[i][j]);

  const long budget = 100L * n;
  long sweeps = 0;
  int nn = n;
  Real t = 0;
  Real p, q, r, s, w, x, y, z;
  while (nn >= 1) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 2; --l) {
        s = abs(a[l - 1][l - 1]) + abs(a[l][l]);
        if (s == 0) s = anorm;
        if (abs(a[l][l - 1]) <= deflate * s) {
          a[l][l - 1] = 0;
          break;
        }
      }
      x = a[nn][nn];
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0;
      } else {
        y = a[nn - 1][nn - 1];
        w = a[nn][nn - 1] * a[nn - 1][nn];
        if (l == nn - 1) {
          p = (y - x) / 2;
          q = p * p + w;
          z = sqrt(abs(q));
          x += t;
          if (q >= 0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn] = z;
            wi[nn - 1] = -z;
          }
          nn -= 2;
        } else {
          if (++sweeps > budget)
            throw Error(ErrorCode::NoConvergence,
                        "eig_dense: QR budget exhausted at eigenvalue index " +
                            std::to_string(nn - 1));
          if (its > 0 && its % 10 == 0) {
            // exceptional shift
            t += x;
            for (int i = 1; i <= nn; ++i) a[i][i] -= x;
            s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2]);
            y = x = Real(0.75) * s;
            w = Real(-0.4375) * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = a[m][m];
            r = x - z;
            s = y - z;
            p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
            q = a[m + 1][m + 1] - z - r - s;
            r = a[m + 2][m + 1];
            s = abs(p) + abs(q) + abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const Real u = abs(a[m][m - 1]) * (abs(q) + abs(r));
            const Real v =
                abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a[i][i - 2] = 0;
            if (i != m + 2) a[i][i - 3] = 0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a[k][k - 1];
              q = a[k + 1][k - 1];
              r = 0;
              if (k != nn - 1) r = a[k + 2][k - 1];
              x = abs(p) + abs(q) + abs(r);
              if (x != 0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            s = sign_of(sqrt(p * p + q * q + r * r), p);
            if (s != 0) {
              if (k == m) {
                if (l != m) a[k][k - 1] = -a[k][k - 1];
              } else {
                a[k][k - 1] = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a[k][j] + q * a[k + 1][j];
                if (k != nn - 1) {
                  p += r * a[k + 2][j];
                  a[k + 2][j] -= p * z;
                }
                a[k + 1][j] -= p * y;
                a[k][j] -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a[i][k] + y * a[i][k + 1];
                if (k != nn - 1) {
                  p += z * a[i][k + 2];
                  a[i][k + 2] -= p * r;
                }
                a[i][k + 1] -= p * q;
                a[i][k] -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }

  std::vector<std::pair<Real, Real>> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

Real residual_of(const RealMatrix& m, const Real& m_norm, const Real& re,
                 const Real& im, const RealVector& vr, const RealVector& vi) {
  const std::size_t n = m.rows();
  RealVector mx = multiply(m, vr);
  RealVector my = multiply(m, vi);
  Real worst = 0, vnorm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Real rr = mx[i] - re * vr[i] + im * vi[i];
    Real ri = my[i] - re * vi[i] - im * vr[i];
    Real mod = sqrt(rr * rr + ri * ri);
    if (mod > worst) worst = mod;
    Real vm = sqrt(vr[i] * vr[i] + vi[i] * vi[i]);
    if (vm > vnorm) vnorm = vm;
  }
  Real denom = m_norm * vnorm;
  if (denom == 0) return worst;
  return worst / denom;
}

// Scales v so its largest-modulus component becomes exactly 1.
void normalize(RealVector& vr, RealVector& vi) {
  std::size_t best = 0;
  Real best_mod = -1;
  for (std::size_t i = 0; i < vr.size(); ++i) {
    Real mod = vr[i] * vr[i] + vi[i] * vi[i];
    if (mod > best_mod) {
      best_mod = mod;
      best = i;
    }
  }
  if (best_mod <= 0) return;
  const Real cr = vr[best], ci = vi[best];
  for (std::size_t i = 0; i < vr.size(); ++i) {
    Real nr = (vr[i] * cr + vi[i] * ci) / best_mod;
    Real ni = (vi[i] * cr - vr[i] * ci) / best_mod;
    vr[i] = nr;
    vi[i] = ni;
  }
  vr[best] = 1;
  vi[best] = 0;
}

EigenPair inverse_iteration(const RealMatrix& m, const Real& m_norm,
                            const Real& re, const Real& im, const Real& tol,
                            const PrecisionCtx& ctx, std::mt19937_64& rng) {
  const std::size_t n = m.rows();
  const Real shift = re + ctx.pow10(-ctx.digits() / 2) *
                              std::max(Real(1), sqrt(re * re + im * im));
  const Real floor = ctx.pow10(-ctx.digits() - 4) * std::max(Real(1), m_norm);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  EigenPair pair{re, im, RealVector(n, Real(0)), RealVector(n, Real(0)), Real(0)};
  const bool complex = im != 0;
  const std::size_t dim = complex ? 2 * n : n;
  RealMatrix b(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = m(i, j);
      if (complex) b(n + i, n + j) = m(i, j);
    }
  for (std::size_t i = 0; i < n; ++i) {
    b(i, i) -= shift;
    if (complex) {
      b(n + i, n + i) -= shift;
      b(i, n + i) = im;
      b(n + i, i) = -im;
    }
  }

  RealVector start(dim);
  for (auto& s : start) s = Real(dist(rng));

  constexpr int kMaxSteps = 4;
  for (int step = 0; step < kMaxSteps; ++step) {
    RealVector sol = solve_linear_unchecked(b, start, floor);
    for (std::size_t i = 0; i < n; ++i) {
      pair.vec_re[i] = sol[i];
      pair.vec_im[i] = complex ? sol[n + i] : Real(0);
    }
    normalize(pair.vec_re, pair.vec_im);
    pair.residual = residual_of(m, m_norm, re, im, pair.vec_re, pair.vec_im);
    if (pair.residual <= tol) return pair;
    for (std::size_t i = 0; i < n; ++i) {
      start[i] = pair.vec_re[i];
      if (complex) start[n + i] = pair.vec_im[i];
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "eig_dense: inverse iteration residual " +
                  pair.residual.str(4, std::ios_base::scientific) +
                  " above tolerance for eigenvalue " +
                  re.str(12, std::ios_base::scientific));
}

}  // namespace

Real EigenPair::modulus() const { return sqrt(re * re + im * im); }

std::vector<std::pair<Real, Real>> eigenvalues_hqr(const RealMatrix& m,
                                                   const PrecisionCtx& ctx) {
  if (!m.square())
    throw Error(ErrorCode::InvalidArgument, "eig_dense: matrix not square");
  PrecisionScope scope(ctx);
  RealMatrix h = m;
  balance(h);
  to_hessenberg(h);
  return hqr(h, ctx);
}

std::vector<EigenPair> eig_dense(const RealMatrix& m, const Real& tol,
                                 const PrecisionCtx& ctx) {
  if (tol <= 0) throw Error(ErrorCode::InvalidArgument, "eig_dense: tol <= 0");
  auto values = eigenvalues_hqr(m, ctx);
  PrecisionScope scope(ctx);
  const Real m_norm = norm_inf(m);
  std::mt19937_64 rng(0x5eedf00dULL);

  std::vector<EigenPair> pairs;
  pairs.reserve(values.size());
  for (const auto& [re, im] : values)
    pairs.push_back(inverse_iteration(m, m_norm, re, im, tol, ctx, rng));

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) {
                     Real ma = a.modulus(), mb = b.modulus();
                     if (ma != mb) return ma > mb;
                     if (a.re != b.re) return a.re > b.re;
                     return a.im > b.im;
                   });
  return pairs;
}

}  // namespace feigen
