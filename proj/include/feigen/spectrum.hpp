#pragma once

// Spectrum of dT(g) at a fixed point, tagged against powers of alpha.

#include <optional>
#include <string_view>
#include <vector>

#include "feigen/solver.hpp"

namespace feigen {

enum class Tag { AlphaPower, Delta, Unexplained };
enum class Parity { Even, Odd, Mixed };

std::string_view to_string(Tag t);
std::string_view to_string(Parity p);

struct Classification {
  Tag tag = Tag::Unexplained;
  int k = 0;                       // meaningful for AlphaPower
  std::optional<Real> match_error; // |lambda - b^(1-k)|
};

struct SpectralEntry {
  Real re;
  Real im;
  Real modulus;
  Real residual;
  Classification cls;
  Parity parity = Parity::Mixed;
  ChebSeries eigenfunction;  // real part, scaled so its largest node value is 1
};

struct SpectrumReport {
  OperatorSpec spec;
  BasisSpec basis;
  std::shared_ptr<const Discretization> discretization;
  int digits = PrecisionCtx::kDefaultDigits;
  std::size_t n = 0;
  Real alpha;                  // 1/g(1) convention
  Real base;                   // b with alpha-power eigenvalues b^(1-k)
  std::optional<Real> delta;
  std::vector<SpectralEntry> eigenvalues;

  /// Index of the eigenvalue nearest to z (real), or npos when empty.
  std::size_t nearest(const Real& z) const;
};

inline constexpr int kMinAlphaPower = -3;
inline constexpr int kMaxAlphaPower = 12;

/// Eigen-decomposition of dT = I - A from a converged result; eigenvectors
/// are mapped back to functions through the basis cardinals.
SpectrumReport compute_spectrum(const NewtonResult& result, const Real& tol,
                                const PrecisionCtx& ctx);

/// Tags each eigenvalue as alpha_power(k) when |lambda - b^(1-k)| <=
/// tol_rel |b^(1-k)| for one k in [-3, 12]; the largest untagged eigenvalue
/// of even parity becomes delta.  Throws AmbiguousMatch when two k match.
std::vector<Classification> classify_spectrum(
    const std::vector<std::pair<Real, Real>>& eigs, const Real& base,
    const std::vector<Parity>& parities, double tol_rel = 1e-6);

/// Parity of h sampled at x = -1 + 2i/32, i = 0..32, with relative
/// tolerance 1e-8.
Parity eigenfunction_parity(const ChebSeries& h);

/// Node-value eigenvector to a function through the basis cardinals.
ChebSeries eigenvector_function(const Discretization& basis,
                                std::span<const Real> v);

/// The explicit eigenfunction for (spec, k) and its eigenvalue.  k = -1
/// selects g - x g' (alpha^2 for T/T2, 1 for T3/T4 under the full
/// derivative).  Throws NoExplicitForm when none is known.
std::pair<ChebSeries, Real> explicit_pair(const OperatorSpec& spec,
                                          const ChebSeries& g, int k);

/// ||dT h - lambda h||_inf / ||h||_inf at the Chebyshev nodes of g's length.
Real verify_explicit(const ChebSeries& g, const OperatorSpec& spec,
                     const ChebSeries& h, const Real& lambda);

/// Convenience: explicit_pair followed by verify_explicit.
Real verify_explicit(const ChebSeries& g, const OperatorSpec& spec, int k);

}  // namespace feigen
