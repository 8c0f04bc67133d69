#pragma once

// The scaling family g_mu(x) = mu g(x/mu), the constant family, and fixed
// points whose extremum has order 2k.

#include <vector>

#include "feigen/spectrum.hpp"

namespace feigen {

struct FamilyMember {
  Real mu;
  ChebSeries g;
  bool extrapolated = false;  // |mu| < 1: g is evaluated outside [-1, 1]
};

/// mu g(x/mu) by rescaling monomial coefficients a_j -> a_j mu^(1-j).
/// |mu| < 1 needs allow_extrapolation; mu = 0 is rejected.
FamilyMember family_member(const ChebSeries& g, const Real& mu,
                           bool allow_extrapolation = false);

/// sup |g(x) - beta g(g(x/beta))| over 201 equispaced points of [-1, 1].
Real family_residual(const ChebSeries& g, const Real& beta);

struct FamilyMatch {
  std::size_t a = 0, b = 0;  // member indices
  Real max_difference;       // over the compared leading eigenvalues
};

struct FamilyCheck {
  OperatorSpec spec;
  std::vector<FamilyMember> members;
  std::vector<SpectrumReport> reports;
  std::vector<Real> scaling;        // a at each member
  std::vector<FamilyMatch> matches; // every pair of members
  std::size_t compared = 8;
  /// Eigenvalue-1 eigenfunction against g_mu - x g_mu': the residual of
  /// the explicit form and the misfit of the computed eigenvector.
  std::vector<Real> unit_residual;
  std::vector<Real> unit_misfit;

  Real worst_match() const;
};

/// Full-derivative spectra of T3 or T4 at each g_mu on an n-node grid.
FamilyCheck family_spectrum_check(const ChebSeries& g,
                                  const std::vector<Real>& mus, Variant variant,
                                  std::size_t n, const PrecisionCtx& ctx,
                                  std::size_t compared = 8,
                                  bool allow_extrapolation = false);

/// Eigenvalues of dT at the constant solution y = c (sorted as eig_dense).
std::vector<EigenPair> constant_family_spectrum(const Real& c, Variant variant,
                                                std::size_t n,
                                                const PrecisionCtx& ctx);

/// Taylor coefficients of x^1..x^(2k-1) must be below this (relative to
/// g(0)) and that of x^(2k) above it: 10^(-D/4).
Real extremum_order_tolerance(const PrecisionCtx& ctx);

/// Throws WrongBranch unless g - g(0) = O(x^(2k)) with a nonzero x^(2k) term.
void check_extremum_order(const ChebSeries& g, int k, const PrecisionCtx& ctx);

struct ExtremumRun {
  int k = 1;
  NewtonResult result;
  SpectrumReport report;
};

/// Solves g = T(g) on an n-node grid from the order-2k seed with the exact
/// Jacobian, checks the branch and classifies against alpha_k.
ExtremumRun solve_extremum_order(int k, std::size_t n, NewtonConfig config,
                                 const PrecisionCtx& ctx);
ExtremumRun solve_extremum_order(int k, std::size_t n, NewtonConfig config,
                                 const PrecisionCtx& ctx,
                                 const ChebSeries& seed);

}  // namespace feigen
