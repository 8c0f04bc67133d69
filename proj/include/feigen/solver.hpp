#pragma once

// Newton iteration on Phi(g) = g - T(g) over a chosen basis.

#include <memory>
#include <optional>
#include <vector>

#include "feigen/bases.hpp"
#include "feigen/operators.hpp"

namespace feigen {

enum class JacobianMode { FiniteDifference, Exact };

/// Pins the Taylor coefficient of x^power (power 0 is g(0)).
struct Pin {
  int power = 0;
  Real value;
};

struct NewtonConfig {
  int max_iterations = 40;
  /// Central-difference step; defaults to 10^(-D/2).
  std::optional<Real> fd_step;
  JacobianMode jacobian_mode = JacobianMode::FiniteDifference;
  std::vector<Pin> pins;

  Real step(const PrecisionCtx& ctx) const;
  void validate(const PrecisionCtx& ctx) const;
};

struct NewtonResult {
  std::shared_ptr<const Discretization> basis;
  OperatorSpec spec;
  int digits = PrecisionCtx::kDefaultDigits;
  RealVector values;         // g at the basis nodes
  ChebSeries solution;
  RealMatrix jacobian;       // I - dT(g) in the basis, exact mode
  std::vector<Real> history; // sup-norm of each Newton update
  bool converged = false;
  Real residual_norm;
  ScalingConstant scaling;
};

/// g(x_i) - T(g)(x_i) at the n Chebyshev nodes.
GridFn residual(Variant variant, const ChebSeries& g, std::size_t n);
RealVector residual(Variant variant, const ChebSeries& g,
                    std::span<const Real> points);

/// Matrix of I - dT(g) with respect to the node values of the basis.
/// FiniteDifference: column j = (Phi(v + s e_j) - Phi(v - s e_j)) / 2s.
/// Exact: column j = e_j - dT(g)[c_j] at the nodes, c_j the j-th cardinal.
RealMatrix assemble_jacobian(const OperatorSpec& spec, const ChebSeries& g,
                             const Discretization& basis,
                             const NewtonConfig& config,
                             const PrecisionCtx& ctx);

/// Iterates g <- g - A^-1 Phi(g).  Throws SingularJacobian when the
/// Jacobian is singular relative to the discretization (an eigenvalue 1 of
/// dT, as for unpinned T3/T4), NewtonFailure when it does not converge.
NewtonResult newton_solve(const OperatorSpec& spec,
                          std::shared_ptr<const Discretization> basis,
                          const ChebSeries& seed, const NewtonConfig& config,
                          const PrecisionCtx& ctx);

/// Wraps a known g (no iteration) with its exact Jacobian.
NewtonResult evaluate_at(const OperatorSpec& spec,
                         std::shared_ptr<const Discretization> basis,
                         const ChebSeries& g, const PrecisionCtx& ctx);

class NewtonFailure : public Error {
 public:
  NewtonFailure(const std::string& message, std::vector<Real> history)
      : Error(ErrorCode::NoConvergence, message), history_(std::move(history)) {}
  const std::vector<Real>& history() const noexcept { return history_; }

 private:
  std::vector<Real> history_;
};

struct ConvergenceReport {
  std::optional<double> exponent;  // fitted order; absent for < 2 points
  std::size_t points_used = 0;
};

/// Fits log u_{k+1} = p log u_k + c over the pre-plateau updates.
ConvergenceReport convergence_diagnostics(const std::vector<Real>& history,
                                          const PrecisionCtx& ctx);

/// Default seeds: 1 - 1.5 x^2 for the quadratic extremum and
/// 1 - 1.6 x^(2k) otherwise.
ChebSeries default_seed(int extremum_order_k = 1);

/// Jacobian pivot ratio below which newton_solve checks the eigenvalues of
/// I - dT and reports SingularJacobian when the smallest is also below this
/// fraction of the largest: 10^(-D/4), far below any genuine 1 - lambda and
/// far above the discretization-level offset of an exact eigenvalue 1.
Real singular_jacobian_tolerance(const PrecisionCtx& ctx);

}  // namespace feigen
