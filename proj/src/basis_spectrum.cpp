#include "feigen/basis_spectrum.hpp"

namespace feigen {

BasisRun spectrum_in_basis(const OperatorSpec& spec, const BasisSpec& basis,
                           const NewtonConfig& config, const PrecisionCtx& ctx,
                           const ChebSeries& seed) {
  PrecisionScope scope(ctx);
  auto disc = std::make_shared<const Discretization>(basis, ctx);
  BasisRun run;
  run.result = newton_solve(spec, disc, seed, config, ctx);
  run.report = compute_spectrum(run.result, ctx.pow10(-ctx.digits() / 2), ctx);
  return run;
}

}  // namespace feigen
