#pragma once

#include "feigen/spectrum.hpp"

namespace feigen {

struct BasisRun {
  NewtonResult result;
  SpectrumReport report;
};

/// Newton in the given basis, exact Jacobian, eigensolve and classification.
/// The spectrum is that of dT projected onto the basis subset.
BasisRun spectrum_in_basis(const OperatorSpec& spec, const BasisSpec& basis,
                           const NewtonConfig& config, const PrecisionCtx& ctx,
                           const ChebSeries& seed = default_seed(1));

}  // namespace feigen
