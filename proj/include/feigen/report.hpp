#pragma once

// JSON/CSV serialization of runs.  Numbers are D-digit decimal strings so
// that nothing is lost to a parser's double conversion.

#include <json.hpp>
#include <string>

#include "feigen/families.hpp"

namespace feigen {

using Json = nlohmann::ordered_json;

Json basis_json(const BasisSpec& spec, const Discretization* built = nullptr);
BasisSpec basis_from_json(const Json& j);

/// {operator, linearization, basis, digits, n, alpha, delta, eigenvalues}.
Json spectrum_json(const SpectrumReport& rep, const PrecisionCtx& ctx);
std::string spectrum_csv(const SpectrumReport& rep, const PrecisionCtx& ctx);

/// Solution artifact: node values, Chebyshev and monomial coefficients,
/// alpha, Newton history and the decay diagnostics.
Json solution_json(const NewtonResult& r, const PrecisionCtx& ctx);

/// Member reports plus the pairwise match table.
Json family_json(const FamilyCheck& check, const PrecisionCtx& ctx);

}  // namespace feigen
