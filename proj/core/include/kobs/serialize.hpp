#pragma once

// JSON documents for operators and density matrices:
//   {"dim": N, "label": "...", "re": [row-major N*N], "im": [row-major N*N]}

#include <json.hpp>

#include "kobs/quantum.hpp"

namespace kobs {

nlohmann::json matrix_to_json(const ComplexMatrix& m, const std::string& label);
/// Returns the matrix; writes the label into `label` when non-null.
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::string* label = nullptr);

nlohmann::json to_json(const HermitianOperator& op);
nlohmann::json to_json(const DensityMatrix& rho);

HermitianOperator operator_from_json(const nlohmann::json& j);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace kobs
