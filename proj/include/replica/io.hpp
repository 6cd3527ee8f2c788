#pragma once

#include <string>

#include <json.hpp>

#include "replica/linalg.hpp"

namespace replica {

// Matrices are nested arrays of rows; an entry is [re, im] or a bare real.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json operator_to_json(const DenseOperator& a);
// Accepts {"dims": [...], "matrix": [...]} or a bare matrix (one register).
DenseOperator operator_from_json(const nlohmann::json& j);
DenseOperator load_operator(const std::string& path);

}  // namespace replica
