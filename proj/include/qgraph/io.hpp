#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qgraph/classical.hpp"
#include "qgraph/morita.hpp"

namespace qgraph::io {

using json = nlohmann::json;

// Complex scalars are [re, im]; matrices are arrays of rows.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, Index rows, Index cols);
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j, Index len);

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

// Subspace files store a spanning list.
json subspace_to_json(const MatSubspace& s, const std::string& kind = "subspace");
MatSubspace subspace_from_json(const json& j, Tolerance tol);
// Either a spanning list or one of "full", "diagonal", "scalar".
MatSubspace algebra_ref_from_json(const json& j, Index n, Tolerance tol);

json operator_system_to_json(const MatSubspace& s);
json quantum_graph_to_json(const QuantumGraph& g);
// Parses the pair; validation is left to the caller.
std::pair<MatSubspace, MatSubspace> quantum_graph_from_json(const json& j, Tolerance tol);
MatSubspace operator_system_from_json(const json& j, Tolerance tol);

json kraus_to_json(const KrausMap& phi);
KrausMap kraus_from_json(const json& j, Tolerance tol);

json tro_to_json(const MatSubspace& m);
MatSubspace tro_from_json(const json& j, Tolerance tol);

std::vector<CVector> vectors_from_json(const json& j, Index n);

std::string kind_of(const json& j);
json parse_text(const std::string& text);
json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

} // namespace qgraph::io
