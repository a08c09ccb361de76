#pragma once

#include <string>

#include <json.hpp>

#include "pauliforge/channels.hpp"
#include "pauliforge/circuits.hpp"
#include "pauliforge/onepr.hpp"
#include "pauliforge/pauli_algebra.hpp"

namespace pauliforge {

// JSON schemas used by the CLI and on-disk artifacts:
//   probability vector  bare array, or {"n_qubits": N, "k": [...]}
//   density matrix      {"re": [[...]], "im": [[...]]}
//   circuit             {"n_qubits", "ancilla_range": [first,last),
//                        "gates": [{"kind","angle","targets","controls"}]}
//   state curve         {"dim", "samples": [{"p","re":[...],"im":[...]}]}
//   decomposition       {"dim", "a": {...}, "b": {...}, "c": {...},
//                        "s_samples": [[p,s], ...]}

nlohmann::json to_json(const PauliProbVector& k);
PauliProbVector prob_vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Gate& g);
Gate gate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StateCurve& curve);
StateCurve state_curve_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OneprDecomposition& d);
OneprDecomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);
void save_text_file(const std::string& path, const std::string& text);
std::string load_text_file(const std::string& path);

}  // namespace pauliforge
