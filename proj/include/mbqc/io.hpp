#pragma once

#include <string>

#include <json.hpp>

#include "mbqc/qstate.hpp"

namespace mbqc {

// State files: {"n": int, "amplitudes": [[re, im], ...]}
// Graph files: {"vertices": int, "edges": [[u, v], ...]}
// Doubles are emitted with shortest round-trip formatting, so finite values
// survive a write/read cycle bit-exactly.

nlohmann::json state_to_json(const PureState& psi);
PureState state_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

nlohmann::json ensemble_to_json(const Ensemble& rho);
Ensemble ensemble_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace mbqc
