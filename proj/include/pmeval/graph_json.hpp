#pragma once

#include <string>

#include <json.hpp>

#include "pmeval/graph.hpp"

namespace pmeval {

// Canonical JSON form: nodes sorted by id, edges sorted by
// (source, target, condition). Two graphs that differ only in declaration
// order serialize identically.
nlohmann::ordered_json graph_to_json(const ProcessGraph& g);
std::string graph_to_canonical_json(const ProcessGraph& g);

// Throws std::invalid_argument on schema violations.
ProcessGraph graph_from_json(const nlohmann::json& j);

}  // namespace pmeval
