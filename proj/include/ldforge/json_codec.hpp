#pragma once

#include <string>

#include "ldforge/graph.hpp"

namespace ldforge {

// Graph as one JSON object per component: {"G0": {"<id>": {"attributes":
// {...}, "edges": [{"target": "<id>", "type": ".."}]}, ...}, "G1": ...}.
// Components are keyed in order of their smallest node id; node keys are
// global decimal ids in ascending order; byte output is deterministic.
std::string to_json_text(const LDGraph& g);

// Inverse up to graph_equal. Sparse or reordered ids are re-densified.
// Malformed JSON raises ParseError; unknown ElementType or a key outside
// the schema raises SchemaError; an edge target that names no node
// raises WiringError.
LDGraph parse_json_text(const std::string& text);

}  // namespace ldforge
