#pragma once

#include <string>

#include "ldforge/graph.hpp"

namespace ldforge {

// Graph as a sequence of constructor calls:
//   G.add_node(0, ElementType="NormallyOpen", Name="X0", kind="TON")
//   G.add_edge(0, 1, type="Flow")
// Emission is a depth-first walk seeded at each component's smallest id
// (and at any node a previous walk missed, in ascending order). On the
// first visit of a node its add_node line is emitted, then one add_edge
// per outgoing edge in (target, type) order, recursing into unvisited
// targets. Deterministic bytes for a given graph.
std::string to_metaprogram(const LDGraph& g);

// Inverse up to graph_equal; statement order does not matter. A line
// outside the grammar raises ParseError with its line number; an edge
// naming an undeclared node raises WiringError; a duplicate add_node id
// or unknown ElementType raises SchemaError.
LDGraph parse_metaprogram(const std::string& text);

}  // namespace ldforge
