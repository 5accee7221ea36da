#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldforge {

// Catalog of ladder elements that become graph nodes. Line elements
// (HorzLine, MultiHorzLine, VertLine) exist only in the XML layer and
// never appear here.
enum class ElementType : std::uint8_t {
  NormallyOpen,
  NormallyClosed,
  RisingEdgeContact,
  FallingEdgeContact,
  RisingEdgeNotContact,
  FallingEdgeNotContact,
  StandardCoil,
  NegatedCoil,
  SetCoil,
  ResetCoil,
  RisingEdgeCoil,
  FallingEdgeCoil,
  Inverter,
  FunctionBlock,
  Variable,
  RisingEdge,
  FallingEdge,
};

inline constexpr int kElementTypeCount = 17;

std::string_view to_string(ElementType t);
// Returns nullopt for names outside the catalog (including line names).
std::optional<ElementType> element_type_from(std::string_view name);

bool is_contact(ElementType t);
bool is_coil(ElementType t);

struct LDNode {
  int id = 0;
  ElementType type = ElementType::NormallyOpen;
  std::string name;  // may be empty
  // Element-specific parameters; keys unique, kept in lexicographic order.
  std::vector<std::pair<std::string, std::string>> params;
};

// edge_type is "Flow" or one of the function-block port types
// "Enable" | "Output" | "Input<n>" with n >= 1.
struct LDEdge {
  int src = 0;
  int dst = 0;
  std::string type = "Flow";
};

// A directed acyclic multigraph-free graph of ladder elements. Node ids
// are dense 0..n-1; each weakly-connected component (rung) occupies a
// contiguous id range and rung_starts holds each component's first id.
struct LDGraph {
  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;  // kept sorted by (src, dst, type)
  std::vector<int> rung_starts;
};

// Sorts params by key; throws ValidationError on duplicate keys.
LDNode make_node(int id, ElementType type, std::string name,
                 std::vector<std::pair<std::string, std::string>> params = {});

bool edge_type_well_formed(std::string_view type);

// "ElementType|name|k1=v1|k2=v2|..." with params in lexicographic key order.
std::string canonical_node_string(const LDNode& n);
// "canon(src)->canon(dst)@edge_type".
std::string canonical_edge_string(const LDGraph& g, const LDEdge& e);

// Sorted multisets of canonical strings; the identity used by metrics
// and graph_equal, invariant under id relabeling.
std::vector<std::string> node_multiset(const LDGraph& g);
std::vector<std::string> edge_multiset(const LDGraph& g);

bool graph_equal(const LDGraph& a, const LDGraph& b);

// |V| + |E|.
int complexity(const LDGraph& g);

struct Violation {
  std::string code;  // stable identifier, e.g. "edge.dangling"
  std::string message;
};

// All invariant violations; empty result means the graph is valid.
std::vector<Violation> validate(const LDGraph& g);
// Throws ValidationError listing every violation.
void require_valid(const LDGraph& g, const std::string& context = "");

// Builds a graph from arbitrary-id nodes/edges: orders weak components
// by minimum original id, keeps relative node order inside a component,
// relabels to dense ids, sorts edges, computes rung_starts. Throws
// WiringError on dangling/duplicate references. Does NOT check
// acyclicity; callers wanting a fully valid graph follow with
// require_valid.
LDGraph canonicalize(std::vector<LDNode> nodes, std::vector<LDEdge> edges);

// True iff every edge points from a lower to a higher id (sufficient for
// acyclicity given canonical ids) -- used by validate via a real
// topological check, exposed for tests.
bool is_acyclic(const LDGraph& g);

}  // namespace ldforge
