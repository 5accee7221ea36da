#include "ldforge/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "ldforge/errors.hpp"

namespace ldforge {

namespace {

constexpr std::array<std::string_view, kElementTypeCount> kTypeNames = {
    "NormallyOpen",
    "NormallyClosed",
    "RisingEdgeContact",
    "FallingEdgeContact",
    "RisingEdgeNotContact",
    "FallingEdgeNotContact",
    "StandardCoil",
    "NegatedCoil",
    "SetCoil",
    "ResetCoil",
    "RisingEdgeCoil",
    "FallingEdgeCoil",
    "Inverter",
    "FunctionBlock",
    "Variable",
    "RisingEdge",
    "FallingEdge",
};

}  // namespace

std::string_view to_string(ElementType t) {
  return kTypeNames[static_cast<std::size_t>(t)];
}

std::optional<ElementType> element_type_from(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i)
    if (kTypeNames[i] == name) return static_cast<ElementType>(i);
  return std::nullopt;
}

bool is_contact(ElementType t) {
  switch (t) {
    case ElementType::NormallyOpen:
    case ElementType::NormallyClosed:
    case ElementType::RisingEdgeContact:
    case ElementType::FallingEdgeContact:
    case ElementType::RisingEdgeNotContact:
    case ElementType::FallingEdgeNotContact:
      return true;
    default:
      return false;
  }
}

bool is_coil(ElementType t) {
  switch (t) {
    case ElementType::StandardCoil:
    case ElementType::NegatedCoil:
    case ElementType::SetCoil:
    case ElementType::ResetCoil:
    case ElementType::RisingEdgeCoil:
    case ElementType::FallingEdgeCoil:
      return true;
    default:
      return false;
  }
}

LDNode make_node(int id, ElementType type, std::string name,
                 std::vector<std::pair<std::string, std::string>> params) {
  std::sort(params.begin(), params.end());
  for (std::size_t i = 1; i < params.size(); ++i)
    if (params[i - 1].first == params[i].first)
      throw ValidationError("duplicate param key '" + params[i].first +
                            "' on node " + std::to_string(id));
  return LDNode{id, type, std::move(name), std::move(params)};
}

bool edge_type_well_formed(std::string_view type) {
  if (type == "Flow" || type == "Enable" || type == "Output") return true;
  constexpr std::string_view prefix = "Input";
  if (type.size() <= prefix.size() || type.substr(0, prefix.size()) != prefix)
    return false;
  std::string_view num = type.substr(prefix.size());
  int n = 0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
  return ec == std::errc() && p == num.data() + num.size() && n >= 1 &&
         (num.size() == 1 || num.front() != '0');
}

std::string canonical_node_string(const LDNode& n) {
  std::string s(to_string(n.type));
  s += '|';
  s += n.name;
  for (const auto& [k, v] : n.params) {
    s += '|';
    s += k;
    s += '=';
    s += v;
  }
  return s;
}

std::string canonical_edge_string(const LDGraph& g, const LDEdge& e) {
  std::string s = canonical_node_string(g.nodes[static_cast<std::size_t>(e.src)]);
  s += "->";
  s += canonical_node_string(g.nodes[static_cast<std::size_t>(e.dst)]);
  s += '@';
  s += e.type;
  return s;
}

std::vector<std::string> node_multiset(const LDGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.nodes.size());
  for (const auto& n : g.nodes) out.push_back(canonical_node_string(n));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> edge_multiset(const LDGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) out.push_back(canonical_edge_string(g, e));
  std::sort(out.begin(), out.end());
  return out;
}

bool graph_equal(const LDGraph& a, const LDGraph& b) {
  return node_multiset(a) == node_multiset(b) &&
         edge_multiset(a) == edge_multiset(b);
}

int complexity(const LDGraph& g) {
  return static_cast<int>(g.nodes.size() + g.edges.size());
}

bool is_acyclic(const LDGraph& g) {
  // Kahn's algorithm; ids may be anything dense here.
  const std::size_t n = g.nodes.size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const auto& e : g.edges) {
    if (e.src < 0 || e.dst < 0 || e.src >= static_cast<int>(n) ||
        e.dst >= static_cast<int>(n))
      return false;
    succ[static_cast<std::size_t>(e.src)].push_back(e.dst);
    ++indeg[static_cast<std::size_t>(e.dst)];
  }
  std::vector<int> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
  std::size_t seen = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++seen;
    for (int w : succ[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
  }
  return seen == n;
}

std::vector<Violation> validate(const LDGraph& g) {
  std::vector<Violation> out;
  const int n = static_cast<int>(g.nodes.size());

  // Dense, ordered ids.
  for (int i = 0; i < n; ++i) {
    if (g.nodes[static_cast<std::size_t>(i)].id != i) {
      out.push_back({"node.ids", "node ids are not dense 0..n-1 in order (index " +
                                     std::to_string(i) + " holds id " +
                                     std::to_string(g.nodes[static_cast<std::size_t>(i)].id) +
                                     ")"});
      break;
    }
  }

  // Param keys sorted and unique.
  for (const auto& node : g.nodes) {
    for (std::size_t i = 1; i < node.params.size(); ++i) {
      if (!(node.params[i - 1].first < node.params[i].first)) {
        out.push_back({"node.params",
                       "params of node " + std::to_string(node.id) +
                           " are not strictly ordered by key"});
        break;
      }
    }
  }

  // Edge endpoints, types, duplicates.
  std::set<std::tuple<int, int, std::string>> seen;
  for (const auto& e : g.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      out.push_back({"edge.dangling", "edge " + std::to_string(e.src) + "->" +
                                          std::to_string(e.dst) +
                                          " references a missing node"});
      continue;
    }
    if (e.src == e.dst)
      out.push_back({"edge.selfloop",
                     "self loop on node " + std::to_string(e.src)});
    if (!edge_type_well_formed(e.type))
      out.push_back({"edge.type", "bad edge_type '" + e.type + "' on edge " +
                                      std::to_string(e.src) + "->" +
                                      std::to_string(e.dst)});
    if (!seen.emplace(e.src, e.dst, e.type).second)
      out.push_back({"edge.duplicate", "duplicate edge " + std::to_string(e.src) +
                                           "->" + std::to_string(e.dst) + "@" +
                                           e.type});
  }

  if (!is_acyclic(g)) out.push_back({"graph.cycle", "graph contains a cycle"});

  // Components contiguous, rung_starts = component minima.
  if (out.empty()) {
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges) {
      adj[static_cast<std::size_t>(e.src)].push_back(e.dst);
      adj[static_cast<std::size_t>(e.dst)].push_back(e.src);
    }
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
      if (comp[static_cast<std::size_t>(i)] != -1) continue;
      std::vector<int> stack{i};
      comp[static_cast<std::size_t>(i)] = ncomp;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
          if (comp[static_cast<std::size_t>(w)] == -1) {
            comp[static_cast<std::size_t>(w)] = ncomp;
            stack.push_back(w);
          }
      }
      ++ncomp;
    }
    bool contiguous = true;
    for (int i = 1; i < n; ++i)
      if (comp[static_cast<std::size_t>(i)] < comp[static_cast<std::size_t>(i - 1)])
        contiguous = false;
    if (!contiguous) {
      out.push_back({"rung.contiguous",
                     "weakly-connected components are not id-contiguous"});
    } else {
      std::vector<int> starts;
      for (int i = 0; i < n; ++i)
        if (i == 0 || comp[static_cast<std::size_t>(i)] !=
                          comp[static_cast<std::size_t>(i - 1)])
          starts.push_back(i);
      if (starts != g.rung_starts)
        out.push_back({"rung.starts",
                       "rung_starts disagree with component minima"});
    }
  }

  // Edges sorted (determinism invariant for emitters).
  for (std::size_t i = 1; i < g.edges.size(); ++i) {
    const auto& a = g.edges[i - 1];
    const auto& b = g.edges[i];
    if (std::tie(a.src, a.dst, a.type) > std::tie(b.src, b.dst, b.type)) {
      out.push_back({"edge.order", "edge list is not sorted by (src,dst,type)"});
      break;
    }
  }

  return out;
}

void require_valid(const LDGraph& g, const std::string& context) {
  auto v = validate(g);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid graph";
  if (!context.empty()) os << " (" << context << ")";
  os << ":";
  for (const auto& x : v) os << "\n  [" << x.code << "] " << x.message;
  throw ValidationError(os.str());
}

LDGraph canonicalize(std::vector<LDNode> nodes, std::vector<LDEdge> edges) {
  // Original-id uniqueness.
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!by_id.emplace(nodes[i].id, i).second)
      throw WiringError("duplicate node id " + std::to_string(nodes[i].id));
  for (const auto& e : edges) {
    if (!by_id.count(e.src))
      throw WiringError("edge references missing node id " +
                        std::to_string(e.src));
    if (!by_id.count(e.dst))
      throw WiringError("edge references missing node id " +
                        std::to_string(e.dst));
  }

  // Weak components over original ids (union-find).
  std::map<int, int> parent;
  for (const auto& n : nodes) parent[n.id] = n.id;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges) {
    int a = find(e.src), b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  // Component order = min original id; node order inside = original id.
  std::map<int, std::vector<int>> comps;  // root -> ids ascending
  for (const auto& n : nodes) comps[find(n.id)].push_back(n.id);
  std::map<int, int> relabel;
  int next = 0;
  std::vector<int> starts;
  for (auto& [root, ids] : comps) {
    std::sort(ids.begin(), ids.end());
    starts.push_back(next);
    for (int id : ids) relabel[id] = next++;
  }

  LDGraph g;
  g.nodes.resize(nodes.size());
  for (auto& n : nodes) {
    int nid = relabel[n.id];
    n.id = nid;
    g.nodes[static_cast<std::size_t>(nid)] = std::move(n);
  }
  g.edges.reserve(edges.size());
  for (auto& e : edges)
    g.edges.push_back({relabel[e.src], relabel[e.dst], std::move(e.type)});
  std::sort(g.edges.begin(), g.edges.end(), [](const LDEdge& a, const LDEdge& b) {
    return std::tie(a.src, a.dst, a.type) < std::tie(b.src, b.dst, b.type);
  });
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                            [](const LDEdge& a, const LDEdge& b) {
                              return a.src == b.src && a.dst == b.dst &&
                                     a.type == b.type;
                            }),
                g.edges.end());
  g.rung_starts = std::move(starts);
  return g;
}

}  // namespace ldforge
