#include "ldforge/editops.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>

#include "ldforge/errors.hpp"
#include "ldforge/rng.hpp"

namespace ldforge {

LDGraph edit_graph(const LDGraph& graph, double tau, std::uint64_t seed) {
  require_valid(graph, "edit_graph input");
  const std::size_t n = graph.nodes.size();
  if (n == 0) throw UsageError("edit_graph: empty graph");
  if (tau < 0.0 || tau > 1.0)
    throw UsageError("edit_graph: tau must be in [0, 1]");
  DetRng rng(seed);
  const auto k =
      static_cast<std::size_t>(tau * static_cast<double>(n));  // floor

  if (k > 0) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.draw(n - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> doomed(pool.begin(),
                            pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(doomed.begin(), doomed.end());

    std::set<std::tuple<int, int, std::string>> live;
    for (const auto& e : graph.edges) live.insert({e.src, e.dst, e.type});
    for (int x : doomed) {
      std::vector<int> preds;
      std::vector<std::pair<int, std::string>> succs;
      for (const auto& [s, d, t] : live) {
        if (d == x) preds.push_back(s);
        if (s == x) succs.emplace_back(d, t);
      }
      std::sort(preds.begin(), preds.end());
      preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
      for (int w : preds)
        for (const auto& [y, t] : succs)
          if (w != y) live.insert({w, y, t});
      for (auto it = live.begin(); it != live.end();) {
        if (std::get<0>(*it) == x || std::get<1>(*it) == x)
          it = live.erase(it);
        else
          ++it;
      }
    }

    std::vector<LDNode> nodes;
    nodes.reserve(n - k);
    std::size_t next_dead = 0;
    for (const auto& nd : graph.nodes) {
      if (next_dead < doomed.size() && nd.id == doomed[next_dead]) {
        ++next_dead;
        continue;
      }
      nodes.push_back(nd);
    }
    std::vector<LDEdge> edges;
    edges.reserve(live.size());
    for (const auto& [s, d, t] : live) edges.push_back({s, d, t});
    LDGraph out = canonicalize(std::move(nodes), std::move(edges));
    require_valid(out, "edit_graph output");
    return out;
  }

  std::vector<LDNode> nodes = graph.nodes;
  std::vector<LDEdge> edges = graph.edges;
  if (!graph.edges.empty()) {
    const LDEdge& e =
        graph.edges[static_cast<std::size_t>(rng.draw(graph.edges.size()))];
    const LDNode& v = graph.nodes[static_cast<std::size_t>(e.dst)];
    nodes.push_back(
        make_node(static_cast<int>(n), v.type, v.name, v.params));
    int u = static_cast<int>(rng.draw(n));
    edges.push_back({u, static_cast<int>(n), e.type});
  } else {
    const LDNode& v = graph.nodes[static_cast<std::size_t>(rng.draw(n))];
    nodes.push_back(
        make_node(static_cast<int>(n), v.type, v.name, v.params));
    int u = static_cast<int>(rng.draw(n));
    edges.push_back({u, static_cast<int>(n), "Flow"});
  }
  LDGraph out = canonicalize(std::move(nodes), std::move(edges));
  require_valid(out, "edit_graph output");
  return out;
}

std::vector<NegativeCandidate> generate_negatives(const LDGraph& graph,
                                                  const EditConfig& config) {
  if (config.num_seeds == 0)
    throw UsageError("generate_negatives: num_seeds must be positive");
  std::vector<NegativeCandidate> out;
  out.reserve(config.num_seeds);
  for (std::size_t i = 0; i < config.num_seeds; ++i) {
    std::uint64_t sv = config.base_seed + i;
    NegativeCandidate c;
    c.graph = edit_graph(graph, config.tau, sv);
    c.seed_index = i;
    c.seed_value = sv;
    out.push_back(std::move(c));
  }
  return out;
}

PreferencePair select_hard_negative(const LDGraph& gt,
                                    std::vector<NegativeCandidate>& candidates,
                                    double tau, const GedOptions& opts) {
  if (candidates.empty())
    throw UsageError("select_hard_negative: empty candidate list");
  const std::size_t npos = candidates.size();
  std::size_t best = npos;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    NegativeCandidate& c = candidates[i];
    GedResult r = ged(gt, c.graph, opts);
    c.ged_to_gt = r.cost;
    c.ged_exact = r.exact;
    if (graph_equal(gt, c.graph)) continue;  // unusable as a negative
    if (best == npos ||
        std::tie(c.ged_to_gt, c.seed_index) <
            std::tie(candidates[best].ged_to_gt, candidates[best].seed_index))
      best = i;
  }
  if (best == npos)
    throw DegeneratePairError(
        "select_hard_negative: every candidate equals the ground truth");
  PreferencePair pair;
  pair.chosen = gt;
  pair.rejected = candidates[best].graph;
  pair.tau = tau;
  pair.seed_index = candidates[best].seed_index;
  pair.seed_value = candidates[best].seed_value;
  pair.ged = candidates[best].ged_to_gt;
  pair.ged_exact = candidates[best].ged_exact;
  return pair;
}

}  // namespace ldforge
