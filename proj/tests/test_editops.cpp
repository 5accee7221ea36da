#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ldforge/editops.hpp"
#include "ldforge/errors.hpp"
#include "ldforge/rng.hpp"

using namespace ldforge;

namespace {

LDGraph build(std::vector<LDNode> nodes, std::vector<LDEdge> edges) {
  return canonicalize(std::move(nodes), std::move(edges));
}

LDGraph chain(int n) {
  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  for (int i = 0; i < n; ++i) {
    ElementType t =
        i + 1 == n ? ElementType::StandardCoil : ElementType::NormallyOpen;
    nodes.push_back(make_node(i, t, "N" + std::to_string(i)));
    if (i > 0) edges.push_back({i - 1, i, "Flow"});
  }
  return build(std::move(nodes), std::move(edges));
}

bool exact_equal(const LDGraph& a, const LDGraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size() ||
      a.rung_starts != b.rung_starts)
    return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const LDNode& x = a.nodes[i];
    const LDNode& y = b.nodes[i];
    if (x.id != y.id || x.type != y.type || x.name != y.name ||
        x.params != y.params)
      return false;
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const LDEdge& x = a.edges[i];
    const LDEdge& y = b.edges[i];
    if (x.src != y.src || x.dst != y.dst || x.type != y.type) return false;
  }
  return true;
}

// First Fisher-Yates draw with k=1 picks node draw(n) directly, so scan
// for a seed whose first draw lands on the node we want deleted.
std::uint64_t seed_deleting(int n, int target) {
  for (std::uint64_t seed = 0;; ++seed) {
    DetRng rng(seed);
    if (rng.draw(static_cast<std::uint64_t>(n)) ==
        static_cast<std::uint64_t>(target))
      return seed;
  }
}

// Random DAG with unique names; always valid after canonicalize.
std::uint64_t xorshift(std::uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

LDGraph random_dag(std::uint64_t& s, int n) {
  static const ElementType types[] = {
      ElementType::NormallyOpen, ElementType::NormallyClosed,
      ElementType::StandardCoil, ElementType::Variable,
      ElementType::FunctionBlock, ElementType::Inverter};
  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  for (int i = 0; i < n; ++i)
    nodes.push_back(
        make_node(i, types[xorshift(s) % 6], "N" + std::to_string(i)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (xorshift(s) % 4 == 0) edges.push_back({i, j, "Flow"});
  return build(std::move(nodes), std::move(edges));
}

// name -> set of reachable names (including self).
std::map<std::string, std::set<std::string>> reach_by_name(const LDGraph& g) {
  int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) r[i][i] = 1;
  for (const auto& e : g.edges) r[e.src][e.dst] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  std::map<std::string, std::set<std::string>> out;
  for (int i = 0; i < n; ++i) {
    auto& dst = out[g.nodes[i].name];
    for (int j = 0; j < n; ++j)
      if (r[i][j]) dst.insert(g.nodes[j].name);
  }
  return out;
}

}  // namespace

TEST_CASE("mid-chain deletion bridges the gap") {
  LDGraph g = chain(12);
  std::uint64_t seed = seed_deleting(12, 5);
  LDGraph out = edit_graph(g, 0.1, seed);  // k = 1

  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  int id = 0;
  for (int i = 0; i < 12; ++i) {
    if (i == 5) continue;
    ElementType t =
        i == 11 ? ElementType::StandardCoil : ElementType::NormallyOpen;
    nodes.push_back(make_node(id, t, "N" + std::to_string(i)));
    if (id > 0) edges.push_back({id - 1, id, "Flow"});
    ++id;
  }
  LDGraph want = build(std::move(nodes), std::move(edges));
  CHECK(out.nodes.size() == 11);
  CHECK(graph_equal(out, want));

  // Every surviving ordered pair keeps its reachability.
  auto before = reach_by_name(g);
  auto after = reach_by_name(out);
  for (const auto& [name, reached] : after)
    for (const auto& [other, _] : after)
      if (before.at(name).count(other)) CHECK(reached.count(other) == 1);
}

TEST_CASE("reconnection inherits the outgoing edge type") {
  // 0 -Enable-> 2, 1 -Flow-> 2, 2 -Output-> 3, 2 -Flow-> 4.
  LDGraph g = build({make_node(0, ElementType::NormallyOpen, "A"),
                     make_node(1, ElementType::NormallyOpen, "B"),
                     make_node(2, ElementType::FunctionBlock, "FB"),
                     make_node(3, ElementType::StandardCoil, "C"),
                     make_node(4, ElementType::StandardCoil, "D")},
                    {{0, 2, "Enable"},
                     {1, 2, "Flow"},
                     {2, 3, "Output"},
                     {2, 4, "Flow"}});
  LDGraph out = edit_graph(g, 0.25, seed_deleting(5, 2));  // delete the block
  LDGraph want = build({make_node(0, ElementType::NormallyOpen, "A"),
                        make_node(1, ElementType::NormallyOpen, "B"),
                        make_node(2, ElementType::StandardCoil, "C"),
                        make_node(3, ElementType::StandardCoil, "D")},
                       {{0, 2, "Output"},
                        {0, 3, "Flow"},
                        {1, 2, "Output"},
                        {1, 3, "Flow"}});
  CHECK(graph_equal(out, want));
}

TEST_CASE("reconnection skips edges that already exist") {
  LDGraph g = build({make_node(0, ElementType::NormallyOpen, "A"),
                     make_node(1, ElementType::NormallyOpen, "B"),
                     make_node(2, ElementType::StandardCoil, "C")},
                    {{0, 1, "Flow"}, {0, 2, "Flow"}, {1, 2, "Flow"}});
  LDGraph out = edit_graph(g, 1.0 / 3.0, seed_deleting(3, 1));
  LDGraph want = build({make_node(0, ElementType::NormallyOpen, "A"),
                        make_node(1, ElementType::StandardCoil, "C")},
                       {{0, 1, "Flow"}});
  CHECK(graph_equal(out, want));
}

TEST_CASE("sequential deletions chain their bridges") {
  LDGraph g = chain(5);
  // Find a seed whose two Fisher-Yates picks are exactly {1, 2}.
  std::uint64_t seed = 0;
  for (;; ++seed) {
    DetRng rng(seed);
    std::vector<int> pool = {0, 1, 2, 3, 4};
    std::size_t j0 = static_cast<std::size_t>(rng.draw(5));
    std::swap(pool[0], pool[j0]);
    std::size_t j1 = 1 + static_cast<std::size_t>(rng.draw(4));
    std::swap(pool[1], pool[j1]);
    std::set<int> picked = {pool[0], pool[1]};
    if (picked == std::set<int>{1, 2}) break;
  }
  LDGraph out = edit_graph(g, 0.4, seed);  // k = 2
  LDGraph want = build({make_node(0, ElementType::NormallyOpen, "N0"),
                        make_node(1, ElementType::NormallyOpen, "N3"),
                        make_node(2, ElementType::StandardCoil, "N4")},
                       {{0, 1, "Flow"}, {1, 2, "Flow"}});
  CHECK(graph_equal(out, want));
}

TEST_CASE("small graphs duplicate instead of deleting") {
  LDGraph g = chain(9);
  LDGraph out = edit_graph(g, 0.1, 7);  // floor(0.9) = 0
  CHECK(out.nodes.size() == 10);
  CHECK(out.edges.size() == g.edges.size() + 1);
  REQUIRE(validate(out).empty());

  // The new node's content matches the target of some original edge.
  auto base = node_multiset(g);
  auto grown = node_multiset(out);
  std::vector<std::string> extra;
  std::set_difference(grown.begin(), grown.end(), base.begin(), base.end(),
                      std::back_inserter(extra));
  REQUIRE(extra.size() == 1);
  bool matches_edge_target = false;
  for (const auto& e : g.edges)
    if (canonical_node_string(g.nodes[e.dst]) == extra[0])
      matches_edge_target = true;
  CHECK(matches_edge_target);
}

TEST_CASE("tau zero always duplicates") {
  LDGraph g = chain(12);
  LDGraph out = edit_graph(g, 0.0, 3);
  CHECK(out.nodes.size() == 13);
  CHECK(out.edges.size() == g.edges.size() + 1);
}

TEST_CASE("edgeless graph duplication falls back to Flow") {
  LDGraph g = build({make_node(0, ElementType::Variable, "V0")}, {});
  LDGraph out = edit_graph(g, 0.0, 1);
  REQUIRE(out.nodes.size() == 2);
  REQUIRE(out.edges.size() == 1);
  CHECK(out.edges[0].type == "Flow");
  CHECK(out.nodes[0].name == "V0");
  CHECK(out.nodes[1].name == "V0");
  CHECK(validate(out).empty());
}

TEST_CASE("tau one empties the graph") {
  LDGraph out = edit_graph(chain(4), 1.0, 9);
  CHECK(out.nodes.empty());
  CHECK(out.edges.empty());
  CHECK(validate(out).empty());
}

TEST_CASE("node budget is exact for ten-plus nodes") {
  std::uint64_t s = 0x5151AA22BB33CC44ULL;
  for (int n = 10; n <= 25; ++n) {
    LDGraph g = random_dag(s, n);
    LDGraph out = edit_graph(g, 0.1, static_cast<std::uint64_t>(n));
    CHECK(out.nodes.size() == g.nodes.size() - g.nodes.size() / 10);
  }
}

TEST_CASE("connectivity and validity hold over random graphs") {
  std::uint64_t s = 0x77E1E1E1D2D2D2D2ULL;
  for (int iter = 0; iter < 60; ++iter) {
    int n = 5 + static_cast<int>(xorshift(s) % 20);
    LDGraph g = random_dag(s, n);
    LDGraph out = edit_graph(g, 0.2, xorshift(s));
    CHECK(validate(out).empty());
    auto before = reach_by_name(g);
    auto after = reach_by_name(out);
    for (const auto& [name, reached] : after) {
      for (const auto& [other, _] : after) {
        if (before.at(name).count(other)) {
          CAPTURE(iter);
          CAPTURE(name);
          CAPTURE(other);
          CHECK(reached.count(other) == 1);
        }
      }
    }
  }
}

TEST_CASE("errors: empty graph, bad tau, zero seeds") {
  LDGraph empty;
  CHECK_THROWS_AS(edit_graph(empty, 0.1, 0), UsageError);
  CHECK_THROWS_AS(edit_graph(chain(3), -0.1, 0), UsageError);
  CHECK_THROWS_AS(edit_graph(chain(3), 1.5, 0), UsageError);
  EditConfig cfg;
  cfg.num_seeds = 0;
  CHECK_THROWS_AS(generate_negatives(chain(3), cfg), UsageError);
}

TEST_CASE("candidates are independent and deterministic") {
  std::uint64_t s = 0xABCD0123EF456789ULL;
  LDGraph g = random_dag(s, 20);
  EditConfig cfg;
  cfg.tau = 0.1;
  cfg.num_seeds = 10;
  cfg.base_seed = 1234;
  auto cands = generate_negatives(g, cfg);
  REQUIRE(cands.size() == 10);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(cands[i].seed_index == i);
    CHECK(cands[i].seed_value == 1234 + i);
    CHECK(cands[i].graph.nodes.size() == 18);  // 20 - floor(2)
    CHECK(exact_equal(cands[i].graph,
                      edit_graph(g, cfg.tau, cfg.base_seed + i)));
  }
  auto again = generate_negatives(g, cfg);
  for (std::size_t i = 0; i < cands.size(); ++i)
    CHECK(exact_equal(cands[i].graph, again[i].graph));

  EditConfig one = cfg;
  one.num_seeds = 1;
  auto single = generate_negatives(g, one);
  REQUIRE(single.size() == 1);
  CHECK(exact_equal(single[0].graph, edit_graph(g, cfg.tau, cfg.base_seed)));
}

TEST_CASE("hard negative selection takes the argmin") {
  LDGraph gt = chain(6);
  LDGraph near = chain(6);
  near.nodes[2].name = "N2x";  // distance 3: node +1, two edges +1
  LDGraph mid = chain(6);
  mid.nodes[1].name = "N1x";
  mid.nodes[4].name = "N4x";  // distance 6
  LDGraph far = chain(7);

  std::vector<NegativeCandidate> cands(3);
  cands[0].graph = far;
  cands[0].seed_index = 0;
  cands[0].seed_value = 100;
  cands[1].graph = near;
  cands[1].seed_index = 1;
  cands[1].seed_value = 101;
  cands[2].graph = mid;
  cands[2].seed_index = 2;
  cands[2].seed_value = 102;

  PreferencePair pair = select_hard_negative(gt, cands, 0.1);
  CHECK(graph_equal(pair.chosen, gt));
  CHECK(graph_equal(pair.rejected, near));
  CHECK(pair.ged == 3);
  CHECK(pair.seed_index == 1);
  CHECK(pair.seed_value == 101);
  CHECK(pair.tau == 0.1);
  for (const auto& c : cands) CHECK(c.ged_to_gt > 0);
  CHECK(cands[2].ged_to_gt == 6);
}

TEST_CASE("ties break toward the lowest seed index") {
  LDGraph gt = chain(6);
  LDGraph alt = chain(6);
  alt.nodes[2].name = "N2x";
  std::vector<NegativeCandidate> cands(2);
  cands[0].graph = alt;
  cands[0].seed_index = 5;
  cands[0].seed_value = 105;
  cands[1].graph = alt;
  cands[1].seed_index = 2;
  cands[1].seed_value = 102;
  PreferencePair pair = select_hard_negative(gt, cands);
  CHECK(pair.seed_index == 2);
  CHECK(pair.seed_value == 102);
}

TEST_CASE("candidates equal to ground truth are excluded or fatal") {
  LDGraph gt = chain(5);
  std::vector<NegativeCandidate> all_equal(3);
  for (auto& c : all_equal) c.graph = gt;
  CHECK_THROWS_AS(select_hard_negative(gt, all_equal), DegeneratePairError);

  LDGraph alt = chain(5);
  alt.nodes[0].name = "Z";
  std::vector<NegativeCandidate> mixed(2);
  mixed[0].graph = gt;  // would win with distance zero if not excluded
  mixed[0].seed_index = 0;
  mixed[1].graph = alt;
  mixed[1].seed_index = 1;
  PreferencePair pair = select_hard_negative(gt, mixed);
  CHECK(graph_equal(pair.rejected, alt));
  CHECK(pair.ged > 0);
}

TEST_CASE("end to end: selected negative is the closest candidate") {
  std::uint64_t s = 0x00FF00FF12341234ULL;
  LDGraph g = random_dag(s, 14);
  EditConfig cfg;
  cfg.base_seed = 42;
  auto cands = generate_negatives(g, cfg);
  PreferencePair pair = select_hard_negative(g, cands, cfg.tau);
  CHECK_FALSE(graph_equal(pair.chosen, pair.rejected));
  for (const auto& c : cands) {
    if (graph_equal(g, c.graph)) continue;
    CHECK(pair.ged <= c.ged_to_gt);
    // Direct recomputation agrees with what selection stored.
    CHECK(ged(g, c.graph).cost == c.ged_to_gt);
  }
  CHECK(ged(g, pair.rejected).cost == pair.ged);
}
