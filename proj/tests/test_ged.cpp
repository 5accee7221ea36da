#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ldforge/ged.hpp"
#include "ldforge/levenshtein.hpp"

using namespace ldforge;

namespace {

LDGraph build(std::vector<LDNode> nodes, std::vector<LDEdge> edges) {
  return canonicalize(std::move(nodes), std::move(edges));
}

// ---- independent brute-force reference for tiny graphs ----
// Enumerates every injective partial node mapping and prices it
// directly from canonical strings; no sharing with the library search
// beyond levenshtein itself (which has its own oracle test).

std::vector<std::string> pair_edges(const LDGraph& g, int p, int q) {
  std::vector<std::string> out;
  for (const auto& e : g.edges)
    if (e.src == p && e.dst == q) out.push_back(canonical_edge_string(g, e));
  return out;
}

std::uint64_t scalars(const std::string& s) { return utf8_scalars(s).size(); }

std::uint64_t match_sets(const std::vector<std::string>& sa,
                         const std::vector<std::string>& sb,
                         std::size_t idx, std::uint32_t mask) {
  if (idx == sa.size()) {
    std::uint64_t t = 0;
    for (std::size_t j = 0; j < sb.size(); ++j)
      if (!(mask >> j & 1u)) t += scalars(sb[j]);
    return t;
  }
  std::uint64_t best =
      scalars(sa[idx]) + match_sets(sa, sb, idx + 1, mask);
  for (std::size_t j = 0; j < sb.size(); ++j) {
    if (mask >> j & 1u) continue;
    std::uint64_t c = levenshtein(sa[idx], sb[j]) +
                      match_sets(sa, sb, idx + 1, mask | (1u << j));
    if (c < best) best = c;
  }
  return best;
}

std::uint64_t mapping_cost(const LDGraph& a, const LDGraph& b,
                           const std::vector<int>& phi) {
  const int na = static_cast<int>(a.nodes.size());
  const int nb = static_cast<int>(b.nodes.size());
  std::vector<char> image(nb, 0);
  std::uint64_t cost = 0;
  for (int i = 0; i < na; ++i) {
    std::string ca = canonical_node_string(a.nodes[i]);
    if (phi[i] < 0) {
      cost += scalars(ca);
    } else {
      image[phi[i]] = 1;
      cost += levenshtein(ca, canonical_node_string(b.nodes[phi[i]]));
    }
  }
  for (int v = 0; v < nb; ++v)
    if (!image[v]) cost += scalars(canonical_node_string(b.nodes[v]));
  for (int p = 0; p < na; ++p) {
    for (int q = 0; q < na; ++q) {
      if (p == q) continue;
      std::vector<std::string> sa = pair_edges(a, p, q);
      std::vector<std::string> sb;
      if (phi[p] >= 0 && phi[q] >= 0) sb = pair_edges(b, phi[p], phi[q]);
      if (!sa.empty() || !sb.empty()) cost += match_sets(sa, sb, 0, 0);
    }
  }
  for (const auto& e : b.edges)
    if (!image[e.src] || !image[e.dst])
      cost += scalars(canonical_edge_string(b, e));
  return cost;
}

void enumerate(const LDGraph& a, const LDGraph& b, std::vector<int>& phi,
               std::vector<char>& used, std::size_t i, std::uint64_t& best) {
  if (i == a.nodes.size()) {
    std::uint64_t c = mapping_cost(a, b, phi);
    if (c < best) best = c;
    return;
  }
  phi[i] = -1;
  enumerate(a, b, phi, used, i + 1, best);
  for (int v = 0; v < static_cast<int>(b.nodes.size()); ++v) {
    if (used[v]) continue;
    used[v] = 1;
    phi[i] = v;
    enumerate(a, b, phi, used, i + 1, best);
    used[v] = 0;
  }
  phi[i] = -1;
}

std::uint64_t brute_force(const LDGraph& a, const LDGraph& b) {
  std::vector<int> phi(a.nodes.size(), -1);
  std::vector<char> used(b.nodes.size(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  enumerate(a, b, phi, used, 0, best);
  return best;
}

// ---- random tiny-graph pool ----

std::uint64_t xorshift(std::uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

LDGraph random_tiny(std::uint64_t& s) {
  static const ElementType types[] = {
      ElementType::NormallyOpen, ElementType::NormallyClosed,
      ElementType::StandardCoil, ElementType::Variable,
      ElementType::FunctionBlock};
  static const char* names[] = {"A", "B", "X0", "Y1"};
  static const char* etypes[] = {"Flow", "Enable"};
  int n = 1 + static_cast<int>(xorshift(s) % 4);
  std::vector<LDNode> nodes;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<std::string, std::string>> params;
    if (xorshift(s) % 4 == 0) params.push_back({"k", "v"});
    nodes.push_back(make_node(i, types[xorshift(s) % 5],
                              names[xorshift(s) % 4], params));
  }
  std::vector<LDEdge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (xorshift(s) % 3 == 0)
        edges.push_back({i, j, etypes[xorshift(s) % 2]});
  return build(std::move(nodes), std::move(edges));
}

LDGraph chain(int n, const char* prefix = "N") {
  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  for (int i = 0; i < n; ++i) {
    ElementType t =
        i + 1 == n ? ElementType::StandardCoil : ElementType::NormallyOpen;
    nodes.push_back(make_node(i, t, prefix + std::to_string(i)));
    if (i > 0) edges.push_back({i - 1, i, "Flow"});
  }
  return build(std::move(nodes), std::move(edges));
}

}  // namespace

TEST_CASE("identity is zero, including past the exact-size limit") {
  GedResult r = ged(chain(3), chain(3));
  CHECK(r.cost == 0);
  CHECK(r.exact);
  r = ged(chain(40), chain(40));
  CHECK(r.cost == 0);
  CHECK(r.exact);
  LDGraph empty;
  r = ged(empty, empty);
  CHECK(r.cost == 0);
  CHECK(r.exact);
}

TEST_CASE("zero exactly when the canonical multisets coincide") {
  CHECK(ged(chain(3), chain(3)).cost == 0);
  CHECK(ged(chain(3), chain(4)).cost > 0);
  LDGraph renamed = chain(3);
  renamed.nodes[1].name = "M";
  CHECK(ged(chain(3), renamed).cost > 0);
}

TEST_CASE("empty versus non-empty inserts everything") {
  LDGraph empty;
  LDGraph g = chain(2);
  std::uint64_t want = 0;
  for (const auto& n : g.nodes) want += scalars(canonical_node_string(n));
  for (const auto& e : g.edges) want += scalars(canonical_edge_string(g, e));
  GedResult r = ged(empty, g);
  CHECK(r.cost == want);
  CHECK(r.exact);
  CHECK(ged(g, empty).cost == want);

  LDGraph korean =
      build({make_node(0, ElementType::Variable, "값")}, {});
  CHECK(ged(empty, korean).cost == 10);  // "Variable|값" is ten scalars
}

TEST_CASE("single rename costs one per touched string") {
  LDGraph a = chain(3);
  LDGraph b = chain(3);
  b.nodes[1].name = "N1x";  // one char appended: node +1, both edges +1
  GedResult r = ged(a, b);
  CHECK(r.exact);
  CHECK(r.cost == 3);
  CHECK(r.cost == brute_force(a, b));
}

TEST_CASE("deleting a leaf costs the node plus its edge") {
  LDGraph a = chain(2);
  LDGraph b = build({make_node(0, ElementType::NormallyOpen, "N0")}, {});
  std::uint64_t want = scalars(canonical_node_string(a.nodes[1])) +
                       scalars(canonical_edge_string(a, a.edges[0]));
  GedResult r = ged(a, b);
  CHECK(r.exact);
  CHECK(r.cost == want);
  CHECK(r.cost == brute_force(a, b));
}

TEST_CASE("exact search matches brute force on all tiny pairs") {
  std::uint64_t s = 0x1234ABCD5678EF01ULL;
  std::vector<LDGraph> pool;
  pool.push_back(LDGraph{});
  pool.push_back(chain(1));
  pool.push_back(chain(3));
  // Mid-chain deletion pair from the worked examples.
  pool.push_back(build({make_node(0, ElementType::NormallyOpen, "X0"),
                        make_node(1, ElementType::StandardCoil, "Y0")},
                       {{0, 1, "Flow"}}));
  while (pool.size() < 10) pool.push_back(random_tiny(s));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      std::uint64_t want =
          graph_equal(pool[i], pool[j]) ? 0 : brute_force(pool[i], pool[j]);
      GedResult r = ged(pool[i], pool[j]);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(r.exact);
      CHECK(r.cost == want);
    }
  }
}

TEST_CASE("symmetric in exact mode") {
  std::uint64_t s = 0xFEEDF00D1122AA55ULL;
  for (int iter = 0; iter < 30; ++iter) {
    LDGraph a = random_tiny(s);
    LDGraph b = random_tiny(s);
    CHECK(ged(a, b).cost == ged(b, a).cost);
  }
}

TEST_CASE("beam search upper-bounds the exact answer") {
  std::uint64_t s = 0x0BADC0DE00112233ULL;
  GedOptions narrow;
  narrow.exact_limit = 0;  // force the beam even on tiny graphs
  narrow.beam_width = 2;
  for (int iter = 0; iter < 40; ++iter) {
    LDGraph a = random_tiny(s);
    LDGraph b = random_tiny(s);
    if (graph_equal(a, b)) continue;
    GedResult exact = ged(a, b);
    GedResult approx = ged(a, b, narrow);
    REQUIRE(exact.exact);
    CHECK_FALSE(approx.exact);
    CHECK(approx.cost >= exact.cost);
  }
}

TEST_CASE("mode selection by size") {
  LDGraph a = chain(11);
  LDGraph b = chain(11);
  b.nodes[5].name = "M5";
  GedResult r = ged(a, b);
  CHECK_FALSE(r.exact);  // 11 nodes is past the default limit
  CHECK(r.cost > 0);
  GedOptions wide;
  wide.exact_limit = 11;
  GedResult e = ged(a, b, wide);
  CHECK(e.exact);
  CHECK(r.cost >= e.cost);
  // A generous beam finds the same path here.
  CHECK(r.cost == e.cost);
}
