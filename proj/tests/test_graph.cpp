#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ldforge/errors.hpp"
#include "ldforge/graph.hpp"

using namespace ldforge;

namespace {

LDGraph two_node_chain() {
  LDGraph g;
  g.nodes.push_back(make_node(0, ElementType::NormallyOpen, "X0"));
  g.nodes.push_back(make_node(1, ElementType::StandardCoil, "Y0"));
  g.edges.push_back({0, 1, "Flow"});
  g.rung_starts = {0};
  return g;
}

}  // namespace

TEST_CASE("element type catalog round-trips") {
  for (int i = 0; i < kElementTypeCount; ++i) {
    auto t = static_cast<ElementType>(i);
    auto back = element_type_from(to_string(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  CHECK_FALSE(element_type_from("HorzLine").has_value());
  CHECK_FALSE(element_type_from("VertLine").has_value());
  CHECK_FALSE(element_type_from("MultiHorzLine").has_value());
  CHECK_FALSE(element_type_from("Coil").has_value());
}

TEST_CASE("canonical node string") {
  auto n = make_node(0, ElementType::NormallyOpen, "X0");
  CHECK(canonical_node_string(n) == "NormallyOpen|X0");

  auto fb = make_node(1, ElementType::FunctionBlock, "TON1",
                      {{"kind", "TON"}, {"base", "10ms"}});
  // params sorted lexicographically regardless of construction order
  CHECK(canonical_node_string(fb) == "FunctionBlock|TON1|base=10ms|kind=TON");

  auto anon = make_node(2, ElementType::Inverter, "");
  CHECK(canonical_node_string(anon) == "Inverter|");
}

TEST_CASE("make_node rejects duplicate param keys") {
  CHECK_THROWS_AS(
      make_node(0, ElementType::FunctionBlock, "T", {{"k", "1"}, {"k", "2"}}),
      ValidationError);
}

TEST_CASE("canonical edge string") {
  auto g = two_node_chain();
  CHECK(canonical_edge_string(g, g.edges[0]) ==
        "NormallyOpen|X0->StandardCoil|Y0@Flow");
}

TEST_CASE("edge type grammar") {
  CHECK(edge_type_well_formed("Flow"));
  CHECK(edge_type_well_formed("Enable"));
  CHECK(edge_type_well_formed("Output"));
  CHECK(edge_type_well_formed("Input1"));
  CHECK(edge_type_well_formed("Input12"));
  CHECK_FALSE(edge_type_well_formed("Input0"));
  CHECK_FALSE(edge_type_well_formed("Input"));
  CHECK_FALSE(edge_type_well_formed("Input01"));
  CHECK_FALSE(edge_type_well_formed("Input-1"));
  CHECK_FALSE(edge_type_well_formed("flow"));
  CHECK_FALSE(edge_type_well_formed(""));
}

TEST_CASE("graph_equal ignores id relabeling") {
  auto g = two_node_chain();

  // Same content with ids swapped (and re-canonicalized).
  std::vector<LDNode> ns;
  ns.push_back(make_node(7, ElementType::StandardCoil, "Y0"));
  ns.push_back(make_node(3, ElementType::NormallyOpen, "X0"));
  std::vector<LDEdge> es{{3, 7, "Flow"}};
  auto h = canonicalize(std::move(ns), std::move(es));
  REQUIRE(validate(h).empty());
  CHECK(graph_equal(g, h));

  // Different name breaks equality.
  auto k = two_node_chain();
  k.nodes[1].name = "Y1";
  CHECK_FALSE(graph_equal(g, k));
}

TEST_CASE("graph_equal respects duplicate-content multiplicity") {
  // Two identical contacts vs one: multisets differ.
  std::vector<LDNode> a;
  a.push_back(make_node(0, ElementType::NormallyOpen, "X0"));
  a.push_back(make_node(1, ElementType::NormallyOpen, "X0"));
  auto ga = canonicalize(std::move(a), {});
  std::vector<LDNode> b;
  b.push_back(make_node(0, ElementType::NormallyOpen, "X0"));
  auto gb = canonicalize(std::move(b), {});
  CHECK_FALSE(graph_equal(ga, gb));
}

TEST_CASE("complexity is nodes plus edges") {
  auto g = two_node_chain();
  CHECK(complexity(g) == 3);
  CHECK(complexity(LDGraph{}) == 0);
}

TEST_CASE("validate accepts the empty graph") {
  CHECK(validate(LDGraph{}).empty());
}

TEST_CASE("validate flags broken invariants") {
  auto g = two_node_chain();
  REQUIRE(validate(g).empty());

  SUBCASE("dangling edge") {
    g.edges.push_back({0, 9, "Flow"});
    auto v = validate(g);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].code == "edge.dangling");
  }
  SUBCASE("cycle") {
    g.edges.insert(g.edges.begin(), {1, 0, "Flow"});
    auto v = validate(g);
    bool cyc = false;
    for (auto& x : v) cyc = cyc || x.code == "graph.cycle";
    CHECK(cyc);
  }
  SUBCASE("bad edge type") {
    g.edges[0].type = "Wire";
    auto v = validate(g);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].code == "edge.type");
  }
  SUBCASE("duplicate edge") {
    g.edges.push_back({0, 1, "Flow"});
    auto v = validate(g);
    bool dup = false;
    for (auto& x : v) dup = dup || x.code == "edge.duplicate";
    CHECK(dup);
  }
  SUBCASE("wrong rung_starts") {
    g.rung_starts = {0, 1};
    auto v = validate(g);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].code == "rung.starts");
  }
  SUBCASE("non-dense ids") {
    g.nodes[1].id = 5;
    auto v = validate(g);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].code == "node.ids");
  }
}

TEST_CASE("canonicalize orders components by min id and keeps node order") {
  // Two components interleaved by original id: {1,4} and {2,3}.
  std::vector<LDNode> ns;
  ns.push_back(make_node(4, ElementType::StandardCoil, "Y0"));
  ns.push_back(make_node(2, ElementType::NormallyClosed, "X1"));
  ns.push_back(make_node(1, ElementType::NormallyOpen, "X0"));
  ns.push_back(make_node(3, ElementType::SetCoil, "Y1"));
  std::vector<LDEdge> es{{1, 4, "Flow"}, {2, 3, "Flow"}};
  auto g = canonicalize(std::move(ns), std::move(es));
  REQUIRE(validate(g).empty());
  REQUIRE(g.nodes.size() == 4);
  // Component of original id 1 comes first: ids 0,1 = X0,Y0.
  CHECK(g.nodes[0].name == "X0");
  CHECK(g.nodes[1].name == "Y0");
  CHECK(g.nodes[2].name == "X1");
  CHECK(g.nodes[3].name == "Y1");
  CHECK(g.rung_starts == std::vector<int>{0, 2});
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].src == 0);
  CHECK(g.edges[0].dst == 1);
  CHECK(g.edges[1].src == 2);
  CHECK(g.edges[1].dst == 3);
}

TEST_CASE("canonicalize rejects duplicates and dangling references") {
  std::vector<LDNode> dup;
  dup.push_back(make_node(0, ElementType::NormallyOpen, "a"));
  dup.push_back(make_node(0, ElementType::NormallyOpen, "b"));
  CHECK_THROWS_AS(canonicalize(std::move(dup), {}), WiringError);

  std::vector<LDNode> one;
  one.push_back(make_node(0, ElementType::NormallyOpen, "a"));
  std::vector<LDEdge> bad{{0, 1, "Flow"}};
  CHECK_THROWS_AS(canonicalize(std::move(one), std::move(bad)), WiringError);
}

TEST_CASE("require_valid message names violations") {
  auto g = two_node_chain();
  g.edges[0].type = "Bogus";
  try {
    require_valid(g, "unit");
    FAIL("expected throw");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("edge.type") != std::string::npos);
    CHECK(msg.find("unit") != std::string::npos);
  }
}
