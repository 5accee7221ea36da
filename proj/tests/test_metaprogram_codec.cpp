#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ldforge/errors.hpp"
#include "ldforge/json_codec.hpp"
#include "ldforge/metaprogram_codec.hpp"

using namespace ldforge;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LDGraph build(std::vector<LDNode> nodes, std::vector<LDEdge> edges) {
  return canonicalize(std::move(nodes), std::move(edges));
}

}  // namespace

TEST_CASE("singleton emission") {
  LDGraph g = build({make_node(0, ElementType::Inverter, "")}, {});
  CHECK(to_metaprogram(g) == "G.add_node(0, ElementType=\"Inverter\", Name=\"\")\n");
}

TEST_CASE("two-node chain emits depth-first") {
  LDGraph g = build({make_node(0, ElementType::NormallyOpen, "X0"),
                     make_node(1, ElementType::StandardCoil, "Y0")},
                    {{0, 1, "Flow"}});
  CHECK(to_metaprogram(g) ==
        "G.add_node(0, ElementType=\"NormallyOpen\", Name=\"X0\")\n"
        "G.add_edge(0, 1, type=\"Flow\")\n"
        "G.add_node(1, ElementType=\"StandardCoil\", Name=\"Y0\")\n");
}

TEST_CASE("second source gets its own seed") {
  // 0 -> 2 <- 1: the walk from 0 never reaches 1.
  LDGraph g = build({make_node(0, ElementType::NormallyOpen, "A"),
                     make_node(1, ElementType::NormallyClosed, "B"),
                     make_node(2, ElementType::StandardCoil, "Y")},
                    {{0, 2, "Flow"}, {1, 2, "Flow"}});
  CHECK(to_metaprogram(g) ==
        "G.add_node(0, ElementType=\"NormallyOpen\", Name=\"A\")\n"
        "G.add_edge(0, 2, type=\"Flow\")\n"
        "G.add_node(2, ElementType=\"StandardCoil\", Name=\"Y\")\n"
        "G.add_node(1, ElementType=\"NormallyClosed\", Name=\"B\")\n"
        "G.add_edge(1, 2, type=\"Flow\")\n");
  CHECK(graph_equal(parse_metaprogram(to_metaprogram(g)), g));
}

TEST_CASE("round-trip with params and multiple components") {
  LDGraph g = build(
      {make_node(0, ElementType::NormallyOpen, "RUN"),
       make_node(1, ElementType::FunctionBlock, "T1",
                 {{"base", "10ms"}, {"kind", "TON"}}),
       make_node(2, ElementType::Variable, "T#3S"),
       make_node(3, ElementType::StandardCoil, "DONE"),
       make_node(4, ElementType::NormallyClosed, "STOP"),
       make_node(5, ElementType::SetCoil, "LATCH")},
      {{0, 1, "Enable"}, {1, 2, "Input1"}, {1, 3, "Output"}, {4, 5, "Flow"}});
  std::string text = to_metaprogram(g);
  LDGraph back = parse_metaprogram(text);
  CHECK(graph_equal(back, g));
  CHECK(to_metaprogram(back) == text);
}

TEST_CASE("statement order does not matter") {
  LDGraph a = parse_metaprogram(
      "G.add_node(0, ElementType=\"NormallyOpen\", Name=\"X\")\n"
      "G.add_edge(0, 1, type=\"Flow\")\n"
      "G.add_node(1, ElementType=\"StandardCoil\", Name=\"Y\")\n");
  LDGraph b = parse_metaprogram(
      "G.add_edge(0, 1, type=\"Flow\")\n"
      "G.add_node(1, ElementType=\"StandardCoil\", Name=\"Y\")\n"
      "G.add_node(0, ElementType=\"NormallyOpen\", Name=\"X\")\n");
  CHECK(graph_equal(a, b));
}

TEST_CASE("spaces after commas are optional") {
  LDGraph g = parse_metaprogram(
      "G.add_node(0,ElementType=\"Inverter\",Name=\"\")\n"
      "G.add_node(1,ElementType=\"StandardCoil\",Name=\"Y\")\n"
      "G.add_edge(0,1,type=\"Flow\")\n");
  CHECK(g.nodes.size() == 2);
  CHECK(g.edges.size() == 1);
}

TEST_CASE("quotes and backslashes are escaped") {
  LDGraph g = build({make_node(0, ElementType::Variable, "say \"hi\" \\ bye")},
                    {});
  std::string text = to_metaprogram(g);
  CHECK(text.find(R"(Name="say \"hi\" \\ bye")") != std::string::npos);
  CHECK(graph_equal(parse_metaprogram(text), g));
}

TEST_CASE("errors") {
  // Undeclared edge endpoint.
  CHECK_THROWS_AS(parse_metaprogram("G.add_edge(0, 7, type=\"Flow\")\n"),
                  WiringError);
  // Grammar violations carry the line number.
  try {
    parse_metaprogram(
        "G.add_node(0, ElementType=\"Inverter\", Name=\"\")\n"
        "G.do_stuff(1)\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_metaprogram("G.add_node(0, ElementType=Inverter)\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_metaprogram("G.add_node(0, Name=\"X\")\n"), SchemaError);
  CHECK_THROWS_AS(
      parse_metaprogram("G.add_node(0, ElementType=\"Inverter\", Name=\"\")\n"
                        "G.add_node(0, ElementType=\"Inverter\", Name=\"\")\n"),
      SchemaError);
  CHECK_THROWS_AS(parse_metaprogram("G.add_node(0, ElementType=\"Nope\")\n"),
                  SchemaError);
}

TEST_CASE("cross-format commutation") {
  LDGraph g = build(
      {make_node(0, ElementType::NormallyOpen, "A"),
       make_node(1, ElementType::NormallyOpen, "B"),
       make_node(2, ElementType::FunctionBlock, "CTU1", {{"kind", "CTU"}}),
       make_node(3, ElementType::Variable, "PV10"),
       make_node(4, ElementType::NegatedCoil, "OUT")},
      {{0, 2, "Enable"}, {1, 2, "Enable"}, {2, 3, "Input1"}, {2, 4, "Output"}});
  CHECK(graph_equal(parse_json_text(to_json_text(g)),
                    parse_metaprogram(to_metaprogram(g))));
}

TEST_CASE("golden file") {
  LDGraph g = build(
      {make_node(0, ElementType::NormallyOpen, "RUN"),
       make_node(1, ElementType::FunctionBlock, "T1", {{"kind", "TON"}}),
       make_node(2, ElementType::Variable, "T#3S"),
       make_node(3, ElementType::StandardCoil, "DONE")},
      {{0, 1, "Enable"}, {1, 2, "Input1"}, {1, 3, "Output"}});
  CHECK(to_metaprogram(g) ==
        read_file(std::string(LDF_GOLDEN_DIR) + "/timer.meta"));
}
