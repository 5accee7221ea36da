#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ldforge/bm25.hpp"
#include "ldforge/errors.hpp"
#include "ldforge/format.hpp"
#include "ldforge/synthgen.hpp"

using namespace ldforge;

namespace {

bool same_sample(const Sample& a, const Sample& b) {
  return a.sample_id == b.sample_id &&
         a.program_description == b.program_description &&
         a.detailed_description == b.detailed_description &&
         graph_equal(a.graph, b.graph) &&
         a.graph.nodes.size() == b.graph.nodes.size();
}

}  // namespace

TEST_CASE("exact node budgets") {
  SynthParams p;
  p.min_nodes = 3;
  p.max_nodes = 3;
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(generate_graph(p, i).nodes.size() == 3);
  p.min_nodes = p.max_nodes = 1;
  CHECK(generate_graph(p, 0).nodes.size() == 1);
  p.min_nodes = p.max_nodes = 2;
  CHECK(generate_graph(p, 0).nodes.size() == 2);
  p.min_nodes = 4;
  p.max_nodes = 9;
  for (std::size_t i = 0; i < 50; ++i) {
    auto n = generate_graph(p, i).nodes.size();
    CHECK(n >= 4);
    CHECK(n <= 9);
  }
}

TEST_CASE("branch probability zero yields pure chains") {
  SynthParams p;
  p.branch_probability = 0.0;
  p.fb_probability = 0.0;
  p.min_nodes = 2;
  p.max_nodes = 12;
  for (std::size_t i = 0; i < 40; ++i) {
    LDGraph g = generate_graph(p, i);
    CHECK(g.edges.size() == g.nodes.size() - 1);
    std::map<int, int> outdeg, indeg;
    for (const auto& e : g.edges) {
      ++outdeg[e.src];
      ++indeg[e.dst];
    }
    for (const auto& [_, d] : outdeg) CHECK(d <= 1);
    for (const auto& [_, d] : indeg) CHECK(d <= 1);
  }
}

TEST_CASE("with blocks allowed, only block ports add fan-out") {
  SynthParams p;
  p.branch_probability = 0.0;
  p.fb_probability = 1.0;
  p.min_nodes = 4;
  p.max_nodes = 12;
  for (std::size_t i = 0; i < 40; ++i) {
    LDGraph g = generate_graph(p, i);
    for (const auto& n : g.nodes) {
      if (n.type == ElementType::FunctionBlock) continue;
      int out = 0;
      for (const auto& e : g.edges)
        if (e.src == n.id) ++out;
      CHECK(out <= 1);
    }
  }
}

TEST_CASE("graphs validate and complexity stays in range") {
  SynthParams p;
  p.min_nodes = 1;
  p.max_nodes = 24;
  p.seed = 7;
  for (std::size_t i = 0; i < 1000; ++i) {
    LDGraph g = generate_graph(p, i);
    CAPTURE(i);
    CHECK(validate(g).empty());
    int n = static_cast<int>(g.nodes.size());
    CHECK(n >= p.min_nodes);
    CHECK(n <= p.max_nodes);
    CHECK(complexity(g) >= n);
    CHECK(complexity(g) <= 4 * n);
  }
}

TEST_CASE("every generated graph survives all three codecs") {
  SynthParams p;
  p.min_nodes = 1;
  p.max_nodes = 20;
  p.seed = 11;
  for (std::size_t i = 0; i < 200; ++i) {
    LDGraph g = generate_graph(p, i);
    CAPTURE(i);
    for (FormatKind f :
         {FormatKind::Xml, FormatKind::Json, FormatKind::Metaprogram}) {
      std::string text = encode(g, f);
      CHECK(graph_equal(decode(text, f), g));
    }
  }
}

TEST_CASE("corpus: unique ids, non-empty prompts, determinism") {
  SynthParams p;
  p.n_samples = 50;
  p.seed = 3;
  auto corpus = generate_corpus(p);
  REQUIRE(corpus.size() == 50);
  std::set<std::string> ids;
  for (const auto& s : corpus) {
    ids.insert(s.sample_id);
    CHECK_FALSE(prompt_of(s).empty());
    CHECK(validate(s.graph).empty());
  }
  CHECK(ids.size() == 50);
  CHECK(corpus[0].sample_id == "synth-000000");
  CHECK(corpus[49].sample_id == "synth-000049");

  auto again = generate_corpus(p);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    CHECK(same_sample(corpus[i], again[i]));
}

TEST_CASE("prompts quote the coil name") {
  SynthParams p;
  p.n_samples = 30;
  p.seed = 5;
  for (const auto& s : generate_corpus(p)) {
    std::string coil;
    for (const auto& n : s.graph.nodes)
      if (is_coil(n.type) && coil.empty()) coil = n.name;
    REQUIRE_FALSE(coil.empty());
    CHECK(prompt_of(s).find(coil) != std::string::npos);
  }
}

TEST_CASE("a near-duplicate prompt is retrieved first") {
  SynthParams p;
  p.n_samples = 25;
  p.seed = 9;
  auto corpus = generate_corpus(p);
  std::vector<std::pair<std::string, std::string>> docs;
  for (const auto& s : corpus) docs.push_back({s.sample_id, prompt_of(s)});
  // Append an exact duplicate of sample 0 under a new id.
  docs.push_back({"dup", prompt_of(corpus[0])});
  Bm25Index ix = Bm25Index::build(docs);
  auto hits = ix.top_k(prompt_of(corpus[0]), 3, corpus[0].sample_id);
  REQUIRE_FALSE(hits.empty());
  CHECK(hits[0].sample_id == "dup");
}

TEST_CASE("bad parameters are rejected") {
  SynthParams p;
  p.min_nodes = 0;
  CHECK_THROWS_AS(generate_graph(p, 0), UsageError);
  p.min_nodes = 5;
  p.max_nodes = 4;
  CHECK_THROWS_AS(generate_graph(p, 0), UsageError);
  p.max_nodes = 6;
  p.branch_probability = 1.5;
  CHECK_THROWS_AS(generate_corpus(p), UsageError);
}
