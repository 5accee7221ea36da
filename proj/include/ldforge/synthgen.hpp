#pragma once

#include <cstdint>
#include <vector>

#include "ldforge/sample.hpp"

namespace ldforge {

struct SynthParams {
  std::size_t n_samples = 100;
  int min_nodes = 3;
  int max_nodes = 20;
  double branch_probability = 0.3;
  double fb_probability = 0.35;
  std::uint64_t seed = 0;
};

// Deterministic rung-shaped graph for corpus index `index`: a
// series-parallel contact network, optionally a function block with
// Variable inputs, and a terminating coil. The node count is drawn
// uniformly from [min_nodes, max_nodes] and hit exactly. Two parallel
// stages are never adjacent, which keeps every generated graph inside
// the subset the XML emitter can lay out.
//
// Draw order (DetRng seeded with mix_seed(seed, index)): node target;
// coil type; coil number; function-block gate (then kind and input
// count); per stage a branch gate (only when a branch is allowed) and
// one type draw per contact; variable numbers.
LDGraph generate_graph(const SynthParams& params, std::size_t index);

// Samples "synth-000000".. with templated Korean/English descriptions
// that quote the generated element names, so lexical retrieval over the
// prompts has signal. Prompt wording draws from a second stream derived
// from (seed, index).
std::vector<Sample> generate_corpus(const SynthParams& params);

}  // namespace ldforge
