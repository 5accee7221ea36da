#pragma once

#include <cstdint>
#include <vector>

#include "ldforge/ged.hpp"
#include "ldforge/graph.hpp"

namespace ldforge {

struct EditConfig {
  double tau = 0.1;          // deletion ratio
  std::size_t num_seeds = 10;
  std::uint64_t base_seed = 0;
};

struct NegativeCandidate {
  LDGraph graph;
  std::size_t seed_index = 0;
  std::uint64_t seed_value = 0;
  // Filled by select_hard_negative.
  std::uint64_t ged_to_gt = 0;
  bool ged_exact = true;
};

struct PreferencePair {
  LDGraph chosen;    // ground truth
  LDGraph rejected;  // hard negative
  double tau = 0.1;
  std::size_t seed_index = 0;
  std::uint64_t seed_value = 0;
  std::uint64_t ged = 0;
  bool ged_exact = true;
};

// One randomized corruption step. Let k = floor(tau * |V|).
//
// k > 0: k distinct nodes are selected by a partial Fisher-Yates pass
// over [0, n) -- step i swaps position i with i + draw(n - i) -- then
// deleted in ascending id order. When node x goes, every current
// predecessor w is wired to every current successor y with the type of
// the (x, y) edge, skipping self-loops and edges that already exist, so
// reachability among survivors is preserved. Survivor ids are
// re-densified keeping their relative order within each rung.
//
// k == 0: a node-edge pair is duplicated instead. With edges present:
// e = edges[draw(|E|)] (edges are in canonical order), the copy of e's
// target gets id |V|, and node draw(|V|) gains an edge to the copy with
// e's type. Without edges: the copy is of node draw(|V|) and node
// draw(|V|) gains a "Flow" edge to it.
//
// The result always passes validate; tau = 1 deletes everything and
// yields the empty graph.
LDGraph edit_graph(const LDGraph& graph, double tau, std::uint64_t seed);

// Candidate i = edit_graph(graph, tau, base_seed + i): every candidate
// starts from the original graph, so candidates are independent and the
// whole list is deterministic given the config.
std::vector<NegativeCandidate> generate_negatives(const LDGraph& graph,
                                                  const EditConfig& config);

// Fills ged_to_gt on every candidate and returns gt paired with the
// candidate of minimum distance (ties: lowest seed_index). Candidates
// graph_equal to gt are excluded; if that leaves none, throws
// DegeneratePairError so the caller can skip the sample.
PreferencePair select_hard_negative(const LDGraph& gt,
                                    std::vector<NegativeCandidate>& candidates,
                                    double tau = 0.1,
                                    const GedOptions& opts = {});

}  // namespace ldforge
