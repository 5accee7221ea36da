#pragma once

#include <cstdint>

#include "ldforge/graph.hpp"

namespace ldforge {

// Edit costs are string lengths so that a heavily-parameterised node is
// more expensive to get wrong than a bare contact:
//   delete/insert node n : scalars in canonical_node_string(n)
//   substitute a -> b    : levenshtein of the two canonical strings
//   edges                : same scheme over canonical_edge_string
struct GedOptions {
  // Largest |V| on either side that still gets the exact search.
  std::size_t exact_limit = 10;
  // Beam width for the approximate search above the limit.
  std::size_t beam_width = 64;
};

struct GedResult {
  std::uint64_t cost = 0;
  bool exact = true;
};

// Graph edit distance under the costs above.  Exact branch-and-bound
// when both graphs fit under exact_limit, beam search otherwise (the
// beam result is a feasible edit path, so never below the true
// distance).  Symmetric in its arguments; zero iff graph_equal.
GedResult ged(const LDGraph& a, const LDGraph& b, const GedOptions& opts = {});

}  // namespace ldforge
