#pragma once

#include <string>

#include "ldforge/graph.hpp"

namespace ldforge {

// One corpus entry: the two-field prompt plus its ground-truth graph.
struct Sample {
  std::string sample_id;
  std::string program_description;
  std::string detailed_description;
  LDGraph graph;
};

// The retrieval/query key.
inline std::string prompt_of(const Sample& s) {
  return s.program_description + "\n" + s.detailed_description;
}

}  // namespace ldforge
