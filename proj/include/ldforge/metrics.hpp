#pragma once

#include <vector>

#include "ldforge/graph.hpp"

namespace ldforge {

// Multiset-overlap scores for one (ground truth, prediction) pair.
struct EvalResult {
  int node_tp = 0, node_fp = 0, node_fn = 0;
  int edge_tp = 0, edge_fp = 0, edge_fn = 0;
  double node_f1 = 0.0, edge_f1 = 0.0;
  int node_em = 0, edge_em = 0, program_em = 0;
};

// Table row: per-metric means scaled to 0..100, one decimal.
struct EvalSummary {
  std::size_t n_samples = 0;
  double node_f1 = 0.0, edge_f1 = 0.0;
  double node_em = 0.0, edge_em = 0.0, program_em = 0.0;
};

// Node overlap is the multiset intersection of canonical node strings,
// edge overlap likewise; F1 = 2tp/(2tp+fp+fn) with the no-counts case
// (both graphs empty) scoring 1.0. EM flags exact multiset equality;
// program_em = node_em && edge_em.
EvalResult evaluate(const LDGraph& gt, const LDGraph& pred);

// Arithmetic means x100 rounded half-up to one decimal. Empty input
// raises UsageError.
EvalSummary aggregate(const std::vector<EvalResult>& results);

// Half-up to one decimal (a hair of slack absorbs binary representation
// of .x5 boundaries).
double round_half_up_1(double v);

}  // namespace ldforge
