#include "ldforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "ldforge/errors.hpp"

namespace ldforge {

namespace {

struct Overlap {
  int tp = 0, fp = 0, fn = 0;
};

// a = ground truth, b = prediction; both sorted.
Overlap overlap(const std::vector<std::string>& a,
                const std::vector<std::string>& b) {
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  Overlap o;
  o.tp = static_cast<int>(common.size());
  o.fp = static_cast<int>(b.size()) - o.tp;
  o.fn = static_cast<int>(a.size()) - o.tp;
  return o;
}

double f1(const Overlap& o) {
  int denom = 2 * o.tp + o.fp + o.fn;
  return denom == 0 ? 1.0 : 2.0 * o.tp / denom;
}

}  // namespace

EvalResult evaluate(const LDGraph& gt, const LDGraph& pred) {
  auto gt_nodes = node_multiset(gt);
  auto pred_nodes = node_multiset(pred);
  auto gt_edges = edge_multiset(gt);
  auto pred_edges = edge_multiset(pred);

  EvalResult r;
  Overlap n = overlap(gt_nodes, pred_nodes);
  Overlap e = overlap(gt_edges, pred_edges);
  r.node_tp = n.tp;
  r.node_fp = n.fp;
  r.node_fn = n.fn;
  r.edge_tp = e.tp;
  r.edge_fp = e.fp;
  r.edge_fn = e.fn;
  r.node_f1 = f1(n);
  r.edge_f1 = f1(e);
  r.node_em = gt_nodes == pred_nodes ? 1 : 0;
  r.edge_em = gt_edges == pred_edges ? 1 : 0;
  r.program_em = r.node_em && r.edge_em ? 1 : 0;
  return r;
}

double round_half_up_1(double v) {
  return std::floor(v * 10.0 + 0.5 + 1e-9) / 10.0;
}

EvalSummary aggregate(const std::vector<EvalResult>& results) {
  if (results.empty()) throw UsageError("aggregate needs at least one result");
  double nf = 0, ef = 0, ne = 0, ee = 0, pe = 0;
  for (const auto& r : results) {
    nf += r.node_f1;
    ef += r.edge_f1;
    ne += r.node_em;
    ee += r.edge_em;
    pe += r.program_em;
  }
  double n = static_cast<double>(results.size());
  EvalSummary s;
  s.n_samples = results.size();
  s.node_f1 = round_half_up_1(nf / n * 100.0);
  s.edge_f1 = round_half_up_1(ef / n * 100.0);
  s.node_em = round_half_up_1(ne / n * 100.0);
  s.edge_em = round_half_up_1(ee / n * 100.0);
  s.program_em = round_half_up_1(pe / n * 100.0);
  return s;
}

}  // namespace ldforge
