#include "ldforge/ged.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "ldforge/levenshtein.hpp"

namespace ldforge {
namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max() / 4;
constexpr int kUnset = -1;
constexpr int kDeleted = -2;

// Per-graph tables: canonical strings, their scalar lengths, and for
// every ordered node pair the indices of the edges between them.
struct Prep {
  std::size_t n = 0;
  std::vector<std::string> ncanon;
  std::vector<std::uint64_t> nlen;
  std::vector<std::string> ecanon;
  std::vector<std::uint64_t> elen;
  std::vector<int> esrc, edst;
  std::vector<std::vector<std::vector<std::uint32_t>>> slot;  // [src][dst]
  std::uint64_t node_total = 0;
  std::uint64_t edge_total = 0;
};

Prep prep_graph(const LDGraph& g) {
  Prep p;
  p.n = g.nodes.size();
  p.ncanon.reserve(p.n);
  p.nlen.reserve(p.n);
  for (const auto& nd : g.nodes) {
    p.ncanon.push_back(canonical_node_string(nd));
    p.nlen.push_back(utf8_scalars(p.ncanon.back()).size());
    p.node_total += p.nlen.back();
  }
  p.slot.assign(p.n, std::vector<std::vector<std::uint32_t>>(p.n));
  for (const auto& e : g.edges) {
    auto idx = static_cast<std::uint32_t>(p.ecanon.size());
    p.ecanon.push_back(canonical_edge_string(g, e));
    p.elen.push_back(utf8_scalars(p.ecanon.back()).size());
    p.edge_total += p.elen.back();
    p.esrc.push_back(e.src);
    p.edst.push_back(e.dst);
    p.slot[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(e.dst)]
        .push_back(idx);
  }
  return p;
}

class GedSearch {
 public:
  GedSearch(const Prep& a, const Prep& b) : a_(a), b_(b) {
    sub_.assign(a_.n, std::vector<std::uint64_t>(b_.n));
    for (std::size_t i = 0; i < a_.n; ++i)
      for (std::size_t v = 0; v < b_.n; ++v)
        sub_[i][v] = levenshtein(a_.ncanon[i], b_.ncanon[v]);
    esub_.assign(a_.ecanon.size(),
                 std::vector<std::uint64_t>(b_.ecanon.size()));
    for (std::size_t e = 0; e < a_.ecanon.size(); ++e)
      for (std::size_t f = 0; f < b_.ecanon.size(); ++f)
        esub_[e][f] = levenshtein(a_.ecanon[e], b_.ecanon[f]);

    // Tables for the beam heuristic: cheapest fate of each remaining
    // source node, and prefix sums of the cheapest insertions.
    best_fate_.assign(a_.n + 1, 0);
    for (std::size_t i = a_.n; i-- > 0;) {
      std::uint64_t m = a_.nlen[i];
      for (std::size_t v = 0; v < b_.n; ++v) m = std::min(m, sub_[i][v]);
      best_fate_[i] = best_fate_[i + 1] + m;
    }
    std::vector<std::uint64_t> ins = b_.nlen;
    std::sort(ins.begin(), ins.end());
    ins_prefix_.assign(ins.size() + 1, 0);
    for (std::size_t v = 0; v < ins.size(); ++v)
      ins_prefix_[v + 1] = ins_prefix_[v] + ins[v];
  }

  std::uint64_t exact() {
    best_ = kInf;
    phi_.assign(a_.n, kUnset);
    used_.assign(b_.n, 0);
    dfs(0, 0, 0);
    return best_;
  }

  std::uint64_t beam(std::size_t width) {
    struct State {
      std::uint64_t g = 0;
      std::vector<int> phi;
      std::vector<char> used;
      std::size_t used_count = 0;
    };
    std::vector<State> frontier(1);
    frontier[0].phi.assign(a_.n, kUnset);
    frontier[0].used.assign(b_.n, 0);
    for (std::size_t i = 0; i < a_.n; ++i) {
      struct Scored {
        std::uint64_t f;
        std::size_t parent;
        int v;
        std::uint64_t g;
      };
      std::vector<Scored> children;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        const State& st = frontier[s];
        auto consider = [&](int v) {
          std::uint64_t g =
              st.g + assign_delta(i, v, st.phi);
          std::size_t uc = st.used_count + (v >= 0 ? 1 : 0);
          children.push_back({g + cheap_h(i + 1, uc), s, v, g});
        };
        for (std::size_t v = 0; v < b_.n; ++v)
          if (!st.used[v]) consider(static_cast<int>(v));
        consider(kDeleted);
      }
      std::sort(children.begin(), children.end(),
                [](const Scored& x, const Scored& y) {
                  return std::tie(x.f, x.parent, x.v) <
                         std::tie(y.f, y.parent, y.v);
                });
      if (children.size() > width) children.resize(width);
      std::vector<State> next;
      next.reserve(children.size());
      for (const Scored& c : children) {
        State st = frontier[c.parent];
        st.g = c.g;
        st.phi[i] = c.v;
        if (c.v >= 0) {
          st.used[static_cast<std::size_t>(c.v)] = 1;
          ++st.used_count;
        }
        next.push_back(std::move(st));
      }
      frontier = std::move(next);
    }
    std::uint64_t best = kInf;
    for (const State& st : frontier)
      best = std::min(best, st.g + terminal_cost(st.used));
    return best;
  }

 private:
  // Cost of deciding node i's fate (map to v, or kDeleted) on top of a
  // prefix mapping: node term plus every edge between i and an already
  // decided node, matched against the image side.
  std::uint64_t assign_delta(std::size_t i, int v,
                             const std::vector<int>& phi) const {
    static const std::vector<std::uint32_t> kEmpty;
    std::uint64_t d =
        v >= 0 ? sub_[i][static_cast<std::size_t>(v)] : a_.nlen[i];
    for (std::size_t j = 0; j < i; ++j) {
      int pj = phi[j];
      bool both = v >= 0 && pj >= 0;
      const auto& sa_out = a_.slot[i][j];
      const auto& sb_out =
          both ? b_.slot[static_cast<std::size_t>(v)]
                        [static_cast<std::size_t>(pj)]
               : kEmpty;
      if (!sa_out.empty() || !sb_out.empty()) d += match_cost(sa_out, sb_out);
      const auto& sa_in = a_.slot[j][i];
      const auto& sb_in =
          both ? b_.slot[static_cast<std::size_t>(pj)]
                        [static_cast<std::size_t>(v)]
               : kEmpty;
      if (!sa_in.empty() || !sb_in.empty()) d += match_cost(sa_in, sb_in);
    }
    return d;
  }

  // Optimal matching of the (tiny) edge sets between one node pair and
  // its image. Unmatched edges pay their full length.
  std::uint64_t match_cost(const std::vector<std::uint32_t>& sa,
                           const std::vector<std::uint32_t>& sb) const {
    if (sa.empty()) {
      std::uint64_t t = 0;
      for (auto f : sb) t += b_.elen[f];
      return t;
    }
    return match_rec(sa, sb, 0, 0);
  }

  std::uint64_t match_rec(const std::vector<std::uint32_t>& sa,
                          const std::vector<std::uint32_t>& sb,
                          std::size_t idx, std::uint32_t mask) const {
    if (idx == sa.size()) {
      std::uint64_t t = 0;
      for (std::size_t j = 0; j < sb.size(); ++j)
        if (!(mask >> j & 1u)) t += b_.elen[sb[j]];
      return t;
    }
    std::uint64_t best = a_.elen[sa[idx]] + match_rec(sa, sb, idx + 1, mask);
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (mask >> j & 1u) continue;
      best = std::min(best, esub_[sa[idx]][sb[j]] +
                                match_rec(sa, sb, idx + 1, mask | (1u << j)));
    }
    return best;
  }

  // Insert every uncovered target node and every target edge with an
  // uncovered endpoint (covered-covered pairs were already matched).
  std::uint64_t terminal_cost(const std::vector<char>& used) const {
    std::uint64_t t = 0;
    for (std::size_t v = 0; v < b_.n; ++v)
      if (!used[v]) t += b_.nlen[v];
    for (std::size_t f = 0; f < b_.ecanon.size(); ++f) {
      if (!used[static_cast<std::size_t>(b_.esrc[f])] ||
          !used[static_cast<std::size_t>(b_.edst[f])])
        t += b_.elen[f];
    }
    return t;
  }

  // Admissible lower bound: every undecided source node costs at least
  // its cheapest fate against the free targets, and any surplus free
  // targets must be inserted.
  std::uint64_t bound(std::size_t i, std::size_t used_count) const {
    std::uint64_t h = 0;
    for (std::size_t u = i; u < a_.n; ++u) {
      std::uint64_t m = a_.nlen[u];
      for (std::size_t v = 0; v < b_.n; ++v)
        if (!used_[v]) m = std::min(m, sub_[u][v]);
      h += m;
    }
    std::size_t free_b = b_.n - used_count;
    std::size_t unproc = a_.n - i;
    if (free_b > unproc) {
      std::vector<std::uint64_t> ins;
      ins.reserve(free_b);
      for (std::size_t v = 0; v < b_.n; ++v)
        if (!used_[v]) ins.push_back(b_.nlen[v]);
      std::sort(ins.begin(), ins.end());
      h += std::accumulate(ins.begin(),
                           ins.begin() +
                               static_cast<std::ptrdiff_t>(free_b - unproc),
                           std::uint64_t{0});
    }
    return h;
  }

  // Beam ordering heuristic; cheaper than bound() and allowed to
  // underestimate or overestimate since it only ranks states.
  std::uint64_t cheap_h(std::size_t i, std::size_t used_count) const {
    std::uint64_t h = best_fate_[i];
    std::size_t free_b = b_.n - used_count;
    std::size_t unproc = a_.n - i;
    if (free_b > unproc) h += ins_prefix_[free_b - unproc];
    return h;
  }

  void dfs(std::size_t i, std::uint64_t g, std::size_t used_count) {
    if (g + bound(i, used_count) >= best_) return;
    if (i == a_.n) {
      best_ = std::min(best_, g + terminal_cost(used_));
      return;
    }
    struct Child {
      std::uint64_t delta;
      int v;
    };
    std::vector<Child> kids;
    kids.reserve(b_.n + 1);
    for (std::size_t v = 0; v < b_.n; ++v)
      if (!used_[v])
        kids.push_back({assign_delta(i, static_cast<int>(v), phi_),
                        static_cast<int>(v)});
    kids.push_back({assign_delta(i, kDeleted, phi_), kDeleted});
    std::sort(kids.begin(), kids.end(), [](const Child& x, const Child& y) {
      return std::tie(x.delta, x.v) < std::tie(y.delta, y.v);
    });
    for (const Child& c : kids) {
      if (g + c.delta >= best_) continue;
      phi_[i] = c.v;
      if (c.v >= 0) used_[static_cast<std::size_t>(c.v)] = 1;
      dfs(i + 1, g + c.delta, used_count + (c.v >= 0 ? 1 : 0));
      if (c.v >= 0) used_[static_cast<std::size_t>(c.v)] = 0;
      phi_[i] = kUnset;
    }
  }

  const Prep& a_;
  const Prep& b_;
  std::vector<std::vector<std::uint64_t>> sub_;
  std::vector<std::vector<std::uint64_t>> esub_;
  std::vector<std::uint64_t> best_fate_;
  std::vector<std::uint64_t> ins_prefix_;
  std::uint64_t best_ = kInf;
  std::vector<int> phi_;
  std::vector<char> used_;
};

}  // namespace

GedResult ged(const LDGraph& a, const LDGraph& b, const GedOptions& opts) {
  // Multiset-equal graphs are the same program under the canonical
  // identity, so they are distance zero even when duplicate-content
  // nodes keep a zero-cost node mapping from existing.
  if (graph_equal(a, b)) return {0, true};
  Prep pa = prep_graph(a);
  Prep pb = prep_graph(b);
  if (pa.n == 0) return {pb.node_total + pb.edge_total, true};
  if (pb.n == 0) return {pa.node_total + pa.edge_total, true};
  GedSearch search(pa, pb);
  if (std::max(pa.n, pb.n) <= opts.exact_limit)
    return {search.exact(), true};
  return {search.beam(std::max<std::size_t>(opts.beam_width, 1)), false};
}

}  // namespace ldforge
