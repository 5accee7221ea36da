#include "ldforge/synthgen.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>

#include "ldforge/errors.hpp"
#include "ldforge/rng.hpp"

namespace ldforge {
namespace {

void check_params(const SynthParams& p) {
  if (p.min_nodes < 1 || p.min_nodes > p.max_nodes)
    throw UsageError("synthgen: need 1 <= min_nodes <= max_nodes");
  if (p.branch_probability < 0.0 || p.branch_probability > 1.0 ||
      p.fb_probability < 0.0 || p.fb_probability > 1.0)
    throw UsageError("synthgen: probabilities must be in [0, 1]");
}

ElementType draw_coil(DetRng& rng) {
  switch (rng.draw(4)) {
    case 0: return ElementType::StandardCoil;
    case 1: return ElementType::SetCoil;
    case 2: return ElementType::ResetCoil;
    default: return ElementType::NegatedCoil;
  }
}

ElementType draw_contact(DetRng& rng) {
  std::uint64_t r = rng.draw(8);
  if (r < 5) return ElementType::NormallyOpen;
  if (r < 7) return ElementType::NormallyClosed;
  return ElementType::RisingEdgeContact;
}

const char* kFbKinds[] = {"TON", "TOF", "CTU", "TMR"};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

}  // namespace

LDGraph generate_graph(const SynthParams& params, std::size_t index) {
  check_params(params);
  DetRng rng(mix_seed(params.seed, index));
  const int target =
      params.min_nodes +
      static_cast<int>(rng.draw(
          static_cast<std::uint64_t>(params.max_nodes - params.min_nodes + 1)));

  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  int next_id = 0;

  const ElementType coil_type = draw_coil(rng);
  const std::string coil_name = "Y" + std::to_string(rng.draw(30));
  if (target == 1) {
    nodes.push_back(make_node(next_id++, coil_type, coil_name));
    return canonicalize(std::move(nodes), std::move(edges));
  }

  int budget = target - 1;  // everything but the coil
  bool use_fb = false;
  int n_vars = 0;
  std::string fb_kind;
  if (budget >= 3 && rng.draw_double() < params.fb_probability) {
    use_fb = true;
    fb_kind = kFbKinds[rng.draw(4)];
    // Keep at least one contact: block + vars <= budget - 1.
    n_vars = 1 + static_cast<int>(rng.draw(
                     static_cast<std::uint64_t>(std::min(2, budget - 2))));
    budget -= 1 + n_vars;
  }

  // Series-parallel contact network; a branch stage is always followed
  // by a serial one so consecutive stages never form a node-free join.
  std::vector<int> prev_stage;
  int contact_idx = 0;
  bool prev_was_branch = false;
  while (budget > 0) {
    int width = 1;
    if (budget >= 2 && !prev_was_branch &&
        rng.draw_double() < params.branch_probability)
      width = 2;
    std::vector<int> stage;
    for (int w = 0; w < width; ++w) {
      int id = next_id++;
      nodes.push_back(make_node(id, draw_contact(rng),
                                "X" + std::to_string(contact_idx++)));
      for (int p : prev_stage) edges.push_back({p, id, "Flow"});
      stage.push_back(id);
    }
    budget -= width;
    prev_stage = std::move(stage);
    prev_was_branch = width > 1;
  }

  int tail = -1;  // node the coil hangs off
  if (use_fb) {
    int fb = next_id++;
    nodes.push_back(make_node(fb, ElementType::FunctionBlock, fb_kind + "1",
                              {{"kind", fb_kind}}));
    for (int p : prev_stage) edges.push_back({p, fb, "Enable"});
    for (int v = 0; v < n_vars; ++v) {
      int var = next_id++;
      nodes.push_back(make_node(var, ElementType::Variable,
                                "D" + std::to_string(rng.draw(20))));
      edges.push_back({fb, var, "Input" + std::to_string(v + 1)});
    }
    tail = fb;
  }

  int coil = next_id++;
  nodes.push_back(make_node(coil, coil_type, coil_name));
  if (tail >= 0) {
    edges.push_back({tail, coil, "Output"});
  } else {
    for (int p : prev_stage) edges.push_back({p, coil, "Flow"});
  }
  LDGraph g = canonicalize(std::move(nodes), std::move(edges));
  require_valid(g, "synthgen graph");
  return g;
}

std::vector<Sample> generate_corpus(const SynthParams& params) {
  check_params(params);
  std::vector<Sample> out;
  out.reserve(params.n_samples);
  for (std::size_t i = 0; i < params.n_samples; ++i) {
    LDGraph g = generate_graph(params, i);

    std::vector<std::string> contacts, vars;
    std::string coil, fb_name, fb_kind;
    for (const auto& n : g.nodes) {
      if (is_contact(n.type)) contacts.push_back(n.name);
      else if (is_coil(n.type) && coil.empty()) coil = n.name;
      else if (n.type == ElementType::Variable) vars.push_back(n.name);
      else if (n.type == ElementType::FunctionBlock) {
        fb_name = n.name;
        for (const auto& [k, v] : n.params)
          if (k == "kind") fb_kind = v;
      }
    }

    DetRng prng(mix_seed(params.seed, i) ^ 0x9E3779B97F4A7C15ULL);
    std::string program;
    switch (prng.draw(3)) {
      case 0:
        program = coil + " 출력 제어 프로그램";
        break;
      case 1:
        if (!fb_name.empty())
          program = fb_kind + " 블록 기반 " + coil + " 제어";
        else if (!contacts.empty())
          program = contacts[0] + " 입력 기반 " + coil + " 제어";
        else
          program = coil + " 단독 출력";
        break;
      default:
        program = "Control program for output " + coil;
        break;
    }

    std::string detail;
    if (prng.draw(2) == 0) {
      if (contacts.empty())
        detail = "출력 " + coil + " 을 항상 ON 한다.";
      else
        detail = "입력 " + join(contacts) + " 조건이 만족되면 출력 " + coil +
                 " 이 ON 된다.";
      if (!fb_name.empty())
        detail += " " + fb_name + " 블록은 " + join(vars) + " 값을 사용한다.";
    } else {
      if (contacts.empty())
        detail = "Output " + coil + " is always on.";
      else
        detail = "When inputs " + join(contacts) + " are satisfied, output " +
                 coil + " turns on.";
      if (!fb_name.empty())
        detail += " The " + fb_name + " block uses " + join(vars) + ".";
    }

    char id[32];
    std::snprintf(id, sizeof id, "synth-%06zu", i);
    out.push_back({id, std::move(program), std::move(detail), std::move(g)});
  }
  return out;
}

}  // namespace ldforge
