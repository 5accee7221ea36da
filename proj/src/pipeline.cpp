#include "ldforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ldforge/errors.hpp"
#include "ldforge/io.hpp"
#include "ldforge/prompts.hpp"
#include "ldforge/rng.hpp"

namespace ldforge {

using ordered_json = nlohmann::ordered_json;

namespace {

// Splits into lines, dropping a trailing empty fragment after a final
// newline. Blank lines are kept here (callers skip them) so reported
// line numbers match the file.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string get_string_field(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  if (!it->is_string()) throw ParseError(std::string("field \"") + key + "\" is not a string");
  return it->get<std::string>();
}

// Pointers into `samples` sorted by sample_id; duplicate ids rejected.
std::vector<const Sample*> sorted_by_id(const std::vector<Sample>& samples) {
  std::vector<const Sample*> order;
  order.reserve(samples.size());
  for (const Sample& s : samples) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const Sample* a, const Sample* b) {
    return a->sample_id < b->sample_id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i - 1]->sample_id == order[i]->sample_id)
      throw Error("duplicate sample_id: " + order[i]->sample_id);
  }
  return order;
}

std::unordered_map<std::string, const Sample*> by_id(
    const std::vector<Sample>& samples) {
  std::unordered_map<std::string, const Sample*> map;
  map.reserve(samples.size());
  for (const Sample& s : samples) {
    if (!map.emplace(s.sample_id, &s).second)
      throw Error("duplicate sample_id: " + s.sample_id);
  }
  return map;
}

std::string encode_named(const LDGraph& g, FormatKind format,
                         const std::string& sample_id) {
  try {
    return encode(g, format);
  } catch (const Error& e) {
    throw Error("sample " + sample_id + ": " + e.what());
  }
}

// Retrieval plus turn assembly shared by the SFT and DPO builders.
struct RetrievedInput {
  std::string input;
  std::vector<std::string> ids;
};

RetrievedInput retrieve_and_build(const Sample& s, const Bm25Index& index,
                                  const std::unordered_map<std::string, const Sample*>& pool,
                                  FormatKind format, std::size_t k) {
  std::vector<RankedHit> hits = index.top_k(prompt_of(s), k, s.sample_id);
  std::vector<std::pair<std::string, std::string>> pairs;
  RetrievedInput out;
  pairs.reserve(hits.size());
  out.ids.reserve(hits.size());
  for (const RankedHit& h : hits) {
    auto it = pool.find(h.sample_id);
    if (it == pool.end())
      throw Error("retrieved id not in pool: " + h.sample_id);
    pairs.emplace_back(prompt_of(*it->second),
                       encode_named(it->second->graph, format, h.sample_id));
    out.ids.push_back(h.sample_id);
  }
  out.input = build_augmented_input(prompt_of(s), pairs, k);
  return out;
}

ordered_json summary_json(const EvalSummary& s) {
  ordered_json j;
  j["n_samples"] = s.n_samples;
  j["node_f1"] = s.node_f1;
  j["edge_f1"] = s.edge_f1;
  j["node_em"] = s.node_em;
  j["edge_em"] = s.edge_em;
  j["program_em"] = s.program_em;
  return j;
}

}  // namespace

std::string corpus_to_jsonl(const std::vector<Sample>& samples,
                            FormatKind format) {
  std::string out;
  for (const Sample& s : samples) {
    ordered_json j;
    j["sample_id"] = s.sample_id;
    j["program_description"] = s.program_description;
    j["detailed_description"] = s.detailed_description;
    j["code"] = encode_named(s.graph, format, s.sample_id);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Sample> load_corpus_text(const std::string& text,
                                     FormatKind format, bool lenient,
                                     std::vector<std::string>* errors) {
  std::vector<Sample> samples;
  std::vector<std::string> problems;
  std::unordered_set<std::string> seen;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::string where = "line " + std::to_string(i + 1);
    std::string id;
    try {
      ordered_json j = ordered_json::parse(lines[i]);
      if (!j.is_object()) throw ParseError("record is not an object");
      id = get_string_field(j, "sample_id");
      if (id.empty()) throw ParseError("empty sample_id");
      Sample s;
      s.sample_id = id;
      s.program_description = get_string_field(j, "program_description");
      s.detailed_description = get_string_field(j, "detailed_description");
      if (s.program_description.empty() && s.detailed_description.empty())
        throw ParseError("empty prompt");
      std::string code = get_string_field(j, "code");
      s.graph = decode(code, format);
      if (!seen.insert(id).second) throw ParseError("duplicate sample_id");
      samples.push_back(std::move(s));
    } catch (const ordered_json::exception& e) {
      problems.push_back(where + ": " + e.what());
    } catch (const Error& e) {
      problems.push_back(where + (id.empty() ? "" : " (" + id + ")") + ": " +
                         e.what());
    }
  }
  if (errors) *errors = problems;
  if (!problems.empty() && !lenient) {
    std::string msg = "corpus load failed, " +
                      std::to_string(problems.size()) + " bad record(s):";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ParseError(msg);
  }
  return samples;
}

std::vector<Sample> load_corpus(const std::string& path, FormatKind format,
                                bool lenient,
                                std::vector<std::string>* errors) {
  return load_corpus_text(read_file(path), format, lenient, errors);
}

std::pair<std::vector<Sample>, std::vector<Sample>> split_corpus(
    const std::vector<Sample>& samples, double sft_fraction,
    std::uint64_t seed) {
  if (!(sft_fraction > 0.0 && sft_fraction < 1.0))
    throw UsageError("sft fraction must be strictly between 0 and 1");
  const std::size_t n = samples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  DetRng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    std::swap(order[i], order[i + rng.draw(n - i)]);
  // The epsilon keeps products like 0.7 * 10 from flooring below their
  // mathematical value.
  auto n_sft = static_cast<std::size_t>(
      std::floor(sft_fraction * static_cast<double>(n) + 1e-9));
  std::pair<std::vector<Sample>, std::vector<Sample>> out;
  out.first.reserve(n_sft);
  out.second.reserve(n - n_sft);
  for (std::size_t i = 0; i < n; ++i)
    (i < n_sft ? out.first : out.second).push_back(samples[order[i]]);
  return out;
}

Bm25Index build_prompt_index(const std::vector<Sample>& samples,
                             const Bm25Params& params) {
  std::vector<std::pair<std::string, std::string>> corpus;
  corpus.reserve(samples.size());
  for (const Sample& s : samples)
    corpus.emplace_back(s.sample_id, prompt_of(s));
  return Bm25Index::build(corpus, params);
}

std::string build_augmented_input(
    const std::string& query_prompt,
    const std::vector<std::pair<std::string, std::string>>& retrieved,
    std::size_t k) {
  std::string out;
  const std::size_t used = std::min(k, retrieved.size());
  for (std::size_t i = 0; i < used; ++i) {
    out += "<|user|>\n";
    out += retrieved[i].first;
    out += "\n<|assistant|>\n";
    out += retrieved[i].second;
    out += '\n';
  }
  out += "<|user|>\n";
  out += final_user_turn(query_prompt);
  out += '\n';
  return out;
}

std::vector<SftRecord> make_sft_records(const std::vector<Sample>& sft_set,
                                        const Bm25Index& index,
                                        FormatKind format, std::size_t k,
                                        ExecMode mode) {
  std::vector<const Sample*> order = sorted_by_id(sft_set);
  std::unordered_map<std::string, const Sample*> pool = by_id(sft_set);
  std::vector<SftRecord> out(order.size());
  for_each_index(order.size(), mode, [&](std::size_t i) {
    const Sample& s = *order[i];
    RetrievedInput ri = retrieve_and_build(s, index, pool, format, k);
    SftRecord rec;
    rec.sample_id = s.sample_id;
    rec.system = std::string(system_prompt(format));
    rec.input = std::move(ri.input);
    rec.output = encode_named(s.graph, format, s.sample_id);
    LDGraph back = decode(rec.output, format);
    if (!graph_equal(back, s.graph))
      throw Error("sample " + s.sample_id +
                  ": emitted output does not round-trip");
    rec.retrieved_ids = std::move(ri.ids);
    out[i] = std::move(rec);
  });
  return out;
}

DpoBuild make_dpo_records(const std::vector<Sample>& pref_set,
                          const std::vector<Sample>& sft_set,
                          const Bm25Index& index_over_sft, FormatKind format,
                          std::size_t k, const EditConfig& config,
                          ExecMode mode) {
  std::vector<const Sample*> order = sorted_by_id(pref_set);
  std::unordered_map<std::string, const Sample*> pool = by_id(sft_set);
  std::vector<std::optional<DpoRecord>> slots(order.size());
  for_each_index(order.size(), mode, [&](std::size_t i) {
    const Sample& s = *order[i];
    std::string chosen_text;
    try {
      chosen_text = encode(s.graph, format);
    } catch (const Error&) {
      return;  // ground truth not renderable in this format; skip
    }
    std::vector<NegativeCandidate> candidates =
        generate_negatives(s.graph, config);
    try {
      (void)select_hard_negative(s.graph, candidates, config.tau);
    } catch (const DegeneratePairError&) {
      return;  // every candidate collapsed onto the ground truth
    }
    // The selected candidate is the (ged, seed_index) minimum, but a
    // graph can fall outside what the target format can render; walk the
    // candidates in ascending order until one encodes.
    std::vector<const NegativeCandidate*> ranked;
    for (const NegativeCandidate& c : candidates)
      if (!graph_equal(c.graph, s.graph)) ranked.push_back(&c);
    std::sort(ranked.begin(), ranked.end(),
              [](const NegativeCandidate* a, const NegativeCandidate* b) {
                return std::tie(a->ged_to_gt, a->seed_index) <
                       std::tie(b->ged_to_gt, b->seed_index);
              });
    const NegativeCandidate* picked = nullptr;
    std::string rejected_text;
    for (const NegativeCandidate* c : ranked) {
      try {
        rejected_text = encode(c->graph, format);
        picked = c;
        break;
      } catch (const Error&) {
        continue;
      }
    }
    if (!picked) return;  // nothing renderable; skip and count
    DpoRecord rec;
    rec.sample_id = s.sample_id;
    rec.system = std::string(system_prompt(format));
    RetrievedInput ri = retrieve_and_build(s, index_over_sft, pool, format, k);
    rec.input = std::move(ri.input);
    rec.chosen = std::move(chosen_text);
    rec.rejected = std::move(rejected_text);
    if (rec.chosen == rec.rejected)
      throw Error("sample " + s.sample_id + ": chosen equals rejected");
    rec.tau = config.tau;
    rec.seed = picked->seed_value;
    rec.ged = picked->ged_to_gt;
    rec.retrieved_ids = std::move(ri.ids);
    slots[i] = std::move(rec);
  });
  DpoBuild build;
  for (std::optional<DpoRecord>& slot : slots) {
    if (slot)
      build.records.push_back(std::move(*slot));
    else
      ++build.skipped;
  }
  return build;
}

std::string sft_records_to_jsonl(const std::vector<SftRecord>& records) {
  std::string out;
  for (const SftRecord& r : records) {
    ordered_json j;
    j["sample_id"] = r.sample_id;
    j["system"] = r.system;
    j["input"] = r.input;
    j["output"] = r.output;
    j["retrieved_ids"] = r.retrieved_ids;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string dpo_records_to_jsonl(const std::vector<DpoRecord>& records) {
  std::string out;
  for (const DpoRecord& r : records) {
    ordered_json j;
    j["sample_id"] = r.sample_id;
    j["system"] = r.system;
    j["input"] = r.input;
    j["chosen"] = r.chosen;
    j["rejected"] = r.rejected;
    ordered_json prov;
    prov["tau"] = r.tau;
    prov["seed"] = r.seed;
    prov["ged"] = r.ged;
    j["provenance"] = prov;
    j["retrieved_ids"] = r.retrieved_ids;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::size_t emit_sft_records(const std::vector<Sample>& sft_set,
                             const Bm25Index& index, FormatKind format,
                             std::size_t k, const std::string& out_path,
                             ExecMode mode) {
  std::vector<SftRecord> records =
      make_sft_records(sft_set, index, format, k, mode);
  write_file(out_path, sft_records_to_jsonl(records));
  return records.size();
}

DpoEmitStats emit_dpo_records(const std::vector<Sample>& pref_set,
                              const std::vector<Sample>& sft_set,
                              const Bm25Index& index_over_sft,
                              FormatKind format, std::size_t k,
                              const EditConfig& config,
                              const std::string& out_path, ExecMode mode) {
  DpoBuild build = make_dpo_records(pref_set, sft_set, index_over_sft, format,
                                    k, config, mode);
  write_file(out_path, dpo_records_to_jsonl(build.records));
  return {build.records.size(), build.skipped};
}

std::vector<ComplexityBucket> bucket_by_complexity(
    const std::vector<Sample>& samples, int n_buckets) {
  if (n_buckets < 1) throw UsageError("bucket count must be at least 1");
  if (samples.size() < static_cast<std::size_t>(n_buckets))
    throw UsageError("fewer samples than buckets");
  std::vector<std::pair<int, const Sample*>> order;
  order.reserve(samples.size());
  for (const Sample& s : samples) order.emplace_back(complexity(s.graph), &s);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.first, a.second->sample_id) <
                     std::tie(b.first, b.second->sample_id);
            });
  const std::size_t n = order.size();
  const std::size_t nb = static_cast<std::size_t>(n_buckets);
  const std::size_t base = n / nb;
  const std::size_t rem = n % nb;
  std::vector<ComplexityBucket> buckets;
  buckets.reserve(nb);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t size = base + (i < rem ? 1 : 0);
    ComplexityBucket bucket;
    bucket.label = static_cast<int>(i) + 1;
    bucket.min_complexity = order[pos].first;
    bucket.max_complexity = order[pos + size - 1].first;
    for (std::size_t j = 0; j < size; ++j)
      bucket.sample_ids.push_back(order[pos + j].second->sample_id);
    pos += size;
    buckets.push_back(std::move(bucket));
  }
  return buckets;
}

std::string strip_code_fences(const std::string& text) {
  const char* ws = " \t\r\n";
  std::size_t b = text.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  std::size_t e = text.find_last_not_of(ws);
  std::string t = text.substr(b, e - b + 1);
  if (t.rfind("```", 0) == 0) {
    std::size_t nl = t.find('\n');
    t = (nl == std::string::npos) ? std::string() : t.substr(nl + 1);
  }
  if (!t.empty()) {
    std::size_t last_nl = t.find_last_of('\n');
    std::string last =
        (last_nl == std::string::npos) ? t : t.substr(last_nl + 1);
    if (last.rfind("```", 0) == 0)
      t = (last_nl == std::string::npos) ? std::string() : t.substr(0, last_nl);
  }
  return t;
}

PredictionOutcome evaluate_predictions(const std::string& pred_text,
                                       const std::vector<Sample>& gt,
                                       FormatKind format, bool strip_fences,
                                       int n_buckets, ExecMode mode) {
  std::unordered_map<std::string, std::string> preds;
  std::vector<std::string> pred_order;  // first-seen, for extra_ids
  std::vector<std::string> lines = split_lines(pred_text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::string where = "predictions line " + std::to_string(i + 1);
    try {
      ordered_json j = ordered_json::parse(lines[i]);
      if (!j.is_object()) throw ParseError("record is not an object");
      std::string id = get_string_field(j, "sample_id");
      if (id.empty()) throw ParseError("empty sample_id");
      std::string code = get_string_field(j, "code");
      if (!preds.emplace(id, std::move(code)).second)
        throw ParseError("duplicate sample_id \"" + id + "\"");
      pred_order.push_back(std::move(id));
    } catch (const ordered_json::exception& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }

  PredictionOutcome out;
  out.sample_ids.reserve(gt.size());
  for (const Sample& s : gt) out.sample_ids.push_back(s.sample_id);
  out.results.resize(gt.size());
  std::vector<std::uint8_t> missing(gt.size(), 0), bad(gt.size(), 0);
  for_each_index(gt.size(), mode, [&](std::size_t i) {
    auto it = preds.find(gt[i].sample_id);
    if (it == preds.end()) {
      missing[i] = 1;  // all-zero result stands in for the absent output
      return;
    }
    const std::string code =
        strip_fences ? strip_code_fences(it->second) : it->second;
    try {
      LDGraph g = decode(code, format);
      out.results[i] = evaluate(gt[i].graph, g);
    } catch (const Error&) {
      bad[i] = 1;  // scored all-zero
    }
  });
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (missing[i]) out.missing_ids.push_back(gt[i].sample_id);
    if (bad[i]) out.unparseable_ids.push_back(gt[i].sample_id);
  }
  out.unparseable = out.unparseable_ids.size();

  std::unordered_set<std::string> gt_ids(out.sample_ids.begin(),
                                         out.sample_ids.end());
  for (const std::string& id : pred_order)
    if (!gt_ids.count(id)) out.extra_ids.push_back(id);
  std::sort(out.extra_ids.begin(), out.extra_ids.end());

  out.summary = aggregate(out.results);

  if (n_buckets > 0) {
    out.buckets = bucket_by_complexity(gt, n_buckets);
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < out.sample_ids.size(); ++i)
      index_of.emplace(out.sample_ids[i], i);
    for (const ComplexityBucket& bucket : out.buckets) {
      std::vector<EvalResult> member_results;
      member_results.reserve(bucket.sample_ids.size());
      for (const std::string& id : bucket.sample_ids)
        member_results.push_back(out.results[index_of.at(id)]);
      out.bucket_summaries.push_back(aggregate(member_results));
    }
  }
  return out;
}

std::string evaluation_report_jsonl(const PredictionOutcome& outcome) {
  std::string out;
  std::unordered_set<std::string> missing(outcome.missing_ids.begin(),
                                          outcome.missing_ids.end());
  std::unordered_set<std::string> bad(outcome.unparseable_ids.begin(),
                                      outcome.unparseable_ids.end());
  for (std::size_t i = 0; i < outcome.sample_ids.size(); ++i) {
    const EvalResult& r = outcome.results[i];
    ordered_json j;
    j["sample_id"] = outcome.sample_ids[i];
    j["node_tp"] = r.node_tp;
    j["node_fp"] = r.node_fp;
    j["node_fn"] = r.node_fn;
    j["edge_tp"] = r.edge_tp;
    j["edge_fp"] = r.edge_fp;
    j["edge_fn"] = r.edge_fn;
    j["node_f1"] = r.node_f1;
    j["edge_f1"] = r.edge_f1;
    j["node_em"] = r.node_em;
    j["edge_em"] = r.edge_em;
    j["program_em"] = r.program_em;
    j["missing"] = missing.count(outcome.sample_ids[i]) > 0;
    j["unparseable"] = bad.count(outcome.sample_ids[i]) > 0;
    out += j.dump();
    out += '\n';
  }
  ordered_json s;
  s["summary"] = summary_json(outcome.summary);
  s["summary"]["unparseable"] = outcome.unparseable;
  s["summary"]["missing"] = outcome.missing_ids.size();
  s["summary"]["extra_ids"] = outcome.extra_ids;
  out += s.dump();
  out += '\n';
  for (std::size_t i = 0; i < outcome.buckets.size(); ++i) {
    ordered_json inner;
    inner["label"] = outcome.buckets[i].label;
    inner["size"] = outcome.buckets[i].sample_ids.size();
    inner["min_complexity"] = outcome.buckets[i].min_complexity;
    inner["max_complexity"] = outcome.buckets[i].max_complexity;
    const ordered_json bucket_summary =
        summary_json(outcome.bucket_summaries[i]);
    for (auto it = bucket_summary.begin(); it != bucket_summary.end(); ++it)
      inner[it.key()] = it.value();
    ordered_json b;
    b["bucket"] = std::move(inner);
    out += b.dump();
    out += '\n';
  }
  return out;
}

}  // namespace ldforge
