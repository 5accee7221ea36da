#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ldforge/bm25.hpp"
#include "ldforge/editops.hpp"
#include "ldforge/exec.hpp"
#include "ldforge/format.hpp"
#include "ldforge/metrics.hpp"
#include "ldforge/sample.hpp"

namespace ldforge {

struct SftRecord {
  std::string sample_id;
  std::string system;
  std::string input;   // retrieved turns + final user turn
  std::string output;  // ground-truth rendering in the chosen format
  std::vector<std::string> retrieved_ids;
};

struct DpoRecord {
  std::string sample_id;
  std::string system;
  std::string input;
  std::string chosen;
  std::string rejected;
  // Provenance of the rejected side.
  double tau = 0.0;
  std::uint64_t seed = 0;  // editing seed that produced it
  std::uint64_t ged = 0;
  std::vector<std::string> retrieved_ids;
};

struct ComplexityBucket {
  int label = 0;  // 1-based
  std::vector<std::string> sample_ids;
  int min_complexity = 0;
  int max_complexity = 0;
};

// ---- corpus files (JSONL, one object per line; see docs/FORMATS.md) ----

std::string corpus_to_jsonl(const std::vector<Sample>& samples,
                            FormatKind format);

// Strict mode collects every per-record problem, then aborts with all of
// them (each naming its line and sample id). Lenient mode skips bad
// records instead; either way the messages land in *errors when given.
std::vector<Sample> load_corpus_text(const std::string& text,
                                     FormatKind format, bool lenient = false,
                                     std::vector<std::string>* errors = nullptr);
std::vector<Sample> load_corpus(const std::string& path, FormatKind format,
                                bool lenient = false,
                                std::vector<std::string>* errors = nullptr);

// Deterministic shuffle by seed, then the first floor(sft_fraction * n)
// samples form the first set. Both halves stay in shuffled order.
std::pair<std::vector<Sample>, std::vector<Sample>> split_corpus(
    const std::vector<Sample>& samples, double sft_fraction,
    std::uint64_t seed);

// BM25 over prompt_of(sample), keyed by sample_id.
Bm25Index build_prompt_index(const std::vector<Sample>& samples,
                             const Bm25Params& params = {});

// Conversation-shaped text: per retrieved (prompt, code) pair, in rank
// order and truncated to k,
//   <|user|>\n{prompt}\n<|assistant|>\n{code}\n
// then the closing turn
//   <|user|>\nBased on the given input, generate the corresponding code: {query}\n
// The system prompt travels in its own record field, not here.
std::string build_augmented_input(
    const std::string& query_prompt,
    const std::vector<std::pair<std::string, std::string>>& retrieved,
    std::size_t k);

// Records come out sorted by sample_id. Retrieval is leave-one-out over
// the same set; every output is verified to re-parse graph_equal to its
// sample before being returned. Failures abort naming the sample.
std::vector<SftRecord> make_sft_records(const std::vector<Sample>& sft_set,
                                        const Bm25Index& index,
                                        FormatKind format, std::size_t k,
                                        ExecMode mode = ExecMode::Serial);

struct DpoBuild {
  std::vector<DpoRecord> records;  // sorted by sample_id
  std::size_t skipped = 0;         // degenerate or un-renderable pairs
};

// Retrieval pool is sft_set (what the first training stage saw), not the
// preference set itself. A sample is skipped (and counted) when every
// candidate is graph_equal to the ground truth or no non-equal candidate
// renders in the target format; in the latter case candidates are tried
// in ascending (ged, seed_index) order first.
DpoBuild make_dpo_records(const std::vector<Sample>& pref_set,
                          const std::vector<Sample>& sft_set,
                          const Bm25Index& index_over_sft, FormatKind format,
                          std::size_t k, const EditConfig& config,
                          ExecMode mode = ExecMode::Serial);

std::string sft_records_to_jsonl(const std::vector<SftRecord>& records);
std::string dpo_records_to_jsonl(const std::vector<DpoRecord>& records);

std::size_t emit_sft_records(const std::vector<Sample>& sft_set,
                             const Bm25Index& index, FormatKind format,
                             std::size_t k, const std::string& out_path,
                             ExecMode mode = ExecMode::Serial);

struct DpoEmitStats {
  std::size_t written = 0;
  std::size_t skipped = 0;
};

DpoEmitStats emit_dpo_records(const std::vector<Sample>& pref_set,
                              const std::vector<Sample>& sft_set,
                              const Bm25Index& index_over_sft,
                              FormatKind format, std::size_t k,
                              const EditConfig& config,
                              const std::string& out_path,
                              ExecMode mode = ExecMode::Serial);

// Sort by (complexity, sample_id), then cut into n_buckets contiguous
// groups whose sizes differ by at most one (the remainder goes to the
// earliest buckets). Labels run 1..n_buckets.
std::vector<ComplexityBucket> bucket_by_complexity(
    const std::vector<Sample>& samples, int n_buckets = 5);

// Drops a leading line starting with ``` and a trailing line starting
// with ``` (after trimming outer whitespace), for model outputs wrapped
// in Markdown code fences.
std::string strip_code_fences(const std::string& text);

struct PredictionOutcome {
  std::vector<std::string> sample_ids;  // ground-truth corpus order
  std::vector<EvalResult> results;      // parallel to sample_ids
  EvalSummary summary;
  std::size_t unparseable = 0;  // predictions the codec rejected
  std::vector<std::string> unparseable_ids;
  std::vector<std::string> missing_ids;  // gt samples with no prediction
  std::vector<std::string> extra_ids;    // prediction ids not in gt
  std::vector<ComplexityBucket> buckets;       // only when n_buckets > 0
  std::vector<EvalSummary> bucket_summaries;   // parallel to buckets
};

// Predictions are JSONL {"sample_id", "code"}; a malformed predictions
// file or a duplicate id is a hard error, while a code string the codec
// rejects just scores all-zero for that sample (counted). Ground-truth
// samples without a prediction also score all-zero and are flagged.
PredictionOutcome evaluate_predictions(const std::string& pred_text,
                                       const std::vector<Sample>& gt,
                                       FormatKind format,
                                       bool strip_fences = false,
                                       int n_buckets = 0,
                                       ExecMode mode = ExecMode::Serial);

std::string evaluation_report_jsonl(const PredictionOutcome& outcome);

}  // namespace ldforge
