#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ldforge {

// Lowercases ASCII letters and splits on anything that is not an ASCII
// alphanumeric or a CJK/Hangul scalar. A CJK/Hangul run is emitted
// whole and then again as character bigrams (a two-char run therefore
// appears twice), since whitespace alone under-segments Korean. Other
// non-ASCII characters act as separators.
std::vector<std::string> tokenize(std::string_view text);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct RankedHit {
  std::string sample_id;
  double score = 0.0;
};

// Okapi BM25 with the non-negative +1-inside-log IDF:
//   IDF(t) = ln((N - df + 0.5) / (df + 0.5) + 1)
//   score  = sum over query tokens (per occurrence) of
//            IDF * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg_len))
// Immutable once built; safe to share across threads.
class Bm25Index {
 public:
  // corpus entries are (sample_id, prompt); ids must be unique.
  static Bm25Index build(
      const std::vector<std::pair<std::string, std::string>>& corpus,
      const Bm25Params& params = {});

  double score(const std::vector<std::string>& query_tokens,
               const std::string& doc_id) const;

  // Every document ranked by (score desc, sample_id asc), truncated to
  // k, with `exclude` (if any) left out entirely.
  std::vector<RankedHit> top_k(
      std::string_view query, std::size_t k,
      const std::optional<std::string>& exclude = std::nullopt) const;

  std::size_t doc_count() const { return ids_.size(); }
  double avg_doc_len() const { return avg_len_; }
  const Bm25Params& params() const { return params_; }
  const std::vector<std::string>& doc_ids() const { return ids_; }
  std::uint64_t doc_len(const std::string& doc_id) const;
  std::uint32_t df(const std::string& term) const;
  std::uint32_t tf(const std::string& doc_id, const std::string& term) const;

  // Line-oriented text form, see docs/FORMATS.md.
  std::string serialize() const;
  static Bm25Index parse(std::string_view text);

 private:
  std::size_t position(const std::string& doc_id) const;
  double doc_score(std::size_t pos,
                   const std::vector<std::string>& query_tokens) const;

  Bm25Params params_;
  std::vector<std::string> ids_;  // corpus order
  std::unordered_map<std::string, std::size_t> id_pos_;
  std::vector<std::unordered_map<std::string, std::uint32_t>> tf_;
  std::vector<std::uint64_t> len_;
  std::unordered_map<std::string, std::uint32_t> df_;
  double avg_len_ = 0.0;
};

}  // namespace ldforge
