#include "ldforge/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "ldforge/errors.hpp"
#include "ldforge/levenshtein.hpp"

namespace ldforge {
namespace {

bool is_cjk(char32_t c) {
  return (c >= 0xAC00 && c <= 0xD7A3) ||  // Hangul syllables
         (c >= 0x1100 && c <= 0x11FF) ||  // Hangul jamo
         (c >= 0x3130 && c <= 0x318F) ||  // Hangul compat jamo
         (c >= 0x4E00 && c <= 0x9FFF) ||  // CJK unified
         (c >= 0x3400 && c <= 0x4DBF);    // CJK extension A
}

bool is_ascii_alnum(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

void encode_utf8(char32_t c, std::string& out) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode_range(const std::vector<char32_t>& cps, std::size_t from,
                         std::size_t count) {
  std::string s;
  for (std::size_t i = 0; i < count; ++i) encode_utf8(cps[from + i], s);
  return s;
}

double parse_double_field(const std::string& repr, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(repr, &used);
    if (used != repr.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": bad number '" + repr + "'");
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<char32_t> cps = utf8_scalars(text);
  std::vector<std::string> out;
  std::string ascii;
  std::size_t run_start = 0, run_len = 0;

  auto flush_ascii = [&] {
    if (!ascii.empty()) {
      out.push_back(ascii);
      ascii.clear();
    }
  };
  auto flush_run = [&] {
    if (run_len == 0) return;
    out.push_back(encode_range(cps, run_start, run_len));
    for (std::size_t i = 0; i + 1 < run_len; ++i)
      out.push_back(encode_range(cps, run_start + i, 2));
    run_len = 0;
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (is_ascii_alnum(c)) {
      flush_run();
      if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
      ascii.push_back(static_cast<char>(c));
    } else if (is_cjk(c)) {
      flush_ascii();
      if (run_len == 0) run_start = i;
      ++run_len;
    } else {
      flush_ascii();
      flush_run();
    }
  }
  flush_ascii();
  flush_run();
  return out;
}

Bm25Index Bm25Index::build(
    const std::vector<std::pair<std::string, std::string>>& corpus,
    const Bm25Params& params) {
  if (corpus.empty()) throw UsageError("bm25: empty corpus");
  Bm25Index ix;
  ix.params_ = params;
  std::uint64_t total = 0;
  for (const auto& [id, prompt] : corpus) {
    if (!ix.id_pos_.emplace(id, ix.ids_.size()).second)
      throw UsageError("bm25: duplicate sample id '" + id + "'");
    ix.ids_.push_back(id);
    std::unordered_map<std::string, std::uint32_t> tf;
    std::vector<std::string> toks = tokenize(prompt);
    for (auto& t : toks) ++tf[std::move(t)];
    for (const auto& [term, _] : tf) ++ix.df_[term];
    ix.len_.push_back(toks.size());
    total += toks.size();
    ix.tf_.push_back(std::move(tf));
  }
  ix.avg_len_ =
      static_cast<double>(total) / static_cast<double>(ix.ids_.size());
  return ix;
}

std::size_t Bm25Index::position(const std::string& doc_id) const {
  auto it = id_pos_.find(doc_id);
  if (it == id_pos_.end())
    throw UsageError("bm25: unknown sample id '" + doc_id + "'");
  return it->second;
}

double Bm25Index::doc_score(
    std::size_t pos, const std::vector<std::string>& query_tokens) const {
  const double n = static_cast<double>(ids_.size());
  const double norm_len =
      avg_len_ > 0.0 ? static_cast<double>(len_[pos]) / avg_len_ : 0.0;
  const auto& tf = tf_[pos];
  double s = 0.0;
  for (const auto& t : query_tokens) {
    auto it = tf.find(t);
    if (it == tf.end()) continue;
    auto dfit = df_.find(t);
    double df = static_cast<double>(dfit == df_.end() ? 0 : dfit->second);
    double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
    double f = static_cast<double>(it->second);
    s += idf * f * (params_.k1 + 1.0) /
         (f + params_.k1 * (1.0 - params_.b + params_.b * norm_len));
  }
  return s;
}

double Bm25Index::score(const std::vector<std::string>& query_tokens,
                        const std::string& doc_id) const {
  return doc_score(position(doc_id), query_tokens);
}

std::vector<RankedHit> Bm25Index::top_k(
    std::string_view query, std::size_t k,
    const std::optional<std::string>& exclude) const {
  std::vector<std::string> toks = tokenize(query);
  std::vector<RankedHit> hits;
  hits.reserve(ids_.size());
  for (std::size_t pos = 0; pos < ids_.size(); ++pos) {
    if (exclude && ids_[pos] == *exclude) continue;
    hits.push_back({ids_[pos], doc_score(pos, toks)});
  }
  std::sort(hits.begin(), hits.end(), [](const RankedHit& a,
                                         const RankedHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.sample_id < b.sample_id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

std::uint64_t Bm25Index::doc_len(const std::string& doc_id) const {
  return len_[position(doc_id)];
}

std::uint32_t Bm25Index::df(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

std::uint32_t Bm25Index::tf(const std::string& doc_id,
                            const std::string& term) const {
  const auto& tf = tf_[position(doc_id)];
  auto it = tf.find(term);
  return it == tf.end() ? 0 : it->second;
}

std::string Bm25Index::serialize() const {
  std::string out = "bm25 v1\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "params k1 %.17g b %.17g\n", params_.k1,
                params_.b);
  out += buf;
  for (std::size_t pos = 0; pos < ids_.size(); ++pos) {
    // Terms sorted for byte determinism; the id goes last because it
    // may contain spaces while tokens never do.
    std::map<std::string, std::uint32_t> sorted(tf_[pos].begin(),
                                                tf_[pos].end());
    out += "doc " + std::to_string(len_[pos]) + " " +
           std::to_string(sorted.size());
    for (const auto& [term, count] : sorted)
      out += " " + term + ":" + std::to_string(count);
    out += " " + ids_[pos] + "\n";
  }
  return out;
}

Bm25Index Bm25Index::parse(std::string_view text) {
  Bm25Index ix;
  std::size_t line_no = 0;
  std::size_t at = 0;
  std::uint64_t total = 0;
  bool saw_header = false, saw_params = false;

  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  while (at < text.size()) {
    std::size_t end = text.find('\n', at);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(at, end - at));
    at = end + 1;
    ++line_no;
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t p = 0;
    while (p < line.size()) {
      std::size_t q = line.find(' ', p);
      if (q == std::string::npos) q = line.size();
      fields.push_back(line.substr(p, q - p));
      p = q + 1;
    }

    if (!saw_header) {
      if (line != "bm25 v1") throw fail("expected 'bm25 v1' header");
      saw_header = true;
    } else if (!saw_params) {
      if (fields.size() != 5 || fields[0] != "params" || fields[1] != "k1" ||
          fields[3] != "b")
        throw fail("expected 'params k1 <v> b <v>'");
      ix.params_.k1 = parse_double_field(fields[2], line_no);
      ix.params_.b = parse_double_field(fields[4], line_no);
      saw_params = true;
    } else {
      if (fields.size() < 3 || fields[0] != "doc")
        throw fail("expected 'doc <len> <nterms> ...'");
      std::uint64_t len;
      std::size_t nterms;
      try {
        len = std::stoull(fields[1]);
        nterms = std::stoull(fields[2]);
      } catch (const std::exception&) {
        throw fail("bad doc counts");
      }
      if (fields.size() < 3 + nterms + 1)
        throw fail("doc line truncated");
      std::unordered_map<std::string, std::uint32_t> tf;
      for (std::size_t i = 0; i < nterms; ++i) {
        const std::string& f = fields[3 + i];
        std::size_t colon = f.rfind(':');
        if (colon == std::string::npos || colon == 0)
          throw fail("bad term:count field '" + f + "'");
        std::uint32_t count;
        try {
          count = static_cast<std::uint32_t>(std::stoul(f.substr(colon + 1)));
        } catch (const std::exception&) {
          throw fail("bad term count in '" + f + "'");
        }
        if (count == 0) throw fail("zero term count in '" + f + "'");
        if (!tf.emplace(f.substr(0, colon), count).second)
          throw fail("duplicate term in '" + f + "'");
      }
      // Remainder (which may itself contain spaces) is the id.
      std::string id = fields[3 + nterms];
      for (std::size_t i = 3 + nterms + 1; i < fields.size(); ++i)
        id += " " + fields[i];
      if (!ix.id_pos_.emplace(id, ix.ids_.size()).second)
        throw fail("duplicate sample id '" + id + "'");
      ix.ids_.push_back(id);
      for (const auto& [term, _] : tf) ++ix.df_[term];
      ix.tf_.push_back(std::move(tf));
      ix.len_.push_back(len);
      total += len;
    }
  }
  if (!saw_header || !saw_params) throw ParseError("bm25 index: missing header");
  if (ix.ids_.empty()) throw ParseError("bm25 index: no documents");
  ix.avg_len_ =
      static_cast<double>(total) / static_cast<double>(ix.ids_.size());
  return ix;
}

}  // namespace ldforge
