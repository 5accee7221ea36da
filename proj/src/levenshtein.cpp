#include "ldforge/levenshtein.hpp"

#include <algorithm>
#include <numeric>

namespace ldforge {

std::vector<char32_t> utf8_scalars(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    int extra;
    char32_t cp;
    if (b < 0x80) {
      extra = 0;
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      extra = 1;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      extra = 2;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      extra = 3;
      cp = b & 0x07;
    } else {
      out.push_back(b);  // stray continuation or invalid lead byte
      ++i;
      continue;
    }
    if (i + extra >= s.size()) {
      out.push_back(b);  // truncated sequence
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char c = static_cast<unsigned char>(s[i + k]);
      if ((c & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (c & 0x3F);
    }
    if (!ok) {
      out.push_back(b);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::uint64_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<char32_t> u = utf8_scalars(a);
  std::vector<char32_t> v = utf8_scalars(b);
  if (u.size() < v.size()) std::swap(u, v);  // keep the row short
  if (v.empty()) return u.size();

  std::vector<std::uint64_t> row(v.size() + 1);
  std::iota(row.begin(), row.end(), std::uint64_t{0});
  for (std::size_t i = 1; i <= u.size(); ++i) {
    std::uint64_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= v.size(); ++j) {
      std::uint64_t sub = diag + (u[i - 1] == v[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[v.size()];
}

}  // namespace ldforge
