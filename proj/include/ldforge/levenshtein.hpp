#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ldforge {

// Unit-cost insert/delete/substitute distance over Unicode scalar
// values (not bytes).
std::uint64_t levenshtein(std::string_view a, std::string_view b);

// UTF-8 decoding used by the distance; an invalid byte is taken as its
// own scalar so arbitrary input never throws.
std::vector<char32_t> utf8_scalars(std::string_view s);

}  // namespace ldforge
