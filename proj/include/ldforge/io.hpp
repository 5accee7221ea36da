#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "ldforge/errors.hpp"

namespace ldforge {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write file: " + path);
  out.write(content.data(),
            static_cast<std::streamsize>(content.size()));
  if (!out) throw UsageError("write failed: " + path);
}

}  // namespace ldforge
