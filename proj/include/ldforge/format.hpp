#pragma once

#include <string>
#include <string_view>

#include "ldforge/graph.hpp"

namespace ldforge {

enum class FormatKind { Xml, Json, Metaprogram };

// Accepts "xml", "json", "metaprogram" (also "meta" / "code" aliases);
// anything else raises UsageError.
FormatKind format_from(std::string_view name);
std::string_view to_string(FormatKind kind);

std::string encode(const LDGraph& g, FormatKind kind);
LDGraph decode(const std::string& text, FormatKind kind, bool lenient = false);

}  // namespace ldforge
