#include "ldforge/format.hpp"

#include "ldforge/errors.hpp"
#include "ldforge/json_codec.hpp"
#include "ldforge/metaprogram_codec.hpp"
#include "ldforge/xml_codec.hpp"

namespace ldforge {

FormatKind format_from(std::string_view name) {
  if (name == "xml") return FormatKind::Xml;
  if (name == "json") return FormatKind::Json;
  if (name == "metaprogram" || name == "meta" || name == "code")
    return FormatKind::Metaprogram;
  throw UsageError("unknown format '" + std::string(name) +
                   "' (expected xml, json, or metaprogram)");
}

std::string_view to_string(FormatKind kind) {
  switch (kind) {
    case FormatKind::Xml:
      return "xml";
    case FormatKind::Json:
      return "json";
    case FormatKind::Metaprogram:
      return "metaprogram";
  }
  return "?";
}

std::string encode(const LDGraph& g, FormatKind kind) {
  switch (kind) {
    case FormatKind::Xml:
      return emit_xml(g);
    case FormatKind::Json:
      return to_json_text(g);
    case FormatKind::Metaprogram:
      return to_metaprogram(g);
  }
  throw UsageError("unreachable format");
}

LDGraph decode(const std::string& text, FormatKind kind, bool lenient) {
  switch (kind) {
    case FormatKind::Xml:
      return parse_xml(text, lenient);
    case FormatKind::Json:
      return parse_json_text(text);
    case FormatKind::Metaprogram:
      return parse_metaprogram(text);
  }
  throw UsageError("unreachable format");
}

}  // namespace ldforge
