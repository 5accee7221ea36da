#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ldforge/graph.hpp"

namespace ldforge {

// One <Element .../> as laid out on the rung grid. Lines live here too;
// they vanish during graph extraction.
struct XmlElement {
  std::string element_type;  // catalog name or HorzLine|VertLine|MultiHorzLine
  int row = 0;
  int col = 0;
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  int length = 1;  // MultiHorzLine span, >= 1

  bool is_line() const {
    return element_type == "HorzLine" || element_type == "VertLine" ||
           element_type == "MultiHorzLine";
  }
};

struct LdXmlDocument {
  std::vector<std::vector<XmlElement>> rungs;
};

// Reads <Program><Rung><Element/>...</Rung></Program>. Strict mode
// rejects unknown attributes; lenient ignores them. Malformed XML
// raises ParseError with line/column; unknown ElementType raises
// SchemaError; coordinate collisions raise SchemaError.
LdXmlDocument parse_xml_document(const std::string& text, bool lenient = false);

// Grid -> graph via the wiring rules (see docs/FORMATS.md):
//   1. consecutive non-line elements on a row separated only by
//      horizontal-line cells are chained left-to-right;
//   2. a VertLine at (r,c) joins rows r and r+1 at the boundary before
//      column c; stacked VertLines merge; the junction connects every
//      nearest element left of the boundary to every nearest element
//      right of it, scanning through line cells and stopping at gaps;
//   3. chain/junction edges type as Enable into a FunctionBlock, else
//      Output out of one, else Flow;
//   4. a Variable k rows directly below a FunctionBlock in the same
//      column attaches as Input<k> (scan passes empty cells, stops at
//      lines and non-Variable elements).
// Node ids are assigned in (rung, col, row) order; a floating VertLine
// (no adjacent element on any joined row) raises WiringError.
LDGraph document_to_graph(const LdXmlDocument& doc);

LDGraph parse_xml(const std::string& text, bool lenient = false);

// Lays the graph out on a grid (one rung per component, stages
// left-to-right, parallel branches on rows below the spine joined by
// VertLines) and serializes it. The result is verified by re-parsing;
// graphs outside the expressible ladder family raise LayoutError.
LdXmlDocument graph_to_document(const LDGraph& g);
std::string emit_document(const LdXmlDocument& doc);
std::string emit_xml(const LDGraph& g);

}  // namespace ldforge
