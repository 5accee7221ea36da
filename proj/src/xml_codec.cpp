#include "ldforge/xml_codec.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "ldforge/errors.hpp"

namespace ldforge {

namespace {

// ---------------------------------------------------------------------------
// Minimal XML reader (elements, attributes, comments, prolog) with
// line/column tracking. The schema is three levels deep, so this stays
// deliberately small; anything outside the subset is a ParseError.
// ---------------------------------------------------------------------------

struct XmlAttr {
  std::string name;
  std::string value;
  int line = 0, col = 0;
};

struct RawElement {
  std::string tag;
  std::vector<XmlAttr> attrs;
  std::vector<RawElement> children;
  int line = 0, col = 0;
};

class XmlReader {
 public:
  explicit XmlReader(const std::string& text) : s_(text) {}

  RawElement parse() {
    skip_misc();
    if (eof()) fail("expected root element");
    RawElement root = parse_element();
    skip_misc();
    if (!eof()) fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("malformed XML: " + msg, line_, col_);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  bool starts_with(std::string_view t) const {
    return s_.compare(pos_, t.size(), t) == 0;
  }

  char advance() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void expect(char c) {
    if (eof() || peek() != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' ||
                      peek() == '\n'))
      advance();
  }

  // Whitespace, comments, processing instructions, doctype.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        while (!eof() && !starts_with("-->")) advance();
        if (eof()) fail("unterminated comment");
        advance();
        advance();
        advance();
      } else if (starts_with("<?")) {
        while (!eof() && !starts_with("?>")) advance();
        if (eof()) fail("unterminated processing instruction");
        advance();
        advance();
      } else if (starts_with("<!")) {
        while (!eof() && peek() != '>') advance();
        if (eof()) fail("unterminated declaration");
        advance();
      } else {
        return;
      }
    }
  }

  static bool name_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
           c == ':';
  }
  static bool name_char(char c) {
    return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !name_start(peek())) fail("expected a name");
    std::string out;
    while (!eof() && name_char(peek())) out += advance();
    return out;
  }

  std::string decode_entity() {
    // called after '&'
    std::string ent;
    while (!eof() && peek() != ';') ent += advance();
    if (eof()) fail("unterminated entity");
    advance();  // ';'
    if (ent == "amp") return "&";
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (!ent.empty() && ent[0] == '#') {
      int base = 10;
      std::string digits = ent.substr(1);
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits = digits.substr(1);
      }
      unsigned cp = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     cp, base);
      if (ec != std::errc() || p != digits.data() + digits.size() || cp == 0 ||
          cp > 0x10FFFF)
        fail("bad character reference '&" + ent + ";'");
      // UTF-8 encode.
      std::string out;
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      }
      return out;
    }
    fail("unknown entity '&" + ent + ";'");
  }

  std::string parse_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted value");
    char quote = advance();
    std::string out;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        advance();
        out += decode_entity();
      } else {
        out += advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return out;
  }

  RawElement parse_element() {
    RawElement el;
    el.line = line_;
    el.col = col_;
    expect('<');
    el.tag = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/') {
        advance();
        expect('>');
        return el;  // self-closing
      }
      if (peek() == '>') {
        advance();
        break;
      }
      XmlAttr a;
      a.line = line_;
      a.col = col_;
      a.name = parse_name();
      skip_ws();
      expect('=');
      skip_ws();
      a.value = parse_attr_value();
      for (const auto& prev : el.attrs)
        if (prev.name == a.name)
          throw ParseError("malformed XML: duplicate attribute '" + a.name + "'",
                           a.line, a.col);
      el.attrs.push_back(std::move(a));
    }
    // children / end tag
    for (;;) {
      skip_misc();
      if (eof()) fail("unterminated element <" + el.tag + ">");
      if (starts_with("</")) {
        advance();
        advance();
        std::string closing = parse_name();
        if (closing != el.tag)
          fail("mismatched end tag </" + closing + "> for <" + el.tag + ">");
        skip_ws();
        expect('>');
        return el;
      }
      if (peek() == '<') {
        el.children.push_back(parse_element());
      } else {
        fail("unexpected text content");
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Schema layer
// ---------------------------------------------------------------------------

bool known_line_type(const std::string& t) {
  return t == "HorzLine" || t == "VertLine" || t == "MultiHorzLine";
}

int parse_nonneg_int(const XmlAttr& a, const char* what) {
  int v = 0;
  auto [p, ec] =
      std::from_chars(a.value.data(), a.value.data() + a.value.size(), v);
  if (ec != std::errc() || p != a.value.data() + a.value.size() || v < 0)
    throw SchemaError(std::string(what) + " attribute must be a non-negative "
                      "integer, got '" + a.value + "'");
  return v;
}

XmlElement element_from_raw(const RawElement& raw, bool lenient) {
  XmlElement el;
  bool have_type = false, have_row = false, have_col = false, have_length = false;
  for (const auto& a : raw.attrs) {
    if (a.name == "ElementType") {
      el.element_type = a.value;
      have_type = true;
    } else if (a.name == "Row") {
      el.row = parse_nonneg_int(a, "Row");
      have_row = true;
    } else if (a.name == "Col") {
      el.col = parse_nonneg_int(a, "Col");
      have_col = true;
    } else if (a.name == "Name") {
      el.name = a.value;
    } else if (a.name == "Length") {
      el.length = parse_nonneg_int(a, "Length");
      have_length = true;
      if (el.length < 1)
        throw SchemaError("Length must be >= 1, got '" + a.value + "'");
    } else if (a.name.rfind("Param.", 0) == 0) {
      std::string key = a.name.substr(6);
      if (key.empty()) throw SchemaError("empty Param key");
      el.params.emplace_back(key, a.value);
    } else if (!lenient) {
      throw SchemaError("unknown attribute '" + a.name + "' on Element (line " +
                        std::to_string(a.line) + ")");
    }
  }
  if (!have_type) throw SchemaError("Element missing ElementType");
  if (!have_row || !have_col)
    throw SchemaError("Element '" + el.element_type + "' missing Row/Col");
  if (!known_line_type(el.element_type) &&
      !element_type_from(el.element_type).has_value())
    throw SchemaError("unknown ElementType '" + el.element_type + "'");
  if (!lenient) {
    if (have_length && el.element_type != "MultiHorzLine")
      throw SchemaError("Length only allowed on MultiHorzLine");
    if (el.is_line() && !el.name.empty())
      throw SchemaError("Name not allowed on " + el.element_type);
    if (el.is_line() && !el.params.empty())
      throw SchemaError("Param attributes not allowed on " + el.element_type);
  }
  std::sort(el.params.begin(), el.params.end());
  for (std::size_t i = 1; i < el.params.size(); ++i)
    if (el.params[i - 1].first == el.params[i].first)
      throw SchemaError("duplicate Param key '" + el.params[i].first + "'");
  return el;
}

}  // namespace

LdXmlDocument parse_xml_document(const std::string& text, bool lenient) {
  RawElement root = XmlReader(text).parse();
  if (root.tag != "Program")
    throw SchemaError("root element must be <Program>, got <" + root.tag + ">");
  if (!lenient && !root.attrs.empty())
    throw SchemaError("unexpected attribute on <Program>");
  LdXmlDocument doc;
  for (const auto& rung_el : root.children) {
    if (rung_el.tag != "Rung") {
      if (lenient) continue;
      throw SchemaError("unexpected <" + rung_el.tag + "> under <Program>");
    }
    if (!lenient && !rung_el.attrs.empty())
      throw SchemaError("unexpected attribute on <Rung>");
    std::vector<XmlElement> rung;
    for (const auto& e : rung_el.children) {
      if (e.tag != "Element") {
        if (lenient) continue;
        throw SchemaError("unexpected <" + e.tag + "> under <Rung>");
      }
      if (!lenient && !e.children.empty())
        throw SchemaError("<Element> must be empty");
      rung.push_back(element_from_raw(e, lenient));
    }
    doc.rungs.push_back(std::move(rung));
  }

  // Grid occupancy must be collision-free (MultiHorzLine spans count).
  for (std::size_t r = 0; r < doc.rungs.size(); ++r) {
    std::set<std::pair<int, int>> occupied;
    for (const auto& el : doc.rungs[r]) {
      int span = el.element_type == "MultiHorzLine" ? el.length : 1;
      for (int i = 0; i < span; ++i)
        if (!occupied.emplace(el.row, el.col + i).second)
          throw SchemaError("rung " + std::to_string(r) +
                            ": cell collision at row " + std::to_string(el.row) +
                            ", col " + std::to_string(el.col + i));
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Grid -> graph
// ---------------------------------------------------------------------------

namespace {

struct GridCell {
  const XmlElement* el = nullptr;  // owner (for MultiHorzLine: the line)
  bool horz = false;
  bool vert = false;
  bool node = false;
};

std::string infer_flow_type(const LDNode& src, const LDNode& dst) {
  if (dst.type == ElementType::FunctionBlock) return "Enable";
  if (src.type == ElementType::FunctionBlock) return "Output";
  return "Flow";
}

}  // namespace

LDGraph document_to_graph(const LdXmlDocument& doc) {
  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  std::set<std::tuple<int, int, std::string>> edge_set;
  auto add_edge = [&](int s, int d, const std::string& t) {
    if (edge_set.emplace(s, d, t).second) edges.push_back({s, d, t});
  };

  int next_id = 0;
  for (std::size_t rung_idx = 0; rung_idx < doc.rungs.size(); ++rung_idx) {
    const auto& rung = doc.rungs[rung_idx];

    std::map<std::pair<int, int>, GridCell> grid;
    int max_row = 0, max_col = 0;
    for (const auto& el : rung) {
      max_row = std::max(max_row, el.row);
      if (el.element_type == "MultiHorzLine") {
        for (int i = 0; i < el.length; ++i) {
          grid[{el.row, el.col + i}] = {&el, true, false, false};
          max_col = std::max(max_col, el.col + i);
        }
      } else if (el.element_type == "HorzLine") {
        grid[{el.row, el.col}] = {&el, true, false, false};
        max_col = std::max(max_col, el.col);
      } else if (el.element_type == "VertLine") {
        grid[{el.row, el.col}] = {&el, false, true, false};
        max_col = std::max(max_col, el.col);
      } else {
        grid[{el.row, el.col}] = {&el, false, false, true};
        max_col = std::max(max_col, el.col);
      }
    }

    // Nodes in (col, row) order; power flows along columns and
    // FunctionBlock inputs extend down a column, so this order makes
    // every inferred edge point to a strictly larger id.
    std::vector<const XmlElement*> node_els;
    for (const auto& el : rung)
      if (!el.is_line()) node_els.push_back(&el);
    std::sort(node_els.begin(), node_els.end(),
              [](const XmlElement* a, const XmlElement* b) {
                return std::tie(a->col, a->row) < std::tie(b->col, b->row);
              });
    std::map<const XmlElement*, int> id_of;
    for (const auto* el : node_els) {
      auto t = element_type_from(el->element_type);
      nodes.push_back(make_node(next_id, *t, el->name, el->params));
      id_of[el] = next_id++;
    }

    auto cell = [&](int r, int c) -> const GridCell* {
      auto it = grid.find({r, c});
      return it == grid.end() ? nullptr : &it->second;
    };

    // Rule 1: row chains across horizontal-line cells.
    std::map<int, std::vector<const XmlElement*>> by_row;
    for (const auto* el : node_els) by_row[el->row].push_back(el);
    for (auto& [row, els] : by_row) {
      std::sort(els.begin(), els.end(),
                [](const XmlElement* a, const XmlElement* b) {
                  return a->col < b->col;
                });
      for (std::size_t i = 1; i < els.size(); ++i) {
        const auto* a = els[i - 1];
        const auto* b = els[i];
        bool wired = true;
        for (int c = a->col + 1; c < b->col && wired; ++c) {
          const GridCell* g = cell(row, c);
          wired = g != nullptr && g->horz;
        }
        if (wired && b->col > a->col) {
          const LDNode& sn = nodes[static_cast<std::size_t>(id_of[a])];
          const LDNode& dn = nodes[static_cast<std::size_t>(id_of[b])];
          add_edge(id_of[a], id_of[b], infer_flow_type(sn, dn));
        }
      }
    }

    // Rule 2: VertLine junctions. A VertLine at (r,c) joins rows r and
    // r+1 at the boundary before column c; stacked lines merge. Scans
    // walk over line cells and stop at gaps.
    std::map<int, std::vector<const XmlElement*>> verts_by_col;
    for (const auto& el : rung)
      if (el.element_type == "VertLine") verts_by_col[el.col].push_back(&el);
    for (auto& [c, vls] : verts_by_col) {
      std::sort(vls.begin(), vls.end(),
                [](const XmlElement* a, const XmlElement* b) {
                  return a->row < b->row;
                });
      std::size_t i = 0;
      while (i < vls.size()) {
        std::size_t j = i;
        while (j + 1 < vls.size() && vls[j + 1]->row == vls[j]->row + 1) ++j;
        int row_lo = vls[i]->row;
        int row_hi = vls[j]->row + 1;  // joined span inclusive

        std::vector<int> lefts, rights;
        for (int r = row_lo; r <= row_hi; ++r) {
          for (int cc = c - 1; cc >= 0; --cc) {
            const GridCell* g = cell(r, cc);
            if (!g) break;
            if (g->node) {
              lefts.push_back(id_of[g->el]);
              break;
            }
            if (!g->horz && !g->vert) break;
          }
          for (int cc = c; cc <= max_col; ++cc) {
            const GridCell* g = cell(r, cc);
            if (!g) break;
            if (g->node) {
              rights.push_back(id_of[g->el]);
              break;
            }
            if (!g->horz && !g->vert) break;
          }
        }
        if (lefts.empty() && rights.empty())
          throw WiringError("rung " + std::to_string(rung_idx) +
                            ": floating VertLine at row " +
                            std::to_string(vls[i]->row) + ", col " +
                            std::to_string(c));
        for (int s : lefts)
          for (int d : rights) {
            const LDNode& sn = nodes[static_cast<std::size_t>(s)];
            const LDNode& dn = nodes[static_cast<std::size_t>(d)];
            add_edge(s, d, infer_flow_type(sn, dn));
          }
        i = j + 1;
      }
    }

    // Rule 4: Variables below a FunctionBlock in the same column attach
    // as Input<k>; empty cells are skipped, lines and other elements
    // stop the scan.
    for (const auto* el : node_els) {
      if (el->element_type != "FunctionBlock") continue;
      for (int k = 1; el->row + k <= max_row; ++k) {
        const GridCell* g = cell(el->row + k, el->col);
        if (!g) continue;
        if (!g->node) break;  // a line blocks
        if (g->el->element_type != "Variable") break;
        add_edge(id_of[el], id_of[g->el],
                 "Input" + std::to_string(k));
      }
    }
  }

  LDGraph g = canonicalize(std::move(nodes), std::move(edges));
  require_valid(g, "parsed XML");
  return g;
}

LDGraph parse_xml(const std::string& text, bool lenient) {
  return document_to_graph(parse_xml_document(text, lenient));
}

// ---------------------------------------------------------------------------
// Graph -> grid layout
// ---------------------------------------------------------------------------

namespace {

struct PaintCell {
  enum Kind { kNode, kHorz, kVert } kind = kHorz;
  int node = -1;
};

using Grid = std::map<std::pair<int, int>, PaintCell>;  // (row, col)

struct Endpoint {
  int node = -1;
  int row = 0;  // local ladder row
};

struct LadderPlan;

struct StagePlan {
  bool is_cut = false;
  int node = -1;                              // cut node
  std::vector<std::unique_ptr<LadderPlan>> branches;
  bool wire_spine = false;
  int height = 1;
  int width = 1;
  std::vector<Endpoint> entries, exits;
};

struct GapPlan {
  bool bus = false;
  std::vector<int> pendants;  // nodes on rows below the following stage
};

struct LadderPlan {
  std::vector<StagePlan> stages;
  std::vector<GapPlan> gaps;  // gaps[i] sits after stages[i]; one per stage
                              // (the last is the trailing gap)
  int height = 1;
  int width = 1;
  std::vector<Endpoint> entries, exits;
};

struct LayoutCtx {
  const LDGraph* g = nullptr;
  // FunctionBlock id -> sorted (k, variable id) attachments
  std::map<int, std::vector<std::pair<int, int>>> fb_vars;
  std::map<int, int> var_extent;   // node -> max Input k (0 if none)
  std::map<int, int> flow_outdeg;  // out-degree in the component's flow graph
  Grid grid;
  std::map<int, std::pair<int, int>> pos;  // node -> (row, col)
};

int node_height(const LayoutCtx& ctx, int n) {
  auto it = ctx.var_extent.find(n);
  return 1 + (it == ctx.var_extent.end() ? 0 : it->second);
}

std::string expected_flow_type(const LayoutCtx& ctx, int s, int d) {
  return infer_flow_type(ctx.g->nodes[static_cast<std::size_t>(s)],
                         ctx.g->nodes[static_cast<std::size_t>(d)]);
}

struct SubGraph {
  std::vector<int> nodes;                       // ascending
  std::vector<std::tuple<int, int, std::string>> edges;
};

LadderPlan build_plan(LayoutCtx& ctx, const SubGraph& sg);

// Weakly-connected partitions of a subgraph, ordered by smallest node.
std::vector<SubGraph> weak_components(const SubGraph& sg) {
  std::map<int, int> parent;
  for (int n : sg.nodes) parent[n] = n;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [s, d, t] : sg.edges) {
    (void)t;
    int a = find(s), b = find(d);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, SubGraph> by_root;
  for (int n : sg.nodes) by_root[find(n)].nodes.push_back(n);
  for (const auto& e : sg.edges) by_root[find(std::get<0>(e))].edges.push_back(e);
  std::vector<SubGraph> out;
  for (auto& [root, c] : by_root) out.push_back(std::move(c));
  return out;
}

LadderPlan build_plan(LayoutCtx& ctx, const SubGraph& sg_in) {
  LadderPlan plan;
  if (sg_in.nodes.empty()) throw LayoutError("internal: empty subgraph");

  // Extract pendant sinks: no outgoing edges anywhere in the component
  // (a local sink that continues at an enclosing level is a branch
  // exit, not a pendant), exactly one local parent, and that parent
  // keeps other outgoing edges. Pendants are attached on extra rows
  // after their parent's stage so they never constrain the cut
  // structure.
  std::map<int, int> outdeg, indeg;
  std::map<int, int> pendant_parent;
  std::map<int, std::string> pendant_type;
  for (int n : sg_in.nodes) outdeg[n] = indeg[n] = 0;
  for (const auto& [s, d, t] : sg_in.edges) {
    (void)t;
    ++outdeg[s];
    ++indeg[d];
  }
  std::set<int> pendants;
  for (const auto& [s, d, t] : sg_in.edges)
    if (ctx.flow_outdeg.at(d) == 0 && indeg[d] == 1 && outdeg[s] >= 2) {
      pendants.insert(d);
      pendant_parent[d] = s;
      pendant_type[d] = t;
    }
  SubGraph sg;
  for (int n : sg_in.nodes)
    if (!pendants.count(n)) sg.nodes.push_back(n);
  for (const auto& e : sg_in.edges)
    if (!pendants.count(std::get<1>(e))) sg.edges.push_back(e);
  if (sg.nodes.empty())
    throw LayoutError("component reduces to nothing but pendants");

  for (const auto& [x, u] : pendant_parent) {
    std::string want = expected_flow_type(ctx, u, x);
    if (pendant_type[x] != want)
      throw LayoutError("edge " + std::to_string(u) + "->" + std::to_string(x) +
                        " type '" + pendant_type[x] +
                        "' cannot be re-inferred from the grid (expected '" +
                        want + "')");
  }

  const int n = static_cast<int>(sg.nodes.size());
  std::map<int, int> local;  // node -> 0..n-1
  for (int i = 0; i < n; ++i) local[sg.nodes[static_cast<std::size_t>(i)]] = i;

  // Reachability closures (DFS; subgraphs are small).
  std::vector<std::vector<bool>> reach(
      static_cast<std::size_t>(n),
      std::vector<bool>(static_cast<std::size_t>(n), false));
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (const auto& [s, d, t] : sg.edges) {
    (void)t;
    succ[static_cast<std::size_t>(local[s])].push_back(local[d]);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> stack = succ[static_cast<std::size_t>(i)];
    auto& row = reach[static_cast<std::size_t>(i)];
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (row[static_cast<std::size_t>(v)]) continue;
      row[static_cast<std::size_t>(v)] = true;
      for (int w : succ[static_cast<std::size_t>(v)]) stack.push_back(w);
    }
  }
  auto reaches = [&](int a, int b) {  // strict
    return reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  };

  // Global cuts: everything is before or after, and no edge skips.
  std::vector<int> cuts;  // local indices
  for (int c = 0; c < n; ++c) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v)
      if (v != c && !reaches(v, c) && !reaches(c, v)) ok = false;
    for (const auto& [s, d, t] : sg.edges) {
      (void)t;
      if (!ok) break;
      int ls = local[s], ld = local[d];
      if (ls != c && ld != c && reaches(ls, c) && reaches(c, ld)) ok = false;
    }
    if (ok) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end(), [&](int a, int b) { return reaches(a, b); });

  // Segment membership per non-cut node: (index of latest preceding
  // cut, -1 if none). Cut adjacency guarantees one segment per slot.
  std::set<int> cut_set(cuts.begin(), cuts.end());
  std::map<int, SubGraph> segs;  // slot -> subgraph (slot = preceding cut index,
                                 // -1 for the leading segment)
  for (int v = 0; v < n; ++v) {
    if (cut_set.count(v)) continue;
    int slot = -1;
    for (std::size_t ci = 0; ci < cuts.size(); ++ci)
      if (reaches(cuts[ci], v)) slot = static_cast<int>(ci);
    segs[slot].nodes.push_back(sg.nodes[static_cast<std::size_t>(v)]);
  }
  if (cuts.empty() && !segs.empty()) {
    // One irreducible multi-source/multi-sink block: only layoutable if
    // it splits into independent parallel branches, which for a single
    // weakly-connected subgraph it cannot.
    auto comps = weak_components(sg);
    if (comps.size() <= 1)
      throw LayoutError("subgraph has no series cut and is not separable");
    // (unreachable for our callers -- components are connected -- but
    // kept for safety)
  }
  for (auto& [slot, seg] : segs) {
    std::set<int> in_seg(seg.nodes.begin(), seg.nodes.end());
    for (const auto& e : sg.edges)
      if (in_seg.count(std::get<0>(e)) && in_seg.count(std::get<1>(e)))
        seg.edges.push_back(e);
  }

  // Hand pendants whose parent is inside a segment down to that branch.
  std::map<int, std::vector<int>> cut_pendants;  // cut local idx -> pendant ids
  for (const auto& [x, u] : pendant_parent) {
    int lu = local[u];
    if (cut_set.count(lu)) {
      cut_pendants[lu].push_back(x);
    } else {
      int slot = -1;
      for (std::size_t ci = 0; ci < cuts.size(); ++ci)
        if (reaches(cuts[ci], lu)) slot = static_cast<int>(ci);
      segs[slot].nodes.push_back(x);
      segs[slot].edges.emplace_back(u, x, pendant_type[x]);
    }
  }
  for (auto& [slot, seg] : segs) {
    std::sort(seg.nodes.begin(), seg.nodes.end());
    std::sort(seg.edges.begin(), seg.edges.end());
  }
  // Variables first so no Variable pendant sits directly below a
  // FunctionBlock pendant in the bus column (the vertical input scan
  // would capture it on re-parse).
  for (auto& [c, ps] : cut_pendants)
    std::sort(ps.begin(), ps.end(), [&](int a, int b) {
      bool va = ctx.g->nodes[static_cast<std::size_t>(a)].type ==
                ElementType::Variable;
      bool vb = ctx.g->nodes[static_cast<std::size_t>(b)].type ==
                ElementType::Variable;
      return std::make_tuple(!va, a) < std::make_tuple(!vb, b);
    });

  // Assemble the stage sequence.
  auto make_cut_stage = [&](int local_idx) {
    StagePlan st;
    st.is_cut = true;
    st.node = sg.nodes[static_cast<std::size_t>(local_idx)];
    st.height = node_height(ctx, st.node);
    st.width = 1;
    st.entries = {{st.node, 0}};
    st.exits = {{st.node, 0}};
    return st;
  };
  auto make_segment_stage = [&](SubGraph seg) {
    StagePlan st;
    st.is_cut = false;
    for (auto& comp : weak_components(seg)) {
      // Recursion must strictly shrink or the subgraph is irreducible.
      if (comp.nodes.size() == sg_in.nodes.size())
        throw LayoutError("segment does not decompose");
      st.branches.push_back(std::make_unique<LadderPlan>(build_plan(ctx, comp)));
    }
    return st;
  };

  if (segs.count(-1)) plan.stages.push_back(make_segment_stage(segs.at(-1)));
  for (std::size_t ci = 0; ci < cuts.size(); ++ci) {
    plan.stages.push_back(make_cut_stage(cuts[ci]));
    auto it = segs.find(static_cast<int>(ci));
    if (it != segs.end()) plan.stages.push_back(make_segment_stage(it->second));
  }
  plan.gaps.resize(plan.stages.size());
  // Attach cut pendants to the gap after their cut's stage.
  for (auto& [lc, ps] : cut_pendants) {
    int node = sg.nodes[static_cast<std::size_t>(lc)];
    for (std::size_t si = 0; si < plan.stages.size(); ++si)
      if (plan.stages[si].is_cut && plan.stages[si].node == node)
        plan.gaps[si].pendants = ps;
  }

  // Fill segment stage geometry (branch stacking) and endpoints.
  for (auto& st : plan.stages) {
    if (st.is_cut) continue;
    int h = 0, w = 1;
    st.entries.clear();
    st.exits.clear();
    for (auto& bp : st.branches) {
      for (const auto& e : bp->entries) st.entries.push_back({e.node, e.row + h});
      for (const auto& e : bp->exits) st.exits.push_back({e.node, e.row + h});
      h += bp->height;
      w = std::max(w, bp->width);
    }
    st.height = std::max(h, 1);
    st.width = w;
  }

  // Validate the cross-stage edge set and decide connector shapes.
  std::set<std::tuple<int, int, std::string>> accounted;
  for (std::size_t si = 0; si + 1 < plan.stages.size(); ++si) {
    const auto& a = plan.stages[si];
    const auto& b = plan.stages[si + 1];
    for (const auto& ea : a.exits)
      for (const auto& eb : b.entries)
        accounted.emplace(ea.node, eb.node,
                          expected_flow_type(ctx, ea.node, eb.node));
  }
  for (std::size_t si = 0; si < plan.stages.size(); ++si)
    for (int x : plan.gaps[si].pendants)
      accounted.emplace(plan.stages[si].node, x, pendant_type[x]);

  // Edges at this level = everything minus what the branches own.
  std::set<std::tuple<int, int, std::string>> level_edges(sg_in.edges.begin(),
                                                          sg_in.edges.end());
  {
    std::set<std::tuple<int, int, std::string>> branch_edges;
    for (std::size_t si = 0; si < plan.stages.size(); ++si) {
      const auto& st = plan.stages[si];
      if (st.is_cut) continue;
      for (const auto& bp : st.branches) {
        std::set<int> bn;
        std::function<void(const LadderPlan&)> collect =
            [&](const LadderPlan& lp) {
              for (const auto& s2 : lp.stages) {
                if (s2.is_cut) {
                  bn.insert(s2.node);
                } else {
                  for (const auto& b2 : s2.branches) collect(*b2);
                }
              }
              for (const auto& gp : lp.gaps)
                for (int x : gp.pendants) bn.insert(x);
            };
        collect(*bp);
        for (const auto& e : sg_in.edges)
          if (bn.count(std::get<0>(e)) && bn.count(std::get<1>(e)))
            branch_edges.insert(e);
      }
    }
    for (const auto& e : branch_edges) level_edges.erase(e);
  }

  std::set<std::tuple<int, int, std::string>> wire_edges;
  for (const auto& e : level_edges) {
    if (accounted.count(e)) continue;
    // A direct cut-to-cut edge across one segment: wire spine.
    const auto& [s, d, t] = e;
    bool handled = false;
    for (std::size_t si = 0; si + 2 < plan.stages.size(); ++si) {
      auto& a = plan.stages[si];
      auto& seg = plan.stages[si + 1];
      auto& b = plan.stages[si + 2];
      if (a.is_cut && !seg.is_cut && b.is_cut && a.node == s && b.node == d) {
        if (t != expected_flow_type(ctx, s, d))
          throw LayoutError("edge " + std::to_string(s) + "->" +
                            std::to_string(d) + " type '" + t +
                            "' cannot be re-inferred from the grid");
        seg.wire_spine = true;
        wire_edges.insert(e);
        handled = true;
        break;
      }
    }
    if (!handled)
      throw LayoutError("edge " + std::to_string(s) + "->" + std::to_string(d) +
                        " does not fit the ladder decomposition");
  }
  // Every "accounted" pair must actually exist, with the inferred type.
  for (const auto& e : accounted)
    if (!level_edges.count(e))
      throw LayoutError("missing edge " + std::to_string(std::get<0>(e)) + "->" +
                        std::to_string(std::get<1>(e)) + "@" + std::get<2>(e) +
                        " required by the ladder decomposition");
  // And nothing beyond bipartite + pendants + wire edges may remain.
  for (const auto& e : level_edges)
    if (!accounted.count(e) && !wire_edges.count(e))
      throw LayoutError("edge " + std::to_string(std::get<0>(e)) + "->" +
                        std::to_string(std::get<1>(e)) +
                        " does not fit the ladder decomposition");

  // Wire-spine segments shift their branches one row down.
  for (auto& st : plan.stages) {
    if (st.is_cut || !st.wire_spine) continue;
    for (auto& e : st.entries) e.row += 1;
    for (auto& e : st.exits) e.row += 1;
    st.height += 1;
  }

  // Geometry: width = stages + connectors, height = max stage/pendant extent.
  plan.height = 1;
  plan.width = 0;
  for (std::size_t si = 0; si < plan.stages.size(); ++si) {
    const auto& st = plan.stages[si];
    plan.height = std::max(plan.height, st.height);
    plan.width += st.width;
    const auto& gap = plan.gaps[si];
    bool last = si + 1 == plan.stages.size();
    int pendant_extent = 0;
    for (int x : gap.pendants) pendant_extent += node_height(ctx, x);
    if (!last) {
      // One horizontal cell suffices for a single spine-to-spine hop;
      // anything touching other rows needs a bus column.
      bool chain = st.exits.size() == 1 && st.exits[0].row == 0 &&
                   plan.stages[si + 1].entries.size() == 1 &&
                   plan.stages[si + 1].entries[0].row == 0 &&
                   gap.pendants.empty();
      plan.gaps[si].bus = !chain;
      if (!gap.pendants.empty())
        plan.height = std::max(plan.height,
                               plan.stages[si + 1].height + pendant_extent);
      plan.width += plan.gaps[si].bus ? 3 : 1;
    } else if (!gap.pendants.empty()) {
      plan.gaps[si].bus = true;
      plan.height = std::max(plan.height, st.height + pendant_extent);
      plan.width += 3;
    }
  }

  plan.entries = plan.stages.front().entries;
  plan.exits = plan.stages.back().exits;
  return plan;
}

void paint_plan(LayoutCtx& ctx, const LadderPlan& plan, int base_row,
                int base_col);

void paint_stage(LayoutCtx& ctx, const StagePlan& st, int base_row,
                 int base_col) {
  if (st.is_cut) {
    ctx.grid[{base_row, base_col}] = {PaintCell::kNode, st.node};
    ctx.pos[st.node] = {base_row, base_col};
    auto it = ctx.fb_vars.find(st.node);
    if (it != ctx.fb_vars.end())
      for (const auto& [k, var] : it->second) {
        ctx.grid[{base_row + k, base_col}] = {PaintCell::kNode, var};
        ctx.pos[var] = {base_row + k, base_col};
      }
    return;
  }
  int off = st.wire_spine ? 1 : 0;
  for (const auto& bp : st.branches) {
    paint_plan(ctx, *bp, base_row + off, base_col);
    off += bp->height;
  }
}

void paint_plan(LayoutCtx& ctx, const LadderPlan& plan, int base_row,
                int base_col) {
  // Stage positions first.
  std::vector<int> stage_col(plan.stages.size());
  {
    int cur = base_col;
    for (std::size_t si = 0; si < plan.stages.size(); ++si) {
      stage_col[si] = cur;
      cur += plan.stages[si].width;
      bool last = si + 1 == plan.stages.size();
      if (!last)
        cur += plan.gaps[si].bus ? 3 : 1;
      else if (!plan.gaps[si].pendants.empty())
        cur += 3;
    }
  }
  for (std::size_t si = 0; si < plan.stages.size(); ++si)
    paint_stage(ctx, plan.stages[si], base_row, stage_col[si]);

  auto put_line = [&](int r, int c, PaintCell::Kind k) {
    auto key = std::make_pair(r, c);
    auto it = ctx.grid.find(key);
    if (it != ctx.grid.end()) {
      if (it->second.kind == k) return;
      throw LayoutError("internal: cell collision while painting");
    }
    ctx.grid[key] = {k, -1};
  };

  for (std::size_t si = 0; si < plan.stages.size(); ++si) {
    const auto& gap = plan.gaps[si];
    bool last = si + 1 == plan.stages.size();
    if (last && gap.pendants.empty()) break;

    const auto& a = plan.stages[si];
    int gap_col = stage_col[si] + a.width;

    if (!last && !gap.bus) {
      // Plain chain on the spine row.
      int from = ctx.pos[a.exits[0].node].second + 1;
      int to = stage_col[si + 1] - 1;
      for (int c = from; c <= to; ++c) put_line(base_row, c, PaintCell::kHorz);
      continue;
    }

    int beta = gap_col + 1;
    // Involved rows (pendant rows are the pendant head rows; a
    // FunctionBlock pendant keeps extra rows for its variables).
    std::vector<int> exit_rows, entry_rows, pendant_rows;
    for (const auto& e : a.exits) exit_rows.push_back(e.row);
    if (!last)
      for (const auto& e : plan.stages[si + 1].entries)
        entry_rows.push_back(e.row);
    int pendant_cursor = last ? a.height : plan.stages[si + 1].height;
    for (int x : gap.pendants) {
      pendant_rows.push_back(pendant_cursor);
      pendant_cursor += node_height(ctx, x);
    }
    bool wire = !last && plan.stages[si + 1].wire_spine;

    int maxrow = 0;
    for (int r : exit_rows) maxrow = std::max(maxrow, r);
    for (int r : entry_rows) maxrow = std::max(maxrow, r);
    for (int r : pendant_rows) maxrow = std::max(maxrow, r);

    // Left padding: every exit element reaches the boundary over lines.
    for (const auto& e : a.exits) {
      int from = ctx.pos[e.node].second + 1;
      for (int c = from; c <= beta - 1; ++c)
        put_line(base_row + e.row, c, PaintCell::kHorz);
    }
    // Vertical joins.
    for (int r = 0; r < maxrow; ++r)
      put_line(base_row + r, beta, PaintCell::kVert);
    // Right spacers toward entries. The deepest joined row has no
    // VertLine of its own, so when it carries a target the boundary
    // cell becomes a HorzLine to keep the scan alive.
    if (!last)
      for (const auto& e : plan.stages[si + 1].entries) {
        put_line(base_row + e.row, beta + 1, PaintCell::kHorz);
        if (e.row == maxrow) put_line(base_row + e.row, beta, PaintCell::kHorz);
      }
    // Pendants sit right on the bus spacer column.
    for (std::size_t j = 0; j < gap.pendants.size(); ++j) {
      int r = base_row + pendant_rows[j];
      if (pendant_rows[j] == maxrow) put_line(r, beta, PaintCell::kHorz);
      ctx.grid[{r, beta + 1}] = {PaintCell::kNode, gap.pendants[j]};
      ctx.pos[gap.pendants[j]] = {r, beta + 1};
      auto it = ctx.fb_vars.find(gap.pendants[j]);
      if (it != ctx.fb_vars.end())
        for (const auto& [k, var] : it->second) {
          ctx.grid[{r + k, beta + 1}] = {PaintCell::kNode, var};
          ctx.pos[var] = {r + k, beta + 1};
        }
    }
    // Wire spine: horizontal run across the segment up to the next gap.
    if (wire) {
      const auto& seg = plan.stages[si + 1];
      int wire_to = stage_col[si + 1] + seg.width;  // next gap's pad col
      for (int c = beta + 1; c <= wire_to; ++c)
        put_line(base_row, c, PaintCell::kHorz);
    }
  }
}

}  // namespace

LdXmlDocument graph_to_document(const LDGraph& g) {
  require_valid(g, "emit_xml input");
  LdXmlDocument doc;

  for (std::size_t ri = 0; ri < g.rung_starts.size(); ++ri) {
    int lo = g.rung_starts[ri];
    int hi = ri + 1 < g.rung_starts.size() ? g.rung_starts[ri + 1]
                                           : static_cast<int>(g.nodes.size());
    LayoutCtx ctx;
    ctx.g = &g;

    // Variable attachments (Input<k> edges from a FunctionBlock to a
    // pendant Variable) leave the flow graph.
    std::set<int> attached;
    std::map<int, int> incident;
    for (const auto& e : g.edges) {
      if (e.src >= lo && e.src < hi) ++incident[e.src], ++incident[e.dst];
    }
    for (const auto& e : g.edges) {
      if (e.src < lo || e.src >= hi) continue;
      if (e.type.rfind("Input", 0) != 0) continue;
      const LDNode& src = g.nodes[static_cast<std::size_t>(e.src)];
      const LDNode& dst = g.nodes[static_cast<std::size_t>(e.dst)];
      if (src.type != ElementType::FunctionBlock ||
          dst.type != ElementType::Variable || incident[e.dst] != 1)
        throw LayoutError("edge " + std::to_string(e.src) + "->" +
                          std::to_string(e.dst) + "@" + e.type +
                          " is not a FunctionBlock/Variable attachment");
      int k = std::stoi(e.type.substr(5));
      ctx.fb_vars[e.src].emplace_back(k, e.dst);
      attached.insert(e.dst);
    }
    for (auto& [fb, vars] : ctx.fb_vars) {
      std::sort(vars.begin(), vars.end());
      int maxk = 0;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i > 0 && vars[i].first == vars[i - 1].first)
          throw LayoutError("FunctionBlock " + std::to_string(fb) +
                            " has two Input" + std::to_string(vars[i].first) +
                            " attachments");
        maxk = std::max(maxk, vars[i].first);
      }
      ctx.var_extent[fb] = maxk;
    }

    SubGraph sg;
    for (int v = lo; v < hi; ++v)
      if (!attached.count(v)) sg.nodes.push_back(v);
    for (const auto& e : g.edges)
      if (e.src >= lo && e.src < hi && !attached.count(e.dst))
        sg.edges.emplace_back(e.src, e.dst, e.type);
    for (int v : sg.nodes) ctx.flow_outdeg[v] = 0;
    for (const auto& [s, d, t] : sg.edges) {
      (void)d;
      (void)t;
      ++ctx.flow_outdeg[s];
    }

    if (sg.nodes.empty()) {
      // A rung of only variables is impossible (attachment needs an FB
      // in the same rung), so this cannot trigger; guard anyway.
      throw LayoutError("rung " + std::to_string(ri) + " has no flow nodes");
    }

    LadderPlan plan = build_plan(ctx, sg);
    paint_plan(ctx, plan, 0, 0);

    std::vector<XmlElement> rung;
    for (const auto& [rc, cell] : ctx.grid) {
      XmlElement el;
      el.row = rc.first;
      el.col = rc.second;
      switch (cell.kind) {
        case PaintCell::kHorz:
          el.element_type = "HorzLine";
          break;
        case PaintCell::kVert:
          el.element_type = "VertLine";
          break;
        case PaintCell::kNode: {
          const LDNode& nd = g.nodes[static_cast<std::size_t>(cell.node)];
          el.element_type = std::string(to_string(nd.type));
          el.name = nd.name;
          el.params = nd.params;
          break;
        }
      }
      rung.push_back(std::move(el));
    }
    std::sort(rung.begin(), rung.end(), [](const XmlElement& a, const XmlElement& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    doc.rungs.push_back(std::move(rung));
  }
  return doc;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_document(const LdXmlDocument& doc) {
  std::ostringstream os;
  os << "<Program>\n";
  for (const auto& rung : doc.rungs) {
    os << "  <Rung>\n";
    for (const auto& el : rung) {
      os << "    <Element ElementType=\"" << xml_escape(el.element_type)
         << "\" Row=\"" << el.row << "\" Col=\"" << el.col << "\"";
      if (!el.is_line()) os << " Name=\"" << xml_escape(el.name) << "\"";
      for (const auto& [k, v] : el.params)
        os << " Param." << k << "=\"" << xml_escape(v) << "\"";
      if (el.element_type == "MultiHorzLine")
        os << " Length=\"" << el.length << "\"";
      os << "/>\n";
    }
    os << "  </Rung>\n";
  }
  os << "</Program>\n";
  return os.str();
}

std::string emit_xml(const LDGraph& g) {
  LdXmlDocument doc = graph_to_document(g);
  std::string text = emit_document(doc);
  LDGraph back = parse_xml(text);
  if (!graph_equal(g, back))
    throw LayoutError("layout verification failed: grid does not re-parse to "
                      "the source graph");
  return text;
}

}  // namespace ldforge
