#include "ldforge/metaprogram_codec.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <string_view>

#include "ldforge/errors.hpp"

namespace ldforge {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_metaprogram(const LDGraph& g) {
  std::ostringstream os;
  const int n = static_cast<int>(g.nodes.size());
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  // Outgoing slices; g.edges is sorted by (src, dst, type).
  std::vector<std::pair<std::size_t, std::size_t>> out(
      static_cast<std::size_t>(n), {0, 0});
  for (std::size_t i = 0; i < g.edges.size();) {
    std::size_t j = i;
    while (j < g.edges.size() && g.edges[j].src == g.edges[i].src) ++j;
    out[static_cast<std::size_t>(g.edges[i].src)] = {i, j};
    i = j;
  }

  std::function<void(int)> visit = [&](int id) {
    visited[static_cast<std::size_t>(id)] = true;
    const LDNode& nd = g.nodes[static_cast<std::size_t>(id)];
    os << "G.add_node(" << id
       << ", ElementType=" << quote(std::string(to_string(nd.type)))
       << ", Name=" << quote(nd.name);
    for (const auto& [k, v] : nd.params) os << ", " << k << "=" << quote(v);
    os << ")\n";
    auto [lo, hi] = out[static_cast<std::size_t>(id)];
    for (std::size_t i = lo; i < hi; ++i) {
      const LDEdge& e = g.edges[i];
      os << "G.add_edge(" << e.src << ", " << e.dst
         << ", type=" << quote(e.type) << ")\n";
      if (!visited[static_cast<std::size_t>(e.dst)]) visit(e.dst);
    }
  };
  // Ascending sweep: each component's smallest id seeds its walk, and
  // any source the walk cannot reach gets its own seed right after.
  for (int id = 0; id < n; ++id)
    if (!visited[static_cast<std::size_t>(id)]) visit(id);
  return os.str();
}

namespace {

class LineParser {
 public:
  LineParser(const std::string& line, int lineno)
      : s_(line), lineno_(lineno) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(lineno_) + ": " + msg);
  }

  void literal(std::string_view lit) {
    if (s_.compare(pos_, lit.size(), lit) != 0)
      fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  bool try_literal(std::string_view lit) {
    if (s_.compare(pos_, lit.size(), lit) != 0) return false;
    pos_ += lit.size();
    return true;
  }

  void comma() {  // comma with optional trailing spaces
    literal(",");
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  int integer() {
    int v = 0;
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || p == s_.data() + pos_ || v < 0)
      fail("expected a non-negative integer");
    pos_ = static_cast<std::size_t>(p - s_.data());
    return v;
  }

  std::string key() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) fail("expected a keyword argument name");
    return s_.substr(start, pos_ - start);
  }

  std::string qstring() {
    literal("\"");
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\\'))
          fail("bad escape in string");
        c = s_[pos_++];
      }
      out += c;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;  // closing quote
    return out;
  }

  void end() {
    if (pos_ != s_.size()) fail("trailing characters");
  }

  bool done() const { return pos_ >= s_.size(); }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int lineno_;
};

}  // namespace

LDGraph parse_metaprogram(const std::string& text) {
  struct NodeDecl {
    ElementType type;
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
  };
  std::map<int, NodeDecl> decls;
  std::vector<LDEdge> edges;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    LineParser p(line, lineno);
    if (p.try_literal("G.add_node(")) {
      int id = p.integer();
      std::vector<std::pair<std::string, std::string>> kwargs;
      while (!p.try_literal(")")) {
        p.comma();
        std::string k = p.key();
        p.literal("=");
        std::string v = p.qstring();
        for (const auto& [pk, pv] : kwargs) {
          (void)pv;
          if (pk == k)
            throw SchemaError("line " + std::to_string(lineno) +
                              ": duplicate argument '" + k + "'");
        }
        kwargs.emplace_back(std::move(k), std::move(v));
      }
      p.end();
      if (decls.count(id))
        throw SchemaError("line " + std::to_string(lineno) + ": node " +
                          std::to_string(id) + " declared twice");
      NodeDecl d;
      d.type = ElementType::NormallyOpen;
      bool have_type = false;
      for (auto& [k, v] : kwargs) {
        if (k == "ElementType") {
          auto t = element_type_from(v);
          if (!t) throw SchemaError("unknown ElementType '" + v + "'");
          d.type = *t;
          have_type = true;
        } else if (k == "Name") {
          d.name = std::move(v);
        } else {
          d.params.emplace_back(std::move(k), std::move(v));
        }
      }
      if (!have_type)
        throw SchemaError("line " + std::to_string(lineno) +
                          ": add_node without ElementType");
      decls.emplace(id, std::move(d));
    } else if (p.try_literal("G.add_edge(")) {
      LDEdge e;
      e.src = p.integer();
      p.comma();
      e.dst = p.integer();
      p.comma();
      p.literal("type");
      p.literal("=");
      e.type = p.qstring();
      p.literal(")");
      p.end();
      edges.push_back(std::move(e));
    } else {
      p.fail("expected G.add_node(...) or G.add_edge(...)");
    }
  }

  for (const auto& e : edges) {
    if (!decls.count(e.src))
      throw WiringError("edge references undeclared node " +
                        std::to_string(e.src));
    if (!decls.count(e.dst))
      throw WiringError("edge references undeclared node " +
                        std::to_string(e.dst));
  }
  std::vector<LDNode> nodes;
  for (auto& [id, d] : decls)
    nodes.push_back(make_node(id, d.type, std::move(d.name), std::move(d.params)));
  LDGraph g = canonicalize(std::move(nodes), std::move(edges));
  require_valid(g, "parsed metaprogram");
  return g;
}

}  // namespace ldforge
