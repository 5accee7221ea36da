#include "ldforge/json_codec.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include <nlohmann/json.hpp>

#include "ldforge/errors.hpp"

namespace ldforge {

using ordered_json = nlohmann::ordered_json;

std::string to_json_text(const LDGraph& g) {
  ordered_json root = ordered_json::object();
  for (std::size_t ri = 0; ri < g.rung_starts.size(); ++ri) {
    int lo = g.rung_starts[ri];
    int hi = ri + 1 < g.rung_starts.size() ? g.rung_starts[ri + 1]
                                           : static_cast<int>(g.nodes.size());
    ordered_json comp = ordered_json::object();
    for (int id = lo; id < hi; ++id) {
      const LDNode& n = g.nodes[static_cast<std::size_t>(id)];
      ordered_json attrs = ordered_json::object();
      attrs["ElementType"] = std::string(to_string(n.type));
      attrs["Name"] = n.name;
      for (const auto& [k, v] : n.params) attrs[k] = v;
      ordered_json edges = ordered_json::array();
      for (const auto& e : g.edges)  // already sorted by (src, dst, type)
        if (e.src == id)
          edges.push_back({{"target", std::to_string(e.dst)}, {"type", e.type}});
      comp[std::to_string(id)] = {{"attributes", std::move(attrs)},
                                  {"edges", std::move(edges)}};
    }
    root["G" + std::to_string(ri)] = std::move(comp);
  }
  return root.dump();
}

namespace {

int parse_id(const std::string& s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0 || s.empty())
    throw SchemaError(std::string(what) + " must be a non-negative decimal, "
                      "got '" + s + "'");
  return v;
}

int json_id(const ordered_json& j, const char* what) {
  if (j.is_string()) return parse_id(j.get<std::string>(), what);
  if (j.is_number_unsigned()) return static_cast<int>(j.get<std::uint64_t>());
  throw SchemaError(std::string(what) + " must be a decimal string");
}

}  // namespace

LDGraph parse_json_text(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("root must be a JSON object");

  std::vector<LDNode> nodes;
  std::vector<LDEdge> edges;
  std::map<int, bool> seen;
  for (const auto& [label, comp] : root.items()) {
    if (label.size() < 2 || label[0] != 'G')
      throw SchemaError("component key must look like \"G0\", got '" + label +
                        "'");
    parse_id(label.substr(1), "component index");
    if (!comp.is_object())
      throw SchemaError("component '" + label + "' must be an object");
    for (const auto& [key, val] : comp.items()) {
      int id = parse_id(key, "node id");
      if (seen[id]) throw SchemaError("node id " + key + " appears twice");
      seen[id] = true;
      if (!val.is_object() || !val.contains("attributes") ||
          !val.contains("edges"))
        throw SchemaError("node " + key +
                          " must carry \"attributes\" and \"edges\"");
      for (const auto& [nk, nv] : val.items()) {
        (void)nv;
        if (nk != "attributes" && nk != "edges")
          throw SchemaError("unexpected key '" + nk + "' on node " + key);
      }
      const auto& attrs = val["attributes"];
      if (!attrs.is_object() || !attrs.contains("ElementType") ||
          !attrs["ElementType"].is_string())
        throw SchemaError("node " + key + " missing ElementType");
      std::string type_name = attrs["ElementType"].get<std::string>();
      auto type = element_type_from(type_name);
      if (!type) throw SchemaError("unknown ElementType '" + type_name + "'");
      std::string name;
      std::vector<std::pair<std::string, std::string>> params;
      for (const auto& [ak, av] : attrs.items()) {
        if (ak == "ElementType") continue;
        if (!av.is_string())
          throw SchemaError("attribute '" + ak + "' of node " + key +
                            " must be a string");
        if (ak == "Name")
          name = av.get<std::string>();
        else
          params.emplace_back(ak, av.get<std::string>());
      }
      nodes.push_back(make_node(id, *type, std::move(name), std::move(params)));
      const auto& earr = val["edges"];
      if (!earr.is_array())
        throw SchemaError("\"edges\" of node " + key + " must be an array");
      for (const auto& ej : earr) {
        if (!ej.is_object() || !ej.contains("target") || !ej.contains("type"))
          throw SchemaError("edge of node " + key +
                            " must carry \"target\" and \"type\"");
        for (const auto& [ek, ev] : ej.items()) {
          (void)ev;
          if (ek != "target" && ek != "type")
            throw SchemaError("unexpected key '" + ek + "' on an edge of node " +
                              key);
        }
        if (!ej["type"].is_string())
          throw SchemaError("edge type of node " + key + " must be a string");
        LDEdge e;
        e.src = id;
        e.dst = json_id(ej["target"], "edge target");
        e.type = ej["type"].get<std::string>();
        edges.push_back(std::move(e));
      }
    }
  }
  for (const auto& e : edges)
    if (!seen[e.dst])
      throw WiringError("edge target " + std::to_string(e.dst) +
                        " names no node");

  LDGraph g = canonicalize(std::move(nodes), std::move(edges));
  require_valid(g, "parsed JSON");
  return g;
}

}  // namespace ldforge
