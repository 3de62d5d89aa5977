#include "col/graph.hpp"

#include <algorithm>

#include "codec.hpp"

namespace col {

GraphExport export_graph(const KnowledgeBase& kb) {
  GraphExport g;
  g.revision = kb.revision();
  for (const auto& [name, c] : kb.concepts()) {
    g.nodes.push_back({name, name, NodeKind::concept_node, {}});
    for (const auto& [cls, cc] : c.classes) g.nodes.push_back({name + "/" + cls, cls, NodeKind::class_node, name});
    for (const auto& sub : c.subconcepts) g.edges.push_back({name, sub, "part of", EdgeKind::subconcept});
  }
  for (const auto& [name, f] : kb.frames()) g.edges.push_back({f.source, f.target, name, EdgeKind::frame});
  std::sort(g.nodes.begin(), g.nodes.end());
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string graph_json(const GraphExport& graph) {
  using codec::json;
  json nodes = json::array();
  for (const auto& n : graph.nodes) {
    json node{{"id", n.id}, {"label", n.label}, {"kind", n.kind == NodeKind::concept_node ? "concept" : "class"}};
    if (n.kind == NodeKind::class_node) node["concept"] = n.parent;
    nodes.push_back(node);
  }
  json edges = json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"source", e.source},
                     {"target", e.target},
                     {"label", e.label},
                     {"kind", e.kind == EdgeKind::frame ? "frame" : "subconcept"}});
  }
  return json{{"revision", graph.revision}, {"nodes", nodes}, {"edges", edges}}.dump();
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const KnowledgeBase& kb) {
  const GraphExport g = export_graph(kb);
  std::string out = "digraph col {\n";
  // One cluster per concept that has classes, so membership stays visible.
  for (const auto& [name, c] : kb.concepts()) {
    if (c.classes.empty()) {
      out += "  " + quote(name) + " [shape=box];\n";
      continue;
    }
    out += "  subgraph " + quote("cluster_" + name) + " {\n    label=" + quote(name) + ";\n";
    out += "    " + quote(name) + " [shape=box];\n";
    for (const auto& [cls, cc] : c.classes) {
      out += "    " + quote(name + "/" + cls) + " [label=" + quote(cls) + ", shape=ellipse, concept=" + quote(name) +
             "];\n";
    }
    out += "  }\n";
  }
  for (const auto& e : g.edges) {
    out += "  " + quote(e.source) + " -> " + quote(e.target) + " [label=" + quote(e.label);
    if (e.kind == EdgeKind::subconcept) out += ", style=dashed";
    out += "];\n";
  }
  return out + "}\n";
}

}  // namespace col
