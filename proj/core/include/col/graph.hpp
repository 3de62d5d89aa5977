#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "col/knowledge_base.hpp"

namespace col {

enum class NodeKind { concept_node, class_node };
enum class EdgeKind { frame, subconcept };

struct GraphNode {
  std::string id;     // concept name, or "Concept/Class" for a class
  std::string label;
  NodeKind kind = NodeKind::concept_node;
  std::string parent;  // owning concept of a class node

  friend auto operator<=>(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string source;
  std::string target;
  std::string label;  // verb name for frames
  EdgeKind kind = EdgeKind::frame;

  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

// Concepts and their classes as nodes; frames and composition links as
// edges. Both lists are sorted.
struct GraphExport {
  std::uint64_t revision = 0;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
};

GraphExport export_graph(const KnowledgeBase& kb);
std::string graph_json(const GraphExport& graph);
std::string export_dot(const KnowledgeBase& kb);

}  // namespace col
