#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pmeval/diagnostics.hpp"

namespace pmeval {

// The five flow-object kinds in the comparison universe.
enum class NodeKind { StartEvent, EndEvent, Task, ExclusiveGateway, ParallelGateway };

bool is_event(NodeKind k);
bool is_gateway(NodeKind k);
std::string_view kind_name(NodeKind k);                       // "startEvent", "task", ...
std::optional<NodeKind> kind_from_name(std::string_view name);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Task;
    std::string label;  // may be empty for events and gateways
};

struct Edge {
    std::string source;
    std::string target;
    std::string condition;  // branch label on gateway outflows; empty when absent
};

// Directed multigraph of flow objects and sequence flows. Node ids are unique,
// edges reference existing nodes, self-loops and exact duplicate edges are
// rejected. Declaration order of nodes and edges is preserved (extract_tasks
// tie-breaking depends on it).
class ProcessGraph {
  public:
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Throws std::invalid_argument on duplicate id.
    void add_node(Node n);
    // Returns false (and leaves the graph unchanged) for self-loops and
    // exact duplicates; throws std::invalid_argument on unknown endpoints.
    bool add_edge(Edge e);

    bool has_node(std::string_view id) const;
    const Node* find_node(std::string_view id) const;
    std::vector<const Edge*> out_edges(std::string_view id) const;
    std::vector<const Edge*> in_edges(std::string_view id) const;
    std::size_t out_degree(std::string_view id) const;
    std::size_t in_degree(std::string_view id) const;

    std::size_t count_kind(NodeKind k) const;
    std::size_t task_count() const { return count_kind(NodeKind::Task); }

    bool empty() const { return nodes_.empty(); }

  private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::map<std::string, std::size_t, std::less<>> index_;  // id -> nodes_ position
};

// Lowercases, strips punctuation to spaces and collapses whitespace.
// Idempotent: canon_label(canon_label(x)) == canon_label(x).
std::string canon_label(std::string_view raw);

// Cross-model node identity: kind plus canonical label. Events carry an empty
// label; gateways fold their sorted outgoing condition labels into the label;
// duplicate-label tasks are disambiguated with an occurrence suffix ("#2",
// "#3", ...) assigned in a declaration-order-independent traversal.
struct NodeKey {
    NodeKind kind = NodeKind::Task;
    std::string canon;

    auto operator<=>(const NodeKey&) const = default;
};

std::string to_string(const NodeKey& k);

// Canonical (source, flow, target) triple; `flow` is the fixed tag "sequence".
struct EdgeTuple {
    static constexpr std::string_view kFlow = "sequence";

    NodeKey source;
    NodeKey target;

    auto operator<=>(const EdgeTuple&) const = default;
};

std::string to_string(const EdgeTuple& t);

// Canonical key for every node id.
std::map<std::string, NodeKey> node_keys(const ProcessGraph& g);

std::set<EdgeTuple> to_edge_tuples(const ProcessGraph& g);

// Task labels, verbatim, in deterministic depth-first order from the start
// events (ties: edge declaration order). Graphs without a start event fall
// back to lexicographic node-id order and emit a warning.
std::vector<std::string> extract_tasks(const ProcessGraph& g,
                                       std::vector<Diagnostic>* warnings = nullptr);

}  // namespace pmeval
