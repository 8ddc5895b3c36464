#include "pmeval/graph.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "pmeval/text.hpp"

namespace pmeval {

bool is_event(NodeKind k) { return k == NodeKind::StartEvent || k == NodeKind::EndEvent; }

bool is_gateway(NodeKind k) {
    return k == NodeKind::ExclusiveGateway || k == NodeKind::ParallelGateway;
}

std::string_view kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::StartEvent: return "startEvent";
        case NodeKind::EndEvent: return "endEvent";
        case NodeKind::Task: return "task";
        case NodeKind::ExclusiveGateway: return "exclusiveGateway";
        case NodeKind::ParallelGateway: return "parallelGateway";
    }
    return "task";
}

std::optional<NodeKind> kind_from_name(std::string_view name) {
    if (name == "startEvent") return NodeKind::StartEvent;
    if (name == "endEvent") return NodeKind::EndEvent;
    if (name == "task") return NodeKind::Task;
    if (name == "exclusiveGateway") return NodeKind::ExclusiveGateway;
    if (name == "parallelGateway") return NodeKind::ParallelGateway;
    return std::nullopt;
}

void ProcessGraph::add_node(Node n) {
    if (n.id.empty()) throw std::invalid_argument("node id must not be empty");
    if (index_.contains(n.id)) throw std::invalid_argument("duplicate node id: " + n.id);
    index_.emplace(n.id, nodes_.size());
    nodes_.push_back(std::move(n));
}

bool ProcessGraph::add_edge(Edge e) {
    if (!has_node(e.source)) throw std::invalid_argument("edge source not in graph: " + e.source);
    if (!has_node(e.target)) throw std::invalid_argument("edge target not in graph: " + e.target);
    if (e.source == e.target) return false;
    for (const Edge& existing : edges_) {
        if (existing.source == e.source && existing.target == e.target &&
            existing.condition == e.condition)
            return false;
    }
    edges_.push_back(std::move(e));
    return true;
}

bool ProcessGraph::has_node(std::string_view id) const { return index_.find(id) != index_.end(); }

const Node* ProcessGraph::find_node(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::vector<const Edge*> ProcessGraph::out_edges(std::string_view id) const {
    std::vector<const Edge*> out;
    for (const Edge& e : edges_)
        if (e.source == id) out.push_back(&e);
    return out;
}

std::vector<const Edge*> ProcessGraph::in_edges(std::string_view id) const {
    std::vector<const Edge*> in;
    for (const Edge& e : edges_)
        if (e.target == id) in.push_back(&e);
    return in;
}

std::size_t ProcessGraph::out_degree(std::string_view id) const { return out_edges(id).size(); }
std::size_t ProcessGraph::in_degree(std::string_view id) const { return in_edges(id).size(); }

std::size_t ProcessGraph::count_kind(NodeKind k) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [k](const Node& n) { return n.kind == k; }));
}

std::string canon_label(std::string_view raw) {
    // byte-wise ASCII canonicalization; non-ASCII bytes count as separators,
    // which keeps the mapping deterministic and identical on both sides of a
    // comparison
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(u)));
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::string to_string(const NodeKey& k) {
    std::string out(kind_name(k.kind));
    if (!k.canon.empty()) {
        out += ':';
        out += k.canon;
    }
    return out;
}

std::string to_string(const EdgeTuple& t) {
    std::string out = "(";
    out += to_string(t.source);
    out += ", ";
    out += EdgeTuple::kFlow;
    out += ", ";
    out += to_string(t.target);
    out += ")";
    return out;
}

namespace {

// Deterministic visit order that does not depend on declaration order: starts
// first, neighbours sorted by (canonical label, id), then leftovers by id.
// Used only to assign duplicate-task occurrence suffixes, so equal graphs get
// equal keys regardless of how their source files ordered the elements.
std::vector<const Node*> canonical_visit_order(const ProcessGraph& g) {
    std::vector<const Node*> order;
    std::set<std::string> visited;

    std::vector<const Node*> roots;
    for (const Node& n : g.nodes())
        if (n.kind == NodeKind::StartEvent) roots.push_back(&n);
    std::sort(roots.begin(), roots.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });

    auto visit = [&](const Node* root) {
        std::vector<const Node*> stack{root};
        while (!stack.empty()) {
            const Node* n = stack.back();
            stack.pop_back();
            if (!visited.insert(n->id).second) continue;
            order.push_back(n);
            std::vector<const Node*> next;
            for (const Edge* e : g.out_edges(n->id)) next.push_back(g.find_node(e->target));
            std::sort(next.begin(), next.end(), [](const Node* a, const Node* b) {
                const std::string ca = canon_label(a->label);
                const std::string cb = canon_label(b->label);
                return ca != cb ? ca < cb : a->id < b->id;
            });
            // reversed so the smallest is popped first
            for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(*it);
        }
    };

    for (const Node* r : roots) visit(r);

    std::vector<const Node*> rest;
    for (const Node& n : g.nodes())
        if (!visited.contains(n.id)) rest.push_back(&n);
    std::sort(rest.begin(), rest.end(), [](const Node* a, const Node* b) { return a->id < b->id; });
    for (const Node* r : rest) visit(r);

    return order;
}

}  // namespace

std::map<std::string, NodeKey> node_keys(const ProcessGraph& g) {
    std::map<std::string, NodeKey> keys;

    for (const Node& n : g.nodes()) {
        NodeKey key;
        key.kind = n.kind;
        if (is_event(n.kind)) {
            key.canon.clear();
        } else if (is_gateway(n.kind)) {
            std::set<std::string> conds;
            for (const Edge* e : g.out_edges(n.id)) {
                std::string c = canon_label(e->condition);
                if (!c.empty()) conds.insert(std::move(c));
            }
            std::string folded;
            for (const std::string& c : conds) {
                if (!folded.empty()) folded += '|';
                folded += c;
            }
            if (!folded.empty()) key.canon = "[" + folded + "]";
        } else {
            key.canon = canon_label(n.label);
        }
        keys.emplace(n.id, std::move(key));
    }

    // Occurrence suffixes for duplicate-label tasks, in canonical visit order.
    std::map<std::string, int> seen;
    std::map<std::string, int> total;
    for (const Node& n : g.nodes())
        if (n.kind == NodeKind::Task) ++total[keys.at(n.id).canon];
    for (const Node* n : canonical_visit_order(g)) {
        if (n->kind != NodeKind::Task) continue;
        NodeKey& key = keys.at(n->id);
        if (total[key.canon] < 2) continue;
        const int occurrence = ++seen[key.canon];
        if (occurrence > 1) key.canon += "#" + std::to_string(occurrence);
    }
    return keys;
}

std::set<EdgeTuple> to_edge_tuples(const ProcessGraph& g) {
    const auto keys = node_keys(g);
    std::set<EdgeTuple> tuples;
    for (const Edge& e : g.edges())
        tuples.insert(EdgeTuple{keys.at(e.source), keys.at(e.target)});
    return tuples;
}

std::vector<std::string> extract_tasks(const ProcessGraph& g, std::vector<Diagnostic>* warnings) {
    std::vector<std::string> tasks;
    std::set<std::string> visited;

    auto take = [&](const Node& n) {
        if (visited.insert(n.id).second && n.kind == NodeKind::Task) tasks.push_back(n.label);
    };

    std::vector<const Node*> starts;
    for (const Node& n : g.nodes())
        if (n.kind == NodeKind::StartEvent) starts.push_back(&n);

    if (starts.empty()) {
        if (warnings)
            warnings->push_back({Severity::Warning, 0, 0,
                                 "graph has no start event; tasks listed in node-id order", false});
        std::vector<const Node*> sorted;
        for (const Node& n : g.nodes()) sorted.push_back(&n);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Node* a, const Node* b) { return a->id < b->id; });
        for (const Node* n : sorted) take(*n);
        return tasks;
    }

    auto dfs = [&](const Node* root) {
        if (visited.contains(root->id)) return;
        std::vector<const Node*> stack{root};
        while (!stack.empty()) {
            const Node* n = stack.back();
            stack.pop_back();
            if (visited.contains(n->id)) continue;
            take(*n);
            const auto out = g.out_edges(n->id);
            // push in reverse so the first declared edge is explored first
            for (auto it = out.rbegin(); it != out.rend(); ++it) {
                const Node* t = g.find_node((*it)->target);
                if (!visited.contains(t->id)) stack.push_back(t);
            }
        }
    };

    for (const Node* s : starts) dfs(s);

    // Unreachable leftovers still count (|tasks| must equal the task count).
    std::vector<const Node*> rest;
    for (const Node& n : g.nodes())
        if (!visited.contains(n.id)) rest.push_back(&n);
    std::sort(rest.begin(), rest.end(), [](const Node* a, const Node* b) { return a->id < b->id; });
    for (const Node* n : rest) dfs(n);

    return tasks;
}

std::string to_string(const Diagnostic& d) {
    std::string out = d.severity == Severity::Error ? "error" : "warning";
    if (d.line > 0) {
        out += " at line " + std::to_string(d.line);
        if (d.column > 0) out += ":" + std::to_string(d.column);
    }
    out += ": ";
    out += d.message;
    if (d.repaired) out += " (repaired)";
    return out;
}

}  // namespace pmeval
