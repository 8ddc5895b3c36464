#include <algorithm>
#include <map>
#include <tuple>

#include "notation_util.hpp"
#include "pmeval/notation.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

// Stable emission ids: sanitized originals, de-duplicated in sorted order.
std::map<std::string, std::string> emission_ids(const ProcessGraph& g) {
    std::vector<std::string> ids;
    for (const Node& n : g.nodes()) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());

    std::map<std::string, std::string> out;
    std::map<std::string, int> used;
    for (const std::string& id : ids) {
        std::string s = detail::sanitize_id(id);
        const int n = ++used[s];
        if (n > 1) s += "_" + std::to_string(n);
        out[id] = s;
    }
    return out;
}

std::vector<const Node*> sorted_nodes(const ProcessGraph& g) {
    std::vector<const Node*> nodes;
    for (const Node& n : g.nodes()) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });
    return nodes;
}

std::vector<const Edge*> sorted_edges(const ProcessGraph& g) {
    std::vector<const Edge*> edges;
    for (const Edge& e : g.edges()) edges.push_back(&e);
    std::sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) {
        return std::tie(a->source, a->target, a->condition) <
               std::tie(b->source, b->target, b->condition);
    });
    return edges;
}

std::string mer_event_body(const Node& n) {
    const char* word = n.kind == NodeKind::StartEvent ? "Start" : "End";
    if (n.label.empty()) return word;
    return "\"" + std::string(word) + ": " + detail::escape_label(n.label) + "\"";
}

std::string mer_gateway_body(const Node& n) {
    const char* word = n.kind == NodeKind::ExclusiveGateway ? "XOR" : "AND";
    if (n.label.empty()) return word;
    return "\"" + std::string(word) + ": " + detail::escape_label(n.label) + "\"";
}

}  // namespace

std::string_view notation_name(NotationKind k) { return k == NotationKind::MER ? "MER" : "GV"; }

std::optional<NotationKind> notation_from_name(std::string_view name) {
    if (iequals(name, "MER") || iequals(name, "mermaid")) return NotationKind::MER;
    if (iequals(name, "GV") || iequals(name, "dot") || iequals(name, "graphviz"))
        return NotationKind::GV;
    return std::nullopt;
}

std::string emit_mer(const ProcessGraph& g) {
    const auto ids = emission_ids(g);
    std::string out = "flowchart TD\n";
    for (const Node* n : sorted_nodes(g)) {
        out += "  " + ids.at(n->id);
        switch (n->kind) {
            case NodeKind::StartEvent:
            case NodeKind::EndEvent:
                out += "(" + mer_event_body(*n) + ")";
                break;
            case NodeKind::Task:
                out += "[\"" + detail::escape_label(n->label) + "\"]";
                break;
            case NodeKind::ExclusiveGateway:
            case NodeKind::ParallelGateway:
                out += "{" + mer_gateway_body(*n) + "}";
                break;
        }
        out += "\n";
    }
    for (const Edge* e : sorted_edges(g)) {
        out += "  " + ids.at(e->source) + " -->";
        if (!e->condition.empty()) out += "|\"" + detail::escape_label(e->condition) + "\"|";
        out += " " + ids.at(e->target) + "\n";
    }
    return out;
}

std::string emit_gv(const ProcessGraph& g) {
    const auto ids = emission_ids(g);
    std::string out = "digraph process {\n  rankdir=TB;\n";
    for (const Node* n : sorted_nodes(g)) {
        out += "  " + ids.at(n->id) + " [";
        switch (n->kind) {
            case NodeKind::StartEvent:
            case NodeKind::EndEvent: {
                const char* word = n->kind == NodeKind::StartEvent ? "Start" : "End";
                out += std::string("shape=") +
                       (n->kind == NodeKind::StartEvent ? "circle" : "doublecircle");
                out += ", label=\"" + std::string(word);
                if (!n->label.empty()) out += ": " + detail::escape_label(n->label);
                out += "\"";
                break;
            }
            case NodeKind::Task:
                out += "shape=box, label=\"" + detail::escape_label(n->label) + "\"";
                break;
            case NodeKind::ExclusiveGateway:
            case NodeKind::ParallelGateway: {
                const char* word = n->kind == NodeKind::ExclusiveGateway ? "XOR" : "AND";
                out += "shape=diamond, label=\"" + std::string(word);
                if (!n->label.empty()) out += ": " + detail::escape_label(n->label);
                out += "\"";
                break;
            }
        }
        out += "];\n";
    }
    for (const Edge* e : sorted_edges(g)) {
        out += "  " + ids.at(e->source) + " -> " + ids.at(e->target);
        if (!e->condition.empty()) out += " [label=\"" + detail::escape_label(e->condition) + "\"]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

ParseReport parse_notation(NotationKind kind, std::string_view text, const ParseOptions& opts) {
    return kind == NotationKind::MER ? parse_mer(text, opts) : parse_gv(text, opts);
}

std::string emit_notation(NotationKind kind, const ProcessGraph& g) {
    return kind == NotationKind::MER ? emit_mer(g) : emit_gv(g);
}

}  // namespace pmeval
