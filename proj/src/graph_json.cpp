#include "pmeval/graph_json.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace pmeval {

nlohmann::ordered_json graph_to_json(const ProcessGraph& g) {
    std::vector<const Node*> nodes;
    for (const Node& n : g.nodes()) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });

    std::vector<const Edge*> edges;
    for (const Edge& e : g.edges()) edges.push_back(&e);
    std::sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) {
        return std::tie(a->source, a->target, a->condition) <
               std::tie(b->source, b->target, b->condition);
    });

    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const Node* n : nodes) {
        nlohmann::ordered_json jn;
        jn["id"] = n->id;
        jn["kind"] = std::string(kind_name(n->kind));
        jn["label"] = n->label;
        j["nodes"].push_back(std::move(jn));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const Edge* e : edges) {
        nlohmann::ordered_json je;
        je["source"] = e->source;
        je["target"] = e->target;
        if (!e->condition.empty()) je["condition"] = e->condition;
        j["edges"].push_back(std::move(je));
    }
    return j;
}

std::string graph_to_canonical_json(const ProcessGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

ProcessGraph graph_from_json(const nlohmann::json& j) {
    ProcessGraph g;
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw std::invalid_argument("graph JSON must contain nodes and edges");
    for (const auto& jn : j.at("nodes")) {
        const auto kind = kind_from_name(jn.at("kind").get<std::string>());
        if (!kind) throw std::invalid_argument("unknown node kind: " + jn.at("kind").dump());
        g.add_node(Node{jn.at("id").get<std::string>(), *kind,
                        jn.value("label", std::string())});
    }
    for (const auto& je : j.at("edges")) {
        g.add_edge(Edge{je.at("source").get<std::string>(), je.at("target").get<std::string>(),
                        je.value("condition", std::string())});
    }
    return g;
}

}  // namespace pmeval
