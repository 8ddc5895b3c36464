#include "pmeval/normalize.hpp"

#include <algorithm>

#include "pmeval/text.hpp"

namespace pmeval {

namespace {

// Case-insensitive split on the standalone word "and".
std::vector<std::string> split_on_and(const std::string& label) {
    const std::vector<std::string> words = split_ws(label);
    std::vector<std::string> parts;
    std::vector<std::string> current;
    for (const std::string& w : words) {
        if (iequals(w, "and")) {
            parts.push_back(join(current, " "));
            current.clear();
        } else {
            current.push_back(w);
        }
    }
    parts.push_back(join(current, " "));
    return parts;
}

ProcessGraph bypass_merges(const ProcessGraph& in) {
    // Work on mutable copies; re-run until no merge gateway is left (removing
    // one merge can raise the in-degree of the next).
    std::vector<Node> nodes(in.nodes().begin(), in.nodes().end());
    std::vector<Edge> edges(in.edges().begin(), in.edges().end());

    for (;;) {
        std::string victim;
        for (const Node& n : nodes) {
            if (!is_gateway(n.kind)) continue;
            std::size_t ins = 0, outs = 0;
            for (const Edge& e : edges) {
                if (e.target == n.id) ++ins;
                if (e.source == n.id) ++outs;
            }
            if (ins >= 2 && outs == 1) {
                victim = n.id;
                break;
            }
        }
        if (victim.empty()) break;

        Edge out_edge;
        for (const Edge& e : edges)
            if (e.source == victim) out_edge = e;

        std::vector<Edge> next;
        auto push_unique = [&next](Edge e) {
            for (const Edge& x : next)
                if (x.source == e.source && x.target == e.target && x.condition == e.condition)
                    return;
            next.push_back(std::move(e));
        };
        for (const Edge& e : edges) {
            if (e.source == victim) continue;
            if (e.target == victim) {
                if (e.source == out_edge.target) continue;  // would self-loop
                push_unique(Edge{e.source, out_edge.target,
                                 !e.condition.empty() ? e.condition : out_edge.condition});
            } else {
                push_unique(e);
            }
        }
        edges = std::move(next);
        nodes.erase(std::remove_if(nodes.begin(), nodes.end(),
                                   [&](const Node& n) { return n.id == victim; }),
                    nodes.end());
    }

    ProcessGraph out;
    for (Node& n : nodes) out.add_node(std::move(n));
    for (Edge& e : edges) out.add_edge(std::move(e));  // dedupes rewired duplicates
    return out;
}

ProcessGraph split_tasks(const ProcessGraph& in) {
    ProcessGraph out;
    // id of chain head/tail per original node (identity for unsplit nodes)
    std::map<std::string, std::string> head, tail;

    auto fresh_id = [&](const std::string& base, std::size_t i) {
        std::string id = base + "~" + std::to_string(i + 1);
        while (in.has_node(id) || out.has_node(id)) id += "x";
        return id;
    };

    for (const Node& n : in.nodes()) {
        std::vector<std::string> parts;
        if (n.kind == NodeKind::Task) parts = split_compound_label(n.label);
        if (parts.size() < 2) {
            out.add_node(n);
            head[n.id] = tail[n.id] = n.id;
            continue;
        }
        std::string prev;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const std::string id = fresh_id(n.id, i);
            out.add_node(Node{id, NodeKind::Task, parts[i]});
            if (i == 0) head[n.id] = id;
            if (i + 1 == parts.size()) tail[n.id] = id;
            if (!prev.empty()) out.add_edge(Edge{prev, id, ""});
            prev = id;
        }
    }

    for (const Edge& e : in.edges())
        out.add_edge(Edge{tail.at(e.source), head.at(e.target), e.condition});
    return out;
}

}  // namespace

std::vector<std::string> split_compound_label(const std::string& label) {
    std::vector<std::string> parts = split_on_and(label);
    if (parts.size() < 2 ||
        std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return p.empty(); }))
        return {label};

    // Distribute the final part's object onto bare-verb parts:
    // "check and repair hardware" -> "check hardware", "repair hardware".
    const std::vector<std::string> last_words = split_ws(parts.back());
    std::string object;
    if (last_words.size() >= 2)
        object = join(std::span<const std::string>(last_words).subspan(1), " ");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!object.empty() && split_ws(parts[i]).size() == 1) parts[i] += " " + object;
    }
    return parts;
}

ProcessGraph normalize_for_comparison(const ProcessGraph& g, const NormalizationOptions& opts) {
    ProcessGraph result;
    for (const Node& n : g.nodes()) result.add_node(n);
    for (const Edge& e : g.edges()) result.add_edge(e);
    if (opts.bypass_merge_gateways) result = bypass_merges(result);
    if (opts.split_compound_tasks) result = split_tasks(result);
    return result;
}

}  // namespace pmeval
