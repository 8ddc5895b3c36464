#pragma once

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pmeval/graph.hpp"
#include "pmeval/similarity.hpp"

namespace pmeval::testing {

inline std::string random_label(std::mt19937_64& rng, bool tricky) {
    static const std::string plain = "abcdefghijklmnopqrstuvwxyz";
    static const std::string spice = " :;,.!?()[]{}|\"'\\&<>-_/";
    std::uniform_int_distribution<int> len(1, 24);
    std::uniform_int_distribution<std::size_t> pick_plain(0, plain.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_spice(0, spice.size() - 1);
    std::uniform_int_distribution<int> coin(0, 4);
    std::string out;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
        if (tricky && coin(rng) == 0) out.push_back(spice[pick_spice(rng)]);
        else out.push_back(plain[pick_plain(rng)]);
    }
    return out;
}

// Random process graph: one start, at least one end, a few tasks and
// gateways, random edges (no self-loops, no exact duplicates). With
// `tricky_labels` the labels stress quoting and escaping in the notations.
inline ProcessGraph random_graph(std::mt19937_64& rng, int max_nodes = 8,
                                 bool tricky_labels = false) {
    ProcessGraph g;
    std::uniform_int_distribution<int> node_count(3, std::max(3, max_nodes));
    std::uniform_int_distribution<int> kind_pick(0, 9);
    const int n = node_count(rng);

    g.add_node(Node{"n0", NodeKind::StartEvent, ""});
    g.add_node(Node{"n1", NodeKind::EndEvent, ""});
    std::uniform_int_distribution<int> dup(0, 3);
    std::string last_task_label;
    for (int i = 2; i < n; ++i) {
        const int k = kind_pick(rng);
        Node node;
        node.id = "n" + std::to_string(i);
        if (k < 6) {
            node.kind = NodeKind::Task;
            // occasionally reuse a label to exercise duplicate-task keys
            if (!last_task_label.empty() && dup(rng) == 0) node.label = last_task_label;
            else node.label = random_label(rng, tricky_labels);
            last_task_label = node.label;
        } else if (k < 8) {
            node.kind = NodeKind::ExclusiveGateway;
        } else if (k == 8) {
            node.kind = NodeKind::ParallelGateway;
        } else {
            node.kind = kind_pick(rng) < 5 ? NodeKind::StartEvent : NodeKind::EndEvent;
        }
        g.add_node(node);
    }

    const std::size_t nodes = g.nodes().size();
    std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
    std::uniform_int_distribution<int> edge_count(static_cast<int>(nodes) - 1,
                                                  static_cast<int>(nodes) + 4);
    std::uniform_int_distribution<int> cond_coin(0, 3);
    const int edges = edge_count(rng);
    for (int i = 0; i < edges; ++i) {
        const Node& a = g.nodes()[pick(rng)];
        const Node& b = g.nodes()[pick(rng)];
        if (a.id == b.id) continue;
        Edge e{a.id, b.id, ""};
        if (is_gateway(a.kind) && cond_coin(rng) == 0) e.condition = random_label(rng, tricky_labels);
        g.add_edge(e);
    }
    return g;
}

// Pairwise-membership metric oracle: linear scans and field-wise equality,
// no set machinery shared with the implementation.
struct BruteCounts {
    std::size_t tp = 0, fp = 0, fn = 0;
};

inline bool tuple_eq(const EdgeTuple& a, const EdgeTuple& b) {
    return a.source.kind == b.source.kind && a.source.canon == b.source.canon &&
           a.target.kind == b.target.kind && a.target.canon == b.target.canon;
}

inline std::vector<EdgeTuple> dedup(const std::vector<EdgeTuple>& in) {
    std::vector<EdgeTuple> out;
    for (const EdgeTuple& t : in) {
        bool seen = false;
        for (const EdgeTuple& u : out)
            if (tuple_eq(t, u)) seen = true;
        if (!seen) out.push_back(t);
    }
    return out;
}

inline BruteCounts brute_counts(const std::vector<EdgeTuple>& generated,
                                const std::vector<EdgeTuple>& gold) {
    const std::vector<EdgeTuple> gen = dedup(generated);
    const std::vector<EdgeTuple> ref = dedup(gold);
    BruteCounts c;
    for (const EdgeTuple& t : gen) {
        bool found = false;
        for (const EdgeTuple& u : ref)
            if (tuple_eq(t, u)) found = true;
        if (found) ++c.tp;
        else ++c.fp;
    }
    for (const EdgeTuple& u : ref) {
        bool found = false;
        for (const EdgeTuple& t : gen)
            if (tuple_eq(t, u)) found = true;
        if (!found) ++c.fn;
    }
    return c;
}

// Naive tf-idf oracle: recomputes weights term by term with nested loops.
inline std::map<std::string, double> brute_tfidf(const std::vector<std::string>& corpus,
                                                 const std::string& doc) {
    std::map<std::string, double> weights;
    const std::vector<std::string> doc_tokens = tokenize(doc);
    std::set<std::string> vocab;
    for (const std::string& d : corpus)
        for (const std::string& t : tokenize(d)) vocab.insert(t);
    for (const std::string& term : vocab) {
        std::size_t tf = 0;
        for (const std::string& t : doc_tokens)
            if (t == term) ++tf;
        if (tf == 0) continue;
        std::size_t df = 0;
        for (const std::string& d : corpus) {
            bool contains = false;
            for (const std::string& t : tokenize(d))
                if (t == term) contains = true;
            if (contains) ++df;
        }
        const double idf = std::log((1.0 + static_cast<double>(corpus.size())) /
                                    (1.0 + static_cast<double>(df))) +
                           1.0;
        weights[term] = static_cast<double>(tf) * idf;
    }
    return weights;
}

inline double brute_cosine(const std::map<std::string, double>& u,
                           const std::map<std::string, double>& v) {
    double dot = 0, nu = 0, nv = 0;
    for (const auto& [k, x] : u) {
        nu += x * x;
        const auto it = v.find(k);
        if (it != v.end()) dot += x * it->second;
    }
    for (const auto& [k, x] : v) nv += x * x;
    if (nu == 0 || nv == 0) return 0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace pmeval::testing
