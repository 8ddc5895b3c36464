#include <algorithm>
#include <map>
#include <set>

#include "pmeval/metrics.hpp"

namespace pmeval {

namespace {

std::set<std::string> reachable_from(const ProcessGraph& g, const std::vector<std::string>& roots,
                                     bool forward) {
    std::set<std::string> seen(roots.begin(), roots.end());
    std::vector<std::string> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
        const std::string id = std::move(stack.back());
        stack.pop_back();
        for (const Edge& e : g.edges()) {
            const std::string& from = forward ? e.source : e.target;
            const std::string& to = forward ? e.target : e.source;
            if (from == id && seen.insert(to).second) stack.push_back(to);
        }
    }
    return seen;
}

// Post-dominator sets w.r.t. a virtual sink behind all end events; iterative
// dataflow, fine for the model sizes at hand.
std::map<std::string, std::set<std::string>> post_dominators(const ProcessGraph& g) {
    static const std::string kSink = "\x01sink";
    std::set<std::string> all;
    for (const Node& n : g.nodes()) all.insert(n.id);
    all.insert(kSink);

    std::map<std::string, std::vector<std::string>> succ;
    for (const Edge& e : g.edges()) succ[e.source].push_back(e.target);
    for (const Node& n : g.nodes())
        if (n.kind == NodeKind::EndEvent) succ[n.id].push_back(kSink);

    std::map<std::string, std::set<std::string>> pdom;
    for (const std::string& id : all) pdom[id] = all;
    pdom[kSink] = {kSink};

    bool changed = true;
    while (changed) {
        changed = false;
        for (const Node& n : g.nodes()) {
            const auto it = succ.find(n.id);
            if (it == succ.end() || it->second.empty()) continue;
            std::set<std::string> meet = pdom[it->second.front()];
            for (std::size_t i = 1; i < it->second.size(); ++i) {
                const std::set<std::string>& other = pdom[it->second[i]];
                std::set<std::string> merged;
                std::set_intersection(meet.begin(), meet.end(), other.begin(), other.end(),
                                      std::inserter(merged, merged.begin()));
                meet = std::move(merged);
            }
            meet.insert(n.id);
            if (meet != pdom[n.id]) {
                pdom[n.id] = std::move(meet);
                changed = true;
            }
        }
    }
    return pdom;
}

// The merge closing a split's region is the split's immediate post-dominator:
// the first node every branch must pass. When that convergence point is not a
// merge gateway (the branches rejoin implicitly), there is no matched pair.
const Node* matched_merge(const ProcessGraph& g,
                          const std::map<std::string, std::set<std::string>>& pdom,
                          const std::string& split_id) {
    const auto it = pdom.find(split_id);
    if (it == pdom.end()) return nullptr;
    const std::set<std::string>& mine = it->second;
    std::set<std::string> expect = mine;
    expect.erase(split_id);
    for (const std::string& cand : mine) {
        if (cand == split_id || cand[0] == '\x01') continue;
        const auto cit = pdom.find(cand);
        if (cit == pdom.end() || cit->second != expect) continue;
        const Node* n = g.find_node(cand);
        if (n && is_gateway(n->kind) && g.in_degree(cand) >= 2) return n;
        return nullptr;  // branches converge at a non-gateway first
    }
    return nullptr;
}

}  // namespace

std::vector<LintFinding> lint(const ProcessGraph& g) {
    std::vector<LintFinding> findings;
    auto add = [&](std::string rule, Severity sev, std::string subject, std::string msg) {
        findings.push_back({std::move(rule), sev, std::move(subject), std::move(msg)});
    };

    std::vector<std::string> starts, ends;
    for (const Node& n : g.nodes()) {
        if (n.kind == NodeKind::StartEvent) starts.push_back(n.id);
        if (n.kind == NodeKind::EndEvent) ends.push_back(n.id);
    }

    if (starts.empty()) add("R1", Severity::Error, "", "model has no start event");
    if (ends.empty()) add("R2", Severity::Error, "", "model has no end event");

    for (const Node& n : g.nodes()) {
        const std::size_t ins = g.in_degree(n.id);
        const std::size_t outs = g.out_degree(n.id);
        if (n.kind == NodeKind::StartEvent && ins > 0)
            add("R3", Severity::Error, n.id, "start event has incoming flow");
        if (n.kind == NodeKind::EndEvent && outs > 0)
            add("R4", Severity::Error, n.id, "end event has outgoing flow");
        if (is_gateway(n.kind)) {
            if (ins == 1 && outs == 1)
                add("R5", Severity::Warning, n.id, "single-path gateway");
            else if (ins > 1 && outs > 1)
                add("R5", Severity::Warning, n.id, "gateway splits and merges at once");
        }
        if (!is_gateway(n.kind) && outs > 1)
            add("R9", Severity::Warning, n.id,
                "node branches without a gateway (implicit split)");
    }

    if (!starts.empty()) {
        const std::set<std::string> reach = reachable_from(g, starts, /*forward=*/true);
        for (const Node& n : g.nodes())
            if (!reach.contains(n.id))
                add("R6", Severity::Error, n.id, "node is unreachable from every start event");
    }
    if (!ends.empty()) {
        const std::set<std::string> coreach = reachable_from(g, ends, /*forward=*/false);
        for (const Node& n : g.nodes())
            if (!coreach.contains(n.id))
                add("R7", Severity::Error, n.id,
                    "branch never reaches an end event (no closure)");
    }

    if (!ends.empty()) {
        const auto pdom = post_dominators(g);
        for (const Node& n : g.nodes()) {
            if (!is_gateway(n.kind) || g.out_degree(n.id) < 2) continue;
            const Node* merge = matched_merge(g, pdom, n.id);
            if (merge && merge->kind != n.kind)
                add("R8", Severity::Warning, n.id + " -> " + merge->id,
                    "split and its matching merge use different gateway kinds");
        }
    }

    return findings;
}

}  // namespace pmeval
