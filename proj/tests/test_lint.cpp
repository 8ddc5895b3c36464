#include <doctest.h>

#include <algorithm>

#include "pmeval/metrics.hpp"
#include "support.hpp"

using namespace pmeval;

namespace {

std::vector<std::string> rule_ids(const ProcessGraph& g) {
    std::vector<std::string> ids;
    for (const LintFinding& f : lint(g)) ids.push_back(f.rule_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

ProcessGraph well_formed() {
    ProcessGraph g;
    g.add_node(Node{"s", NodeKind::StartEvent, ""});
    g.add_node(Node{"t", NodeKind::Task, "work"});
    g.add_node(Node{"e", NodeKind::EndEvent, ""});
    g.add_edge(Edge{"s", "t", ""});
    g.add_edge(Edge{"t", "e", ""});
    return g;
}

struct SeededPair {
    const char* rule;
    ProcessGraph violation;
    ProcessGraph repaired;
};

std::vector<SeededPair> seeded_pairs() {
    std::vector<SeededPair> pairs;

    {  // R1: no start event
        SeededPair p{"R1", {}, {}};
        p.violation.add_node(Node{"t", NodeKind::Task, "work"});
        p.violation.add_node(Node{"e", NodeKind::EndEvent, ""});
        p.violation.add_edge(Edge{"t", "e", ""});
        p.repaired = well_formed();
        pairs.push_back(std::move(p));
    }
    {  // R2: no end event
        SeededPair p{"R2", {}, {}};
        p.violation.add_node(Node{"s", NodeKind::StartEvent, ""});
        p.violation.add_node(Node{"t", NodeKind::Task, "work"});
        p.violation.add_edge(Edge{"s", "t", ""});
        p.repaired = well_formed();
        pairs.push_back(std::move(p));
    }
    {  // R3: start event with incoming flow
        SeededPair p{"R3", {}, {}};
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_node(Node{"s1", NodeKind::StartEvent, ""});
            g->add_node(Node{"s2", NodeKind::StartEvent, ""});
            g->add_node(Node{"t", NodeKind::Task, "work"});
            g->add_node(Node{"e", NodeKind::EndEvent, ""});
            g->add_edge(Edge{"s1", "t", ""});
            g->add_edge(Edge{"t", "e", ""});
        }
        p.violation.add_edge(Edge{"s2", "s1", ""});
        p.repaired.add_edge(Edge{"s2", "t", ""});
        pairs.push_back(std::move(p));
    }
    {  // R4: end event with outgoing flow
        SeededPair p{"R4", {}, {}};
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_node(Node{"s", NodeKind::StartEvent, ""});
            g->add_node(Node{"t", NodeKind::Task, "work"});
            g->add_node(Node{"e", NodeKind::EndEvent, ""});
            g->add_edge(Edge{"s", "t", ""});
            g->add_edge(Edge{"t", "e", ""});
        }
        p.violation.add_edge(Edge{"e", "t", ""});
        pairs.push_back(std::move(p));
    }
    {  // R5: single-path gateway
        SeededPair p{"R5", {}, {}};
        p.violation.add_node(Node{"s", NodeKind::StartEvent, ""});
        p.violation.add_node(Node{"g", NodeKind::ExclusiveGateway, ""});
        p.violation.add_node(Node{"t", NodeKind::Task, "work"});
        p.violation.add_node(Node{"e", NodeKind::EndEvent, ""});
        p.violation.add_edge(Edge{"s", "g", ""});
        p.violation.add_edge(Edge{"g", "t", ""});
        p.violation.add_edge(Edge{"t", "e", ""});

        p.repaired.add_node(Node{"s", NodeKind::StartEvent, ""});
        p.repaired.add_node(Node{"g", NodeKind::ExclusiveGateway, ""});
        p.repaired.add_node(Node{"t", NodeKind::Task, "work"});
        p.repaired.add_node(Node{"t2", NodeKind::Task, "more work"});
        p.repaired.add_node(Node{"e", NodeKind::EndEvent, ""});
        p.repaired.add_edge(Edge{"s", "g", ""});
        p.repaired.add_edge(Edge{"g", "t", "a"});
        p.repaired.add_edge(Edge{"g", "t2", "b"});
        p.repaired.add_edge(Edge{"t", "e", ""});
        p.repaired.add_edge(Edge{"t2", "e", ""});
        pairs.push_back(std::move(p));
    }
    {  // R6: node unreachable from every start
        SeededPair p{"R6", {}, {}};
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_node(Node{"s", NodeKind::StartEvent, ""});
            g->add_node(Node{"t", NodeKind::Task, "work"});
            g->add_node(Node{"o", NodeKind::Task, "orphan"});
            g->add_node(Node{"e", NodeKind::EndEvent, ""});
            g->add_edge(Edge{"s", "t", ""});
            g->add_edge(Edge{"o", "e", ""});
        }
        p.violation.add_edge(Edge{"t", "e", ""});  // o stays unreachable
        p.repaired.add_edge(Edge{"t", "o", ""});   // chain s -> t -> o -> e
        pairs.push_back(std::move(p));
    }
    {  // R7: branch that never reaches an end event
        SeededPair p{"R7", {}, {}};
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_node(Node{"s", NodeKind::StartEvent, ""});
            g->add_node(Node{"g", NodeKind::ExclusiveGateway, ""});
            g->add_node(Node{"t1", NodeKind::Task, "good path"});
            g->add_node(Node{"t2", NodeKind::Task, "dangling path"});
            g->add_node(Node{"e", NodeKind::EndEvent, ""});
            g->add_edge(Edge{"s", "g", ""});
            g->add_edge(Edge{"g", "t1", "a"});
            g->add_edge(Edge{"g", "t2", "b"});
            g->add_edge(Edge{"t1", "e", ""});
        }
        p.repaired.add_edge(Edge{"t2", "e", ""});
        pairs.push_back(std::move(p));
    }
    {  // R8: split and matching merge of different kinds
        SeededPair p{"R8", {}, {}};
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_node(Node{"s", NodeKind::StartEvent, ""});
            g->add_node(Node{"g1", NodeKind::ExclusiveGateway, ""});
            g->add_node(Node{"a", NodeKind::Task, "left"});
            g->add_node(Node{"b", NodeKind::Task, "right"});
            g->add_node(Node{"e", NodeKind::EndEvent, ""});
        }
        p.violation.add_node(Node{"m", NodeKind::ParallelGateway, ""});
        p.repaired.add_node(Node{"m", NodeKind::ExclusiveGateway, ""});
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_edge(Edge{"s", "g1", ""});
            g->add_edge(Edge{"g1", "a", "x"});
            g->add_edge(Edge{"g1", "b", "y"});
            g->add_edge(Edge{"a", "m", ""});
            g->add_edge(Edge{"b", "m", ""});
            g->add_edge(Edge{"m", "e", ""});
        }
        pairs.push_back(std::move(p));
    }
    {  // R9: implicit split on a non-gateway node
        SeededPair p{"R9", {}, {}};
        for (ProcessGraph* g : {&p.violation, &p.repaired}) {
            g->add_node(Node{"s", NodeKind::StartEvent, ""});
            g->add_node(Node{"t", NodeKind::Task, "work"});
            g->add_node(Node{"a", NodeKind::Task, "left"});
            g->add_node(Node{"b", NodeKind::Task, "right"});
            g->add_node(Node{"e", NodeKind::EndEvent, ""});
            g->add_edge(Edge{"s", "t", ""});
            g->add_edge(Edge{"a", "e", ""});
            g->add_edge(Edge{"b", "e", ""});
        }
        p.violation.add_edge(Edge{"t", "a", ""});
        p.violation.add_edge(Edge{"t", "b", ""});
        p.repaired.add_node(Node{"g", NodeKind::ExclusiveGateway, ""});
        p.repaired.add_edge(Edge{"t", "g", ""});
        p.repaired.add_edge(Edge{"g", "a", "l"});
        p.repaired.add_edge(Edge{"g", "b", "r"});
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace

TEST_CASE("a minimal well-formed model has no findings") {
    CHECK(lint(well_formed()).empty());
}

TEST_CASE("an end event with outgoing flow triggers R4") {
    ProcessGraph g = well_formed();
    g.add_node(Node{"t2", NodeKind::Task, "late work"});
    g.add_node(Node{"e2", NodeKind::EndEvent, ""});
    g.add_edge(Edge{"e", "t2", ""});
    g.add_edge(Edge{"t2", "e2", ""});
    bool r4 = false;
    for (const LintFinding& f : lint(g))
        if (f.rule_id == "R4" && f.severity == Severity::Error && f.subject == "e") r4 = true;
    CHECK(r4);
}

TEST_CASE("each rule fires on its seeded violation and is silent on the repaired twin") {
    for (const SeededPair& pair : seeded_pairs()) {
        CAPTURE(pair.rule);
        CHECK(rule_ids(pair.violation) == std::vector<std::string>{pair.rule});
        CHECK(rule_ids(pair.repaired).empty());
    }
}

TEST_CASE("a missing merge gateway is not a finding") {
    // split whose branches converge implicitly on the end event
    ProcessGraph g;
    g.add_node(Node{"s", NodeKind::StartEvent, ""});
    g.add_node(Node{"g", NodeKind::ExclusiveGateway, ""});
    g.add_node(Node{"a", NodeKind::Task, "left"});
    g.add_node(Node{"b", NodeKind::Task, "right"});
    g.add_node(Node{"e", NodeKind::EndEvent, ""});
    g.add_edge(Edge{"s", "g", ""});
    g.add_edge(Edge{"g", "a", "x"});
    g.add_edge(Edge{"g", "b", "y"});
    g.add_edge(Edge{"a", "e", ""});
    g.add_edge(Edge{"b", "e", ""});
    CHECK(lint(g).empty());
}

TEST_CASE("mixed split-merge gateway triggers R5") {
    ProcessGraph g;
    g.add_node(Node{"s1", NodeKind::StartEvent, ""});
    g.add_node(Node{"s2", NodeKind::StartEvent, ""});
    g.add_node(Node{"g", NodeKind::ExclusiveGateway, ""});
    g.add_node(Node{"a", NodeKind::Task, "left"});
    g.add_node(Node{"b", NodeKind::Task, "right"});
    g.add_node(Node{"e1", NodeKind::EndEvent, ""});
    g.add_node(Node{"e2", NodeKind::EndEvent, ""});
    g.add_edge(Edge{"s1", "g", ""});
    g.add_edge(Edge{"s2", "g", ""});
    g.add_edge(Edge{"g", "a", "x"});
    g.add_edge(Edge{"g", "b", "y"});
    g.add_edge(Edge{"a", "e1", ""});
    g.add_edge(Edge{"b", "e2", ""});
    CHECK(rule_ids(g) == std::vector<std::string>{"R5"});
}

TEST_CASE("lint always returns, even on pathological graphs") {
    std::mt19937_64 rng(0xabcd);
    for (int i = 0; i < 200; ++i) {
        const ProcessGraph g = pmeval::testing::random_graph(rng, 10);
        (void)lint(g);  // must not throw
    }
    CHECK(lint(ProcessGraph{}).size() == 2);  // R1 + R2 on the empty graph
}

TEST_CASE("findings serialize to JSON") {
    ProcessGraph g;
    g.add_node(Node{"t", NodeKind::Task, "work"});
    g.add_node(Node{"e", NodeKind::EndEvent, ""});
    g.add_edge(Edge{"t", "e", ""});
    const auto j = lint_to_json(lint(g));
    REQUIRE(j.is_array());
    CHECK(j.size() == 1);
    CHECK(j[0]["rule"] == "R1");
    CHECK(j[0]["severity"] == "error");
}
