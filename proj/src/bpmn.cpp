#include "pmeval/bpmn.hpp"

#include <set>

#include "pmeval/text.hpp"
#include "xml.hpp"

namespace pmeval {

namespace {

struct FlowDecl {
    std::string source;
    std::string target;
    std::string condition;
    int line;
};

struct Collector {
    ProcessGraph graph;
    std::vector<Diagnostic> warnings;
    std::vector<FlowDecl> flows;
    std::set<std::string> skipped_ids;

    void warn(const xml::Element& el, std::string msg) {
        warnings.push_back({Severity::Warning, el.line, el.column, std::move(msg), false});
    }

    void add_flow_node(const xml::Element& el, NodeKind kind) {
        const std::string* id = el.attr("id");
        if (!id || id->empty())
            throw ParseError("<" + el.qname + "> is missing an id attribute", el.line, el.column);
        const std::string* name = el.attr("name");
        std::string label = name ? trim(*name) : std::string();
        if (kind == NodeKind::Task && label.empty()) {
            warn(el, "task " + *id + " has no name; using its id as label");
            label = *id;
        }
        if (graph.has_node(*id))
            throw ParseError("duplicate element id " + *id, el.line, el.column);
        graph.add_node(Node{*id, kind, label});
    }

    void add_sequence_flow(const xml::Element& el) {
        const std::string* src = el.attr("sourceRef");
        const std::string* tgt = el.attr("targetRef");
        if (!src || !tgt)
            throw ParseError("sequenceFlow is missing sourceRef/targetRef", el.line, el.column);
        std::string condition;
        if (const std::string* name = el.attr("name")) condition = trim(*name);
        if (condition.empty()) {
            for (const xml::Element& child : el.children) {
                if (child.name == "conditionExpression") condition = trim(child.text);
            }
        }
        flows.push_back({*src, *tgt, condition, el.line});
    }

    void collect(const xml::Element& el) {
        for (const xml::Element& child : el.children) {
            const std::string& n = child.name;
            if (n == "startEvent") add_flow_node(child, NodeKind::StartEvent);
            else if (n == "endEvent") add_flow_node(child, NodeKind::EndEvent);
            else if (n == "task" || n == "userTask" || n == "serviceTask")
                add_flow_node(child, NodeKind::Task);
            else if (n == "exclusiveGateway") add_flow_node(child, NodeKind::ExclusiveGateway);
            else if (n == "parallelGateway") add_flow_node(child, NodeKind::ParallelGateway);
            else if (n == "sequenceFlow") add_sequence_flow(child);
            else if (n == "process" || n == "laneSet" || n == "lane" || n == "collaboration" ||
                     n == "participant") {
                collect(child);  // containers are flattened
            } else if (n == "subProcess") {
                // Flattened: the sub-process itself becomes a task so its
                // boundary flows stay attached; its contents join the graph.
                warn(child, "subProcess flattened into parent process");
                add_flow_node(child, NodeKind::Task);
                collect(child);
            } else if (n == "incoming" || n == "outgoing" || n == "documentation" ||
                       n == "extensionElements" || n == "BPMNDiagram") {
                // structural noise; nothing to extract
            } else {
                if (const std::string* id = child.attr("id")) {
                    skipped_ids.insert(*id);
                    warn(child, "unsupported element <" + child.qname + "> skipped");
                }
                collect(child);
            }
        }
    }

    void resolve_flows() {
        for (const FlowDecl& f : flows) {
            const bool src_skipped = skipped_ids.contains(f.source);
            const bool tgt_skipped = skipped_ids.contains(f.target);
            if (src_skipped || tgt_skipped) {
                warnings.push_back({Severity::Warning, f.line, 0,
                                    "sequenceFlow touching skipped element dropped (" + f.source +
                                        " -> " + f.target + ")",
                                    false});
                continue;
            }
            if (!graph.has_node(f.source))
                throw ParseError("sequenceFlow references unknown id " + f.source, f.line, 0);
            if (!graph.has_node(f.target))
                throw ParseError("sequenceFlow references unknown id " + f.target, f.line, 0);
            if (f.source == f.target) {
                warnings.push_back(
                    {Severity::Warning, f.line, 0, "self-loop sequenceFlow dropped", false});
                continue;
            }
            if (!graph.add_edge(Edge{f.source, f.target, f.condition}))
                warnings.push_back(
                    {Severity::Warning, f.line, 0,
                     "duplicate sequenceFlow dropped (" + f.source + " -> " + f.target + ")",
                     false});
        }
    }
};

}  // namespace

BpmnParseResult parse_bpmn_xml(std::string_view xml_text) {
    const xml::Element root = xml::parse(xml_text);

    Collector c;
    if (root.name == "definitions") {
        c.collect(root);
    } else if (root.name == "process") {
        xml::Element wrapper;
        wrapper.children.push_back(root);
        c.collect(wrapper);
    } else {
        throw ParseError("expected <definitions> or <process> document element, got <" +
                             root.qname + ">",
                         root.line, root.column);
    }
    c.resolve_flows();
    return {std::move(c.graph), std::move(c.warnings)};
}

}  // namespace pmeval
