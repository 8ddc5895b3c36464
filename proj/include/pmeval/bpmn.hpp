#pragma once

#include <string_view>
#include <vector>

#include "pmeval/diagnostics.hpp"
#include "pmeval/graph.hpp"

namespace pmeval {

struct BpmnParseResult {
    ProcessGraph graph;
    std::vector<Diagnostic> warnings;
};

// Reads the supported BPMN 2.0 subset (startEvent, endEvent, task/userTask/
// serviceTask, exclusiveGateway, parallelGateway, sequenceFlow). Pools, lanes
// and sub-processes are flattened into one graph; unsupported elements are
// skipped with warnings, as are sequence flows touching them. Throws
// ParseError on malformed XML and on flows referencing unknown ids.
BpmnParseResult parse_bpmn_xml(std::string_view xml_text);

}  // namespace pmeval
