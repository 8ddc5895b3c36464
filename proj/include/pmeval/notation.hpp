#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmeval/diagnostics.hpp"
#include "pmeval/graph.hpp"

namespace pmeval {

enum class NotationKind { MER, GV };

std::string_view notation_name(NotationKind k);  // "MER" / "GV"
std::optional<NotationKind> notation_from_name(std::string_view name);

// Outcome of parsing LLM-produced notation text. `graph` is absent exactly
// when an unrepaired error was recorded. Repairs applied along the way are
// kept as warning diagnostics with repaired=true, so raw-vs-repaired rates
// stay reportable.
struct ParseReport {
    std::optional<ProcessGraph> graph;
    std::vector<Diagnostic> issues;

    bool ok() const { return graph.has_value(); }
    std::size_t repair_count() const {
        std::size_t n = 0;
        for (const auto& d : issues)
            if (d.repaired) ++n;
        return n;
    }
};

struct ParseOptions {
    // Best-effort recovery: strip code fences and surrounding prose, synthesize
    // undeclared nodes, assume a missing header, close an unclosed digraph.
    // With repair off those situations become errors instead.
    bool repair = true;
};

ParseReport parse_mer(std::string_view text, const ParseOptions& opts = {});
ParseReport parse_gv(std::string_view text, const ParseOptions& opts = {});
ParseReport parse_notation(NotationKind kind, std::string_view text,
                           const ParseOptions& opts = {});

// Deterministic emitters (nodes sorted by id). Emitted text re-parses to a
// graph with an identical canonical tuple set.
std::string emit_mer(const ProcessGraph& g);
std::string emit_gv(const ProcessGraph& g);
std::string emit_notation(NotationKind kind, const ProcessGraph& g);

}  // namespace pmeval
