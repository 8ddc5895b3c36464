#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmeval/diagnostics.hpp"
#include "pmeval/graph.hpp"
#include "pmeval/notation.hpp"

namespace pmeval::detail {

struct NumberedLine {
    int number;  // 1-based in the original text
    std::string text;
};

struct Block {
    std::vector<NumberedLine> lines;
    std::vector<Diagnostic> issues;
    bool fatal = false;
};

// Locates the graph block inside LLM output: content between code fences, or
// everything from the first header line on. Surrounding prose is stripped
// with a repaired diagnostic (an error when repair is off).
Block extract_block(std::string_view text, bool repair,
                    const std::function<bool(const std::string&)>& is_header);

// Label escaping shared by both emitters: backslash, double quote, newline.
std::string escape_label(std::string_view raw);
std::string unescape_label(std::string_view quoted_body);

// Event discrimination from the label ("Start"/"Begin" vs "End"/"Stop"/...).
std::optional<NodeKind> event_kind_from_label(std::string_view label);
// Strips the leading discriminator word plus separator from an event label.
std::string event_label_rest(std::string_view label);

struct GatewayLabel {
    NodeKind kind = NodeKind::ExclusiveGateway;
    std::string rest;
    bool discriminated = false;  // false: no XOR/AND marker found
};
GatewayLabel gateway_from_label(std::string_view label);

// Identifier usable in both notations: [A-Za-z_][A-Za-z0-9_]*.
std::string sanitize_id(std::string_view id);

// Accumulates node declarations/edges, then materializes a ProcessGraph with
// the shared rules: undeclared endpoints synthesized as tasks, undiscriminated
// events resolved by degree, conflicting redeclarations reported as errors.
class GraphBuilder {
  public:
    explicit GraphBuilder(std::vector<Diagnostic>& issues) : issues_(issues) {}

    // kind == nullopt marks an event whose start/end flavour is still unknown.
    void declare(const std::string& id, std::optional<NodeKind> kind, std::string label, int line);
    void reference(const std::string& id, int line);
    void edge(const std::string& source, const std::string& target, std::string condition,
              int line);

    // Returns nullopt when an unrepaired error was recorded (also via issues_).
    std::optional<ProcessGraph> build();

  private:
    struct Decl {
        std::optional<NodeKind> kind;
        std::string label;
        int line = 0;
        bool declared = false;  // false: only seen as an edge endpoint
    };
    struct PendingEdge {
        std::string source, target, condition;
        int line;
    };

    void warn(int line, std::string msg, bool repaired = false) {
        issues_.push_back({Severity::Warning, line, 0, std::move(msg), repaired});
    }
    void error(int line, std::string msg) {
        issues_.push_back({Severity::Error, line, 0, std::move(msg), false});
    }

    std::vector<Diagnostic>& issues_;
    std::vector<std::string> order_;  // declaration order of ids
    std::map<std::string, Decl, std::less<>> decls_;
    std::vector<PendingEdge> edges_;
};

}  // namespace pmeval::detail
