#include <cctype>

#include "notation_util.hpp"
#include "pmeval/notation.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

using detail::GraphBuilder;

bool is_mer_header(const std::string& line) {
    const std::string t = to_lower(trim(line));
    if (t.rfind("flowchart", 0) != 0 && t.rfind("graph", 0) != 0) return false;
    const std::vector<std::string> words = split_ws(t);
    if (words.size() < 2) return false;
    static const char* dirs[] = {"td", "tb", "lr", "rl", "bt"};
    for (const char* d : dirs)
        if (words[1] == d) return true;
    return false;
}

bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

struct LineScanner {
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    bool lookahead(std::string_view t) const { return s.substr(pos, t.size()) == t; }
};

// Reads until the closing delimiter; honours one level of double quotes.
// Returns nullopt when the delimiter never closes.
std::optional<std::string> read_until(LineScanner& sc, std::string_view close) {
    std::string body;
    while (sc.pos < sc.s.size()) {
        if (sc.s[sc.pos] == '"') {
            body.push_back(sc.s[sc.pos++]);
            while (sc.pos < sc.s.size()) {
                const char c = sc.s[sc.pos];
                body.push_back(c);
                ++sc.pos;
                if (c == '\\' && sc.pos < sc.s.size()) {
                    body.push_back(sc.s[sc.pos++]);
                    continue;
                }
                if (c == '"') break;
            }
            continue;
        }
        if (sc.lookahead(close)) {
            sc.pos += close.size();
            return body;
        }
        body.push_back(sc.s[sc.pos++]);
    }
    return std::nullopt;
}

// Shape body text -> displayed label (quotes removed, escapes resolved).
std::string shape_label(std::string_view body) {
    const std::string t = trim(body);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
        return detail::unescape_label(std::string_view(t).substr(1, t.size() - 2));
    return t;
}

struct NodeRef {
    std::string id;
    bool declared = false;                 // carried a shape
    std::optional<NodeKind> kind;          // nullopt: event pending start/end resolution
    std::string label;
    bool gateway_defaulted = false;
};

// id [shape body] — returns nullopt when the segment is not a node reference.
std::optional<NodeRef> parse_node_ref(const std::string& segment, std::vector<Diagnostic>& issues,
                                      int line) {
    LineScanner sc{segment};
    sc.skip_ws();
    NodeRef ref;
    while (sc.pos < sc.s.size() && id_char(sc.s[sc.pos])) ref.id.push_back(sc.s[sc.pos++]);
    if (ref.id.empty()) return std::nullopt;
    sc.skip_ws();
    if (sc.pos >= sc.s.size()) return ref;  // bare reference

    struct Delim {
        std::string_view open, close;
        char shape;  // 'e' event, 't' task, 'g' gateway
    };
    static const Delim delims[] = {
        {"((", "))", 'e'}, {"([", "])", 'e'}, {"[[", "]]", 't'}, {"{{", "}}", 'g'},
        {"(", ")", 'e'},   {"[", "]", 't'},   {"{", "}", 'g'},
    };
    for (const Delim& d : delims) {
        if (!sc.lookahead(d.open)) continue;
        sc.pos += d.open.size();
        std::optional<std::string> body = read_until(sc, d.close);
        if (!body) {
            issues.push_back({Severity::Error, line, 0,
                              "unclosed node shape for " + ref.id, false});
            return std::nullopt;
        }
        sc.skip_ws();
        if (sc.pos != sc.s.size()) {
            issues.push_back({Severity::Error, line, 0,
                              "unexpected text after node " + ref.id, false});
            return std::nullopt;
        }
        ref.declared = true;
        const std::string label = shape_label(*body);
        if (d.shape == 'e') {
            ref.kind = detail::event_kind_from_label(label);
            ref.label = ref.kind ? detail::event_label_rest(label) : label;
        } else if (d.shape == 't') {
            ref.kind = NodeKind::Task;
            ref.label = label;
        } else {
            const detail::GatewayLabel gw = detail::gateway_from_label(label);
            ref.kind = gw.kind;
            ref.label = gw.rest;
            ref.gateway_defaulted = !gw.discriminated;
        }
        return ref;
    }
    return std::nullopt;  // trailing junk after a bare id
}

struct ArrowHit {
    std::size_t begin = 0;  // offset of the first '-'
    std::size_t end = 0;    // offset one past the arrow (and its |label|)
    std::string condition;
    bool found = false;
};

ArrowHit find_arrow(const std::string& s, std::size_t from) {
    ArrowHit hit;
    bool in_quotes = false;
    for (std::size_t i = from; i + 2 < s.size() + 1; ++i) {
        const char c = s[i];
        if (c == '"') in_quotes = !in_quotes;
        if (in_quotes || c != '-' || i + 1 >= s.size() || s[i + 1] != '-') continue;
        std::size_t j = i;
        while (j < s.size() && s[j] == '-') ++j;
        if (j >= s.size() || s[j] != '>') continue;
        hit.begin = i;
        ++j;
        // optional |label|
        std::size_t k = j;
        while (k < s.size() && s[k] == ' ') ++k;
        if (k < s.size() && s[k] == '|') {
            LineScanner sc{s, k + 1};
            std::optional<std::string> body = read_until(sc, "|");
            if (body) {
                hit.condition = shape_label(*body);
                j = sc.pos;
            }
        }
        hit.end = j;
        hit.found = true;
        return hit;
    }
    return hit;
}

}  // namespace

ParseReport parse_mer(std::string_view text, const ParseOptions& opts) {
    ParseReport report;
    detail::Block block = detail::extract_block(text, opts.repair, is_mer_header);
    report.issues = std::move(block.issues);
    if (block.fatal) return report;

    GraphBuilder builder(report.issues);
    bool have_header = false;
    bool have_statement = false;

    auto register_node = [&](const NodeRef& ref, int line) {
        if (ref.declared) {
            builder.declare(ref.id, ref.kind, ref.label, line);
            if (ref.gateway_defaulted)
                report.issues.push_back(
                    {Severity::Warning, line, 0,
                     "gateway " + ref.id +
                         " has no XOR/AND discriminator; defaulting to exclusive",
                     false});
        } else {
            builder.reference(ref.id, line);
        }
    };

    for (const detail::NumberedLine& nl : block.lines) {
        std::string line = trim(nl.text);
        while (!line.empty() && line.back() == ';') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("%%", 0) == 0) continue;
        if (is_mer_header(line)) {
            if (have_header)
                report.issues.push_back(
                    {Severity::Warning, nl.number, 0, "duplicate header line ignored", false});
            have_header = true;
            continue;
        }
        const std::string lower = to_lower(line);
        const std::string first_word =
            lower.substr(0, lower.find_first_of(" \t"));
        if (first_word == "subgraph" || first_word == "end") {
            report.issues.push_back({Severity::Warning, nl.number, 0,
                                     "subgraph structure ignored; contents are kept", false});
            continue;
        }
        if (first_word == "classdef" || first_word == "class" || first_word == "style" ||
            first_word == "linkstyle" || first_word == "click" || first_word == "direction")
            continue;  // presentation-only statements

        // node statement or arrow chain
        std::vector<std::pair<NodeRef, std::string>> chain;  // node + condition of arrow after it
        bool parsed = true;
        std::size_t cursor = 0;
        for (;;) {
            const ArrowHit arrow = find_arrow(line, cursor);
            const std::string segment =
                trim(arrow.found ? line.substr(cursor, arrow.begin - cursor)
                                 : line.substr(cursor));
            std::vector<Diagnostic> local;
            std::optional<NodeRef> ref = parse_node_ref(segment, local, nl.number);
            if (!ref) {
                parsed = false;
                break;
            }
            report.issues.insert(report.issues.end(), local.begin(), local.end());
            chain.emplace_back(std::move(*ref), arrow.condition);
            if (!arrow.found) break;
            cursor = arrow.end;
        }
        if (parsed && !chain.empty()) {
            for (std::size_t i = 0; i < chain.size(); ++i) {
                register_node(chain[i].first, nl.number);
                if (i + 1 < chain.size())
                    builder.edge(chain[i].first.id, chain[i + 1].first.id, chain[i].second,
                                 nl.number);
            }
            have_statement = true;
            continue;
        }

        // not a statement: prose (repairable) or a syntax error
        const bool graph_like = find_arrow(line, 0).found ||
                                line.find_first_of("[]{}()") != std::string::npos;
        if (opts.repair && !graph_like) {
            report.issues.push_back(
                {Severity::Warning, nl.number, 0, "dropped non-graph line", true});
        } else {
            report.issues.push_back(
                {Severity::Error, nl.number, 0, "unparseable statement: " + line, false});
        }
    }

    if (!have_header && !have_statement) {
        report.issues.push_back({Severity::Error, 1, 1, "empty input: no flowchart found", false});
        return report;
    }
    if (!have_header) {
        if (!opts.repair) {
            report.issues.push_back(
                {Severity::Error, 1, 1, "missing flowchart header (repair disabled)", false});
            return report;
        }
        report.issues.push_back(
            {Severity::Warning, 1, 1, "missing header; assumed 'flowchart TD'", true});
    }
    if (have_header && !have_statement)
        report.issues.push_back({Severity::Warning, 1, 1, "empty model", false});

    report.graph = builder.build();
    return report;
}

}  // namespace pmeval
