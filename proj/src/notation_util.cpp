#include "notation_util.hpp"

#include <algorithm>
#include <cctype>

#include "pmeval/text.hpp"

namespace pmeval::detail {

namespace {

bool is_fence(const std::string& line) { return trim(line).rfind("```", 0) == 0; }

}  // namespace

Block extract_block(std::string_view text, bool repair,
                    const std::function<bool(const std::string&)>& is_header) {
    Block block;
    std::vector<std::string> raw = split_lines(text);
    std::vector<NumberedLine> lines;
    for (std::size_t i = 0; i < raw.size(); ++i)
        lines.push_back({static_cast<int>(i + 1), raw[i]});

    std::vector<std::size_t> fences;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (is_fence(lines[i].text)) fences.push_back(i);

    if (!fences.empty()) {
        if (!repair) {
            block.issues.push_back({Severity::Error, lines[fences[0]].number, 1,
                                    "code fence in input (repair disabled)", false});
            block.fatal = true;
            return block;
        }
        // pick the first fenced region that looks like a graph; fall back to
        // the first region
        std::size_t chosen = 0;
        bool found = false;
        for (std::size_t f = 0; f < fences.size() && !found; f += 2) {
            const std::size_t begin = fences[f] + 1;
            const std::size_t end = f + 1 < fences.size() ? fences[f + 1] : lines.size();
            for (std::size_t i = begin; i < end; ++i) {
                if (is_header(lines[i].text) || lines[i].text.find("->") != std::string::npos) {
                    chosen = f;
                    found = true;
                    break;
                }
            }
        }
        const std::size_t begin = fences[chosen] + 1;
        const std::size_t end =
            chosen + 1 < fences.size() ? fences[chosen + 1] : lines.size();
        block.lines.assign(lines.begin() + static_cast<std::ptrdiff_t>(begin),
                           lines.begin() + static_cast<std::ptrdiff_t>(end));
        block.issues.push_back({Severity::Warning, lines[fences[chosen]].number, 1,
                                "stripped code fence and surrounding text", true});
        return block;
    }

    // no fences: drop prose before the first header line
    std::size_t start = 0;
    bool saw_prose = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string t = trim(lines[i].text);
        if (t.empty()) continue;
        if (is_header(lines[i].text)) {
            start = i;
            break;
        }
        saw_prose = true;
    }
    if (saw_prose && start > 0) {
        if (!repair) {
            block.issues.push_back({Severity::Error, lines[0].number, 1,
                                    "text before graph header (repair disabled)", false});
            block.fatal = true;
            return block;
        }
        block.issues.push_back({Severity::Warning, lines[0].number, 1,
                                "dropped " + std::to_string(start) + " line(s) before the header",
                                true});
    }
    block.lines.assign(lines.begin() + static_cast<std::ptrdiff_t>(start), lines.end());
    return block;
}

std::string escape_label(std::string_view raw) {
    std::string out;
    out.reserve(raw.size() + 4);
    for (char c : raw) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string unescape_label(std::string_view body) {
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '\\' && i + 1 < body.size()) {
            const char n = body[++i];
            if (n == 'n') out.push_back('\n');
            else if (n == 'r') out.push_back('\r');
            else out.push_back(n);
        } else {
            out.push_back(body[i]);
        }
    }
    return out;
}

std::optional<NodeKind> event_kind_from_label(std::string_view label) {
    const std::vector<std::string> words = split_ws(canon_label(label));
    if (words.empty()) return std::nullopt;
    const std::string& w = words.front();
    if (w == "start" || w == "begin") return NodeKind::StartEvent;
    if (w == "end" || w == "stop" || w == "finish" || w == "done") return NodeKind::EndEvent;
    return std::nullopt;
}

std::string event_label_rest(std::string_view label) {
    std::string t = trim(label);
    std::size_t i = 0;
    while (i < t.size() && std::isalpha(static_cast<unsigned char>(t[i]))) ++i;
    std::string rest = t.substr(i);
    while (!rest.empty() && (rest.front() == ':' || rest.front() == '-' || rest.front() == ' '))
        rest.erase(rest.begin());
    return trim(rest);
}

GatewayLabel gateway_from_label(std::string_view label) {
    GatewayLabel out;
    const std::string t = trim(label);
    if (t == "+" || starts_with_ci(t, "+")) {
        out.kind = NodeKind::ParallelGateway;
        out.discriminated = true;
        out.rest = trim(t.substr(1));
        return out;
    }
    if (t == "X" || t == "x") {
        out.kind = NodeKind::ExclusiveGateway;
        out.discriminated = true;
        return out;
    }
    const std::vector<std::string> words = split_ws(canon_label(t));
    std::string first = words.empty() ? std::string() : words.front();
    if (first == "xor" || first == "exclusive") {
        out.kind = NodeKind::ExclusiveGateway;
        out.discriminated = true;
    } else if (first == "and" || first == "parallel") {
        out.kind = NodeKind::ParallelGateway;
        out.discriminated = true;
    } else {
        out.kind = NodeKind::ExclusiveGateway;
        out.rest = t;
        return out;
    }
    std::size_t i = 0;
    while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != ':') ++i;
    std::string rest = t.substr(i);
    while (!rest.empty() && (rest.front() == ':' || rest.front() == ' ')) rest.erase(rest.begin());
    out.rest = trim(rest);
    return out;
}

std::string sanitize_id(std::string_view id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out.push_back(c);
        else out.push_back('_');
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "n_" + out;
    return out;
}

void GraphBuilder::declare(const std::string& id, std::optional<NodeKind> kind, std::string label,
                           int line) {
    auto [it, fresh] = decls_.try_emplace(id);
    Decl& d = it->second;
    if (fresh) order_.push_back(id);
    if (!d.declared) {
        d.kind = kind;
        d.label = std::move(label);
        d.line = line;
        d.declared = true;
        return;
    }
    // redeclaration; nullopt stands for an event of still-unknown flavour
    bool conflict = d.kind.has_value() && kind.has_value() && *d.kind != *kind;
    if ((!d.kind && kind && !is_event(*kind)) || (!kind && d.kind && !is_event(*d.kind)))
        conflict = true;
    if (conflict) {
        error(line, "node " + id + " redeclared with a conflicting shape (first declared at line " +
                        std::to_string(d.line) + ")");
        return;
    }
    if (!d.kind && kind) d.kind = kind;  // pending event resolved by a later decl
    if (d.label.empty() && !label.empty()) {
        d.label = std::move(label);
    } else if (!label.empty() && label != d.label) {
        warn(line, "node " + id + " redeclared with a different label; keeping the first (line " +
                       std::to_string(d.line) + ")");
    }
}

void GraphBuilder::reference(const std::string& id, int line) {
    auto [it, fresh] = decls_.try_emplace(id);
    if (fresh) {
        order_.push_back(id);
        it->second.line = line;
    }
}

void GraphBuilder::edge(const std::string& source, const std::string& target,
                        std::string condition, int line) {
    reference(source, line);
    reference(target, line);
    edges_.push_back({source, target, std::move(condition), line});
}

std::optional<ProcessGraph> GraphBuilder::build() {
    ProcessGraph g;

    // degree counts to resolve pending events
    std::map<std::string, std::size_t> outs;
    for (const PendingEdge& e : edges_) ++outs[e.source];

    for (const std::string& id : order_) {
        Decl& d = decls_.at(id);
        if (!d.declared) {
            warn(d.line, "node " + id + " used in an edge but never declared; treated as a task",
                 true);
            d.kind = NodeKind::Task;
            d.label = id;
        }
        if (!d.kind) {
            const bool has_out = outs.contains(id) && outs[id] > 0;
            d.kind = has_out ? NodeKind::StartEvent : NodeKind::EndEvent;
            warn(d.line, "event " + id + " has no start/end marker in its label; classified by " +
                             (has_out ? std::string("outgoing flow as a start event")
                                      : std::string("missing outgoing flow as an end event")));
        }
        if (*d.kind == NodeKind::Task && d.label.empty()) {
            warn(d.line, "task " + id + " has an empty label; using its id");
            d.label = id;
        }
        g.add_node(Node{id, *d.kind, d.label});
    }

    for (const PendingEdge& e : edges_) {
        if (e.source == e.target) {
            warn(e.line, "self-loop edge on " + e.source + " dropped");
            continue;
        }
        if (!g.add_edge(Edge{e.source, e.target, e.condition}))
            warn(e.line, "duplicate edge " + e.source + " -> " + e.target + " dropped");
    }

    if (has_fatal(issues_)) return std::nullopt;
    return g;
}

}  // namespace pmeval::detail
