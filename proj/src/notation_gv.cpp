#include <cctype>
#include <map>

#include "notation_util.hpp"
#include "pmeval/notation.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

using detail::GraphBuilder;

bool is_gv_header(const std::string& line) {
    const std::string t = to_lower(trim(line));
    return t.rfind("digraph", 0) == 0 || t.rfind("strict", 0) == 0 || t.rfind("graph", 0) == 0;
}

struct Token {
    enum class Type { Name, String, Punct, Arrow, UndirectedEdge, End };
    Type type = Type::End;
    std::string text;
    int line = 0;
};

class Lexer {
  public:
    Lexer(const std::vector<detail::NumberedLine>& lines, std::vector<Diagnostic>& issues)
        : issues_(issues) {
        for (const auto& nl : lines) {
            src_ += nl.text;
            src_ += '\n';
            line_of_.resize(src_.size(), nl.number);
        }
        next_ = lex();
    }

    const Token& peek() const { return next_; }
    Token take() {
        Token t = std::move(next_);
        next_ = lex();
        return t;
    }

  private:
    int line_at(std::size_t p) const {
        return p < line_of_.size() ? line_of_[p] : (line_of_.empty() ? 1 : line_of_.back());
    }

    Token lex() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ >= src_.size()) return {Token::Type::End, "", line_at(pos_)};
            if (src_[pos_] == '#' || (src_[pos_] == '/' && pos_ + 1 < src_.size() &&
                                      src_[pos_ + 1] == '/')) {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            if (src_[pos_] == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                const int l = line_at(pos_);
                pos_ += 2;
                while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/'))
                    ++pos_;
                if (pos_ + 1 >= src_.size()) {
                    issues_.push_back({Severity::Warning, l, 0, "unterminated comment", false});
                    pos_ = src_.size();
                    continue;
                }
                pos_ += 2;
                continue;
            }
            break;
        }

        const int line = line_at(pos_);
        const char c = src_[pos_];
        if (c == '"') {
            ++pos_;
            std::string body;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                    body.push_back(src_[pos_++]);
                }
                body.push_back(src_[pos_++]);
            }
            if (pos_ >= src_.size())
                issues_.push_back({Severity::Warning, line, 0, "unterminated string", false});
            else
                ++pos_;
            return {Token::Type::String, detail::unescape_label(body), line};
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            pos_ += 2;
            return {Token::Type::Arrow, "->", line};
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
            pos_ += 2;
            return {Token::Type::UndirectedEdge, "--", line};
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                    src_[pos_] == '.'))
                name.push_back(src_[pos_++]);
            return {Token::Type::Name, std::move(name), line};
        }
        ++pos_;
        return {Token::Type::Punct, std::string(1, c), line};
    }

    std::string src_;
    std::vector<int> line_of_;
    std::size_t pos_ = 0;
    Token next_;
    std::vector<Diagnostic>& issues_;
};

using AttrList = std::vector<std::pair<std::string, std::string>>;

const std::string* attr_get(const AttrList& attrs, std::string_view key) {
    for (const auto& [k, v] : attrs)
        if (iequals(k, key)) return &v;
    return nullptr;
}

struct NodeInterp {
    std::optional<NodeKind> kind;  // nullopt: event pending start/end resolution
    std::string label;
    bool gateway_defaulted = false;
    bool shaped = false;
};

NodeInterp interpret_node(const std::string& id, const AttrList& attrs,
                          const std::string& default_shape) {
    NodeInterp out;
    const std::string* label_attr = attr_get(attrs, "label");
    // labels are kept verbatim; classification helpers normalize internally
    const std::string label = label_attr ? *label_attr : std::string();
    std::string shape = default_shape;
    if (const std::string* s = attr_get(attrs, "shape")) shape = to_lower(trim(*s));
    out.shaped = !shape.empty();

    if (shape == "circle") {
        out.kind = NodeKind::StartEvent;
        out.label = detail::event_kind_from_label(label) ? detail::event_label_rest(label) : label;
    } else if (shape == "doublecircle") {
        out.kind = NodeKind::EndEvent;
        out.label = detail::event_kind_from_label(label) ? detail::event_label_rest(label) : label;
    } else if (shape == "ellipse" || shape == "oval") {
        out.kind = detail::event_kind_from_label(label);  // may stay pending
        out.label = out.kind ? detail::event_label_rest(label) : label;
    } else if (shape == "diamond" || shape == "mdiamond") {
        detail::GatewayLabel gw = detail::gateway_from_label(label);
        const std::string* kind_attr = attr_get(attrs, "kind");
        if (!kind_attr) kind_attr = attr_get(attrs, "class");
        if (kind_attr) {
            const std::string k = to_lower(trim(*kind_attr));
            if (k == "xor" || k == "exclusive") {
                gw.kind = NodeKind::ExclusiveGateway;
                gw.discriminated = true;
            } else if (k == "and" || k == "parallel") {
                gw.kind = NodeKind::ParallelGateway;
                gw.discriminated = true;
            }
        }
        out.kind = gw.kind;
        out.label = gw.rest;
        out.gateway_defaulted = !gw.discriminated;
    } else {
        // box and friends, unknown shapes, shapeless nodes: tasks
        out.kind = NodeKind::Task;
        out.label = label.empty() ? id : label;
    }
    return out;
}

class GvParser {
  public:
    GvParser(Lexer& lex, ParseReport& report, bool repair)
        : lex_(lex), report_(report), repair_(repair), builder_(report.issues) {}

    void run() {
        Token t = lex_.take();
        bool undirected = false;
        if (t.type == Token::Type::Name && iequals(t.text, "strict")) t = lex_.take();
        if (t.type == Token::Type::Name && iequals(t.text, "digraph")) {
            // ok
        } else if (t.type == Token::Type::Name && iequals(t.text, "graph")) {
            undirected = true;
            report_.issues.push_back({Severity::Warning, t.line, 0,
                                      "undirected graph treated as directed", true});
        } else {
            report_.issues.push_back(
                {Severity::Error, t.line, 0, "expected 'digraph' at the start of the model",
                 false});
            return;
        }
        t = lex_.take();
        if (t.type == Token::Type::Name || t.type == Token::Type::String) t = lex_.take();
        if (!(t.type == Token::Type::Punct && t.text == "{")) {
            report_.issues.push_back({Severity::Error, t.line, 0, "expected '{'", false});
            return;
        }
        statements(/*depth=*/0);
        (void)undirected;

        // trailing content after the closing brace
        if (lex_.peek().type != Token::Type::End) {
            if (repair_) {
                report_.issues.push_back({Severity::Warning, lex_.peek().line, 0,
                                          "dropped text after the closing brace", true});
            } else {
                report_.issues.push_back({Severity::Error, lex_.peek().line, 0,
                                          "unexpected text after the closing brace", false});
            }
        }

        if (!saw_statement_)
            report_.issues.push_back({Severity::Warning, 1, 0, "empty model", false});
        report_.graph = builder_.build();
    }

  private:
    void statements(int depth) {
        for (;;) {
            Token t = lex_.peek();
            if (t.type == Token::Type::End) {
                if (repair_) {
                    report_.issues.push_back(
                        {Severity::Warning, t.line, 0, "inserted missing '}'", true});
                } else {
                    report_.issues.push_back(
                        {Severity::Error, t.line, 0, "missing closing '}'", false});
                }
                return;
            }
            if (t.type == Token::Type::Punct && t.text == "}") {
                lex_.take();
                return;
            }
            if (t.type == Token::Type::Punct && t.text == ";") {
                lex_.take();
                continue;
            }
            if (t.type == Token::Type::Name && iequals(t.text, "subgraph")) {
                lex_.take();
                report_.issues.push_back({Severity::Warning, t.line, 0,
                                          "subgraph flattened into the main graph", true});
                Token u = lex_.peek();
                if (u.type == Token::Type::Name || u.type == Token::Type::String) lex_.take();
                u = lex_.peek();
                if (u.type == Token::Type::Punct && u.text == "{") {
                    lex_.take();
                    if (depth < 32) statements(depth + 1);
                }
                continue;
            }
            if (t.type == Token::Type::Name || t.type == Token::Type::String) {
                statement();
                continue;
            }
            report_.issues.push_back(
                {Severity::Error, t.line, 0, "unexpected token '" + t.text + "'", false});
            lex_.take();
        }
    }

    AttrList attr_list() {
        AttrList attrs;
        while (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "[") {
            lex_.take();
            for (;;) {
                Token t = lex_.peek();
                if (t.type == Token::Type::End) return attrs;
                if (t.type == Token::Type::Punct && t.text == "]") {
                    lex_.take();
                    break;
                }
                if (t.type == Token::Type::Punct && (t.text == "," || t.text == ";")) {
                    lex_.take();
                    continue;
                }
                if (t.type != Token::Type::Name && t.type != Token::Type::String) {
                    report_.issues.push_back(
                        {Severity::Error, t.line, 0, "bad attribute list", false});
                    lex_.take();
                    continue;
                }
                const std::string key = lex_.take().text;
                std::string value;
                if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "=") {
                    lex_.take();
                    Token v = lex_.peek();
                    if (v.type == Token::Type::Name || v.type == Token::Type::String)
                        value = lex_.take().text;
                }
                attrs.emplace_back(key, value);
            }
        }
        return attrs;
    }

    void statement() {
        Token first = lex_.take();
        std::string id = first.text;

        // graph-level assignment: rankdir=LR and friends
        if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "=") {
            lex_.take();
            if (lex_.peek().type == Token::Type::Name || lex_.peek().type == Token::Type::String)
                lex_.take();
            return;
        }

        // default-attribute statements
        if (first.type == Token::Type::Name &&
            (iequals(id, "node") || iequals(id, "edge") || iequals(id, "graph"))) {
            const AttrList defaults = attr_list();
            if (iequals(id, "node")) {
                if (const std::string* s = attr_get(defaults, "shape"))
                    default_node_shape_ = to_lower(trim(*s));
            }
            return;
        }

        std::vector<std::pair<std::string, int>> path;
        path.emplace_back(id, first.line);
        while (lex_.peek().type == Token::Type::Arrow ||
               lex_.peek().type == Token::Type::UndirectedEdge) {
            const Token arrow = lex_.take();
            if (arrow.type == Token::Type::UndirectedEdge)
                report_.issues.push_back({Severity::Warning, arrow.line, 0,
                                          "undirected edge '--' treated as '->'", true});
            Token t = lex_.peek();
            if (t.type != Token::Type::Name && t.type != Token::Type::String) {
                report_.issues.push_back(
                    {Severity::Error, t.line, 0, "expected a node after '->'", false});
                return;
            }
            path.emplace_back(lex_.take().text, t.line);
        }
        const AttrList attrs = attr_list();
        saw_statement_ = true;

        if (path.size() == 1) {
            const NodeInterp n = interpret_node(id, attrs, default_node_shape_);
            builder_.declare(id, n.kind, n.label, first.line);
            if (n.gateway_defaulted)
                report_.issues.push_back(
                    {Severity::Warning, first.line, 0,
                     "gateway " + id + " has no XOR/AND discriminator; defaulting to exclusive",
                     false});
            return;
        }

        std::string condition;
        if (const std::string* l = attr_get(attrs, "label")) condition = trim(*l);
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            builder_.edge(path[i].first, path[i + 1].first, condition, path[i + 1].second);
    }

    Lexer& lex_;
    ParseReport& report_;
    bool repair_;
    GraphBuilder builder_;
    std::string default_node_shape_;
    bool saw_statement_ = false;
};

}  // namespace

ParseReport parse_gv(std::string_view text, const ParseOptions& opts) {
    ParseReport report;
    detail::Block block = detail::extract_block(text, opts.repair, is_gv_header);
    report.issues = std::move(block.issues);
    if (block.fatal) return report;

    bool all_blank = true;
    for (const auto& nl : block.lines)
        if (!trim(nl.text).empty()) all_blank = false;
    if (all_blank) {
        report.issues.push_back({Severity::Error, 1, 1, "empty input: no digraph found", false});
        return report;
    }

    Lexer lex(block.lines, report.issues);
    GvParser parser(lex, report, opts.repair);
    parser.run();
    if (has_fatal(report.issues)) report.graph.reset();
    return report;
}

}  // namespace pmeval
