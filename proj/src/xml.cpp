#include "xml.hpp"

#include <cctype>

#include "pmeval/diagnostics.hpp"

namespace pmeval::xml {

namespace {

struct Cursor {
    std::string_view in;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= in.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < in.size() ? in[pos + ahead] : '\0';
    }
    bool lookahead(std::string_view s) const { return in.substr(pos, s.size()) == s; }

    char advance() {
        const char c = in[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip(std::size_t n) {
        for (std::size_t i = 0; i < n && !eof(); ++i) advance();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
};

bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}
bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' ||
           c == '.';
}

void skip_ws(Cursor& c) {
    while (!c.eof() && std::isspace(static_cast<unsigned char>(c.peek()))) c.advance();
}

std::string read_name(Cursor& c) {
    if (c.eof() || !name_start(c.peek())) c.fail("expected name");
    std::string name;
    while (!c.eof() && name_char(c.peek())) name.push_back(c.advance());
    return name;
}

std::string local_name(std::string_view qname) {
    const auto colon = qname.rfind(':');
    return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

void decode_entity(Cursor& c, std::string& out) {
    // cursor sits on '&'
    const int eline = c.line, ecol = c.col;
    c.advance();
    std::string name;
    while (!c.eof() && c.peek() != ';' && name.size() < 12) name.push_back(c.advance());
    if (c.eof() || c.peek() != ';') throw ParseError("unterminated entity reference", eline, ecol);
    c.advance();
    if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "amp") out.push_back('&');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (!name.empty() && name[0] == '#') {
        long code = 0;
        try {
            code = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                       ? std::stol(name.substr(2), nullptr, 16)
                       : std::stol(name.substr(1));
        } catch (...) {
            throw ParseError("bad character reference &" + name + ";", eline, ecol);
        }
        // UTF-8 encode
        const unsigned long cp = static_cast<unsigned long>(code);
        if (cp < 0x80) out.push_back(static_cast<char>(cp));
        else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    } else {
        throw ParseError("unknown entity &" + name + ";", eline, ecol);
    }
}

std::string read_attr_value(Cursor& c) {
    if (c.peek() != '"' && c.peek() != '\'') c.fail("expected quoted attribute value");
    const char quote = c.advance();
    std::string value;
    while (!c.eof() && c.peek() != quote) {
        if (c.peek() == '&') decode_entity(c, value);
        else if (c.peek() == '<') c.fail("'<' not allowed in attribute value");
        else value.push_back(c.advance());
    }
    if (c.eof()) c.fail("unterminated attribute value");
    c.advance();
    return value;
}

// Skips <!-- -->, <?...?>, <!DOCTYPE ...> (without internal subset).
bool skip_misc(Cursor& c) {
    if (c.lookahead("<!--")) {
        const int l = c.line, col = c.col;
        c.skip(4);
        while (!c.eof() && !c.lookahead("-->")) c.advance();
        if (c.eof()) throw ParseError("unterminated comment", l, col);
        c.skip(3);
        return true;
    }
    if (c.lookahead("<?")) {
        const int l = c.line, col = c.col;
        c.skip(2);
        while (!c.eof() && !c.lookahead("?>")) c.advance();
        if (c.eof()) throw ParseError("unterminated processing instruction", l, col);
        c.skip(2);
        return true;
    }
    if (c.lookahead("<!DOCTYPE")) {
        while (!c.eof() && c.peek() != '>') c.advance();
        if (!c.eof()) c.advance();
        return true;
    }
    return false;
}

Element parse_element(Cursor& c, int depth);

void parse_content(Cursor& c, Element& el, int depth) {
    for (;;) {
        if (c.eof()) c.fail("unexpected end of input inside <" + el.qname + ">");
        if (c.lookahead("<![CDATA[")) {
            const int l = c.line, col = c.col;
            c.skip(9);
            while (!c.eof() && !c.lookahead("]]>")) el.text.push_back(c.advance());
            if (c.eof()) throw ParseError("unterminated CDATA section", l, col);
            c.skip(3);
            continue;
        }
        if (c.lookahead("</")) {
            c.skip(2);
            const std::string close = read_name(c);
            skip_ws(c);
            if (c.peek() != '>') c.fail("expected '>' in closing tag");
            if (close != el.qname)
                c.fail("mismatched closing tag </" + close + "> for <" + el.qname + ">");
            c.advance();
            return;
        }
        if (skip_misc(c)) continue;
        if (c.peek() == '<') {
            el.children.push_back(parse_element(c, depth + 1));
            continue;
        }
        if (c.peek() == '&') {
            decode_entity(c, el.text);
            continue;
        }
        el.text.push_back(c.advance());
    }
}

Element parse_element(Cursor& c, int depth) {
    if (depth > 200) c.fail("element nesting too deep");
    if (c.peek() != '<') c.fail("expected '<'");
    Element el;
    el.line = c.line;
    el.column = c.col;
    c.advance();
    el.qname = read_name(c);
    el.name = local_name(el.qname);

    for (;;) {
        skip_ws(c);
        if (c.eof()) c.fail("unexpected end of input in tag <" + el.qname + ">");
        if (c.lookahead("/>")) {
            c.skip(2);
            return el;
        }
        if (c.peek() == '>') {
            c.advance();
            parse_content(c, el, depth);
            return el;
        }
        std::string attr_name = read_name(c);
        skip_ws(c);
        if (c.peek() != '=') c.fail("expected '=' after attribute " + attr_name);
        c.advance();
        skip_ws(c);
        el.attrs.emplace_back(std::move(attr_name), read_attr_value(c));
    }
}

}  // namespace

const std::string* Element::attr(std::string_view local) const {
    for (const auto& [qname, value] : attrs) {
        if (local_name(qname) == local) return &value;
    }
    return nullptr;
}

Element parse(std::string_view input) {
    Cursor c{input};
    skip_ws(c);
    while (!c.eof() && skip_misc(c)) skip_ws(c);
    if (c.eof()) c.fail("empty document");
    Element root = parse_element(c, 0);
    skip_ws(c);
    while (!c.eof() && skip_misc(c)) skip_ws(c);
    if (!c.eof()) c.fail("trailing content after document element");
    return root;
}

}  // namespace pmeval::xml
