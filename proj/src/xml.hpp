#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmeval::xml {

// Small well-formed-XML reader: elements, attributes, text, comments, CDATA,
// the five named entities and numeric character references. Namespace prefixes
// are kept in `qname` and stripped from `name`. Enough for BPMN 2.0 documents;
// not a validating parser.
struct Element {
    std::string name;   // local name (prefix stripped)
    std::string qname;  // as written
    std::vector<std::pair<std::string, std::string>> attrs;  // qname -> decoded value
    std::vector<Element> children;
    std::string text;  // concatenated character data
    int line = 0;
    int column = 0;

    // Attribute lookup by local name (prefix ignored).
    const std::string* attr(std::string_view local) const;
};

// Throws pmeval::ParseError with 1-based line/column on malformed input.
Element parse(std::string_view input);

}  // namespace pmeval::xml
