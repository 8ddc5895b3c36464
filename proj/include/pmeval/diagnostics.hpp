#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pmeval {

enum class Severity { Warning, Error };

// One parser/ingestion finding. `repaired` marks issues that were worked
// around automatically (the graph is still usable despite them).
struct Diagnostic {
    Severity severity = Severity::Warning;
    int line = 0;    // 1-based; 0 when not tied to a location
    int column = 0;  // 1-based; 0 when not tied to a location
    std::string message;
    bool repaired = false;
};

std::string to_string(const Diagnostic& d);

inline bool has_fatal(const std::vector<Diagnostic>& issues) {
    for (const auto& d : issues) {
        if (d.severity == Severity::Error && !d.repaired) return true;
    }
    return false;
}

// Hard failure while reading structured input (XML and friends).
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string message, int line, int column)
        : std::runtime_error(std::move(message)), line(line), column(column) {}
    int line = 0;
    int column = 0;
};

}  // namespace pmeval
