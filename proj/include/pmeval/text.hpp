#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmeval {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_ws(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::string join(std::span<const std::string> parts, std::string_view sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool iequals(std::string_view a, std::string_view b);

// Whitespace-token count; the dataset loader's notion of "word count".
std::size_t word_count(std::string_view s);

// Shortest round-trip decimal form (std::to_chars), for deterministic reports.
std::string fmt_double(double v);

std::uint64_t fnv1a64(std::string_view s);

// Derives an independent stream seed from a base seed and a key string.
std::uint64_t mix_seed(std::uint64_t base, std::string_view key);

}  // namespace pmeval
