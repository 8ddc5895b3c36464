#pragma once

#include <string>
#include <vector>

#include "pmeval/graph.hpp"

namespace pmeval {

// Comparison-time leniency switches. Merging gateways a model omits are not
// counted as errors, so gateways with >=2 inflows and exactly one outflow are
// removed and their predecessors re-wired before tuple extraction. Compound
// task labels joined by "and" can optionally be split into a task sequence
// ("check and repair hardware" -> "check hardware" -> "repair hardware").
struct NormalizationOptions {
    bool bypass_merge_gateways = true;
    bool split_compound_tasks = false;
};

ProcessGraph normalize_for_comparison(const ProcessGraph& g, const NormalizationOptions& opts = {});

// Splits a compound label into its task sequence; returns {label} when the
// label is not compound. Single-word parts inherit the object of the final
// part ("check and repair hardware" -> "check hardware", "repair hardware").
std::vector<std::string> split_compound_label(const std::string& label);

}  // namespace pmeval
