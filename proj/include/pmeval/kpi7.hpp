#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pmeval/paraphrase.hpp"
#include "pmeval/similarity.hpp"

namespace pmeval {

// Splits an LLM task-list response into task labels: one per line, with
// enumeration markers (digits, dots, parens, dashes, bullets) stripped.
std::vector<std::string> parse_task_list(std::string_view response);

// One row of the paraphrase-stability table; the first row is the "Original"
// baseline. `error` is set (and the metrics zeroed) when the extractor failed
// for that method; remaining methods still run.
struct Kpi7Row {
    std::string method;
    double avg_task_count = 0.0;
    double c_similarity = 0.0;
    double nc_similarity = 0.0;
    std::string error;
};

// Extractor: paraphrased description -> extracted task labels (it wraps
// build_task_prompt + chat completion + parse_task_list).
using TaskExtractor = std::function<std::vector<std::string>(const std::string&)>;

std::vector<Kpi7Row> kpi7_run(const std::string& description,
                              const std::vector<ParaphraseMethod>& methods,
                              const TaskExtractor& extractor, EmbeddingProvider* embedder,
                              const SynonymLexicon& lexicon, std::uint64_t seed,
                              double rate = 0.1);

}  // namespace pmeval
