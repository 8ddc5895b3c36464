#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmeval/graph.hpp"

namespace pmeval {

class DatasetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GoldModel {
    std::string file;  // filename within the case's gold/ directory
    ProcessGraph graph;
    std::optional<int> quality;  // expert rating 0..5 when annotated
};

struct Case {
    std::string id;
    std::string description;
    std::vector<GoldModel> gold;
    // optional human correctness annotations per generated-model key
    // ("<model_id>/<notation>/<variant>" -> true/false); display-only
    std::map<std::string, bool> correctness_labels;

    // statistics computed at load
    std::size_t word_count = 0;
    std::vector<std::size_t> gold_task_counts;

    double mean_gold_task_count() const;
};

// Loads `root/cases/<id>/description.txt` + `gold/*.bpmn` (+ optional
// meta.json with quality scores and correctness labels). Cases come back
// sorted by id. Throws DatasetError naming the offending case.
std::vector<Case> load_dataset(const std::filesystem::path& root);

// Grand mean of per-case mean gold task counts.
double mean_gold_task_count(const std::vector<Case>& cases);

}  // namespace pmeval
