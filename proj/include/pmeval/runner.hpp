#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmeval/dataset.hpp"
#include "pmeval/graph.hpp"
#include "pmeval/paraphrase.hpp"
#include "pmeval/prompt.hpp"
#include "pmeval/provider.hpp"

namespace pmeval {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Experiment matrix: which models, prompt variants, notations and task modes
// to run, and which metric families to score. Selecting "kpi7" adds
// paraphrase-stability cells: each built-in augmentation method re-runs
// restricted task extraction on a paraphrased description.
struct RunSpec {
    std::vector<std::string> model_ids;
    std::vector<PromptVariant> variants;
    std::vector<NotationKind> notations;
    std::vector<TaskPromptMode> task_modes;
    std::set<std::string> kpis;  // "kpi1".."kpi7", "model_metrics"
    std::uint64_t seed = 0;
    int worker_limit = 1;
    double overlap_threshold_nc = 0.3;
    double overlap_threshold_c = 0.7;
    double paraphrase_rate = 0.1;
    double temperature = 0.0;
    int max_tokens = 2000;

    static RunSpec from_json(const nlohmann::json& j);
    static RunSpec from_json_file(const std::filesystem::path& file);
    nlohmann::ordered_json to_json() const;

    // Throws ConfigError on empty selections, bad thresholds, or generation
    // variants that need a task list while "restricted" extraction is absent.
    void validate() const;

    std::size_t generation_cell_count(std::size_t case_count) const {
        return case_count * model_ids.size() * variants.size() * notations.size();
    }
    std::size_t extraction_cell_count(std::size_t case_count) const {
        return case_count * model_ids.size() * task_modes.size();
    }
    std::size_t kpi7_cell_count(std::size_t case_count) const {
        if (!kpis.contains("kpi7")) return 0;
        return case_count * model_ids.size() * (kpi7_methods().size() + 1);  // + Original
    }

    // The built-in augmentation methods exercised by kpi7 matrix cells.
    static const std::vector<ParaphraseMethod>& kpi7_methods();
};

struct CellKey {
    enum class Kind { TaskExtraction, ModelGeneration };

    Kind kind = Kind::TaskExtraction;
    std::string case_id;
    std::string model_id;
    TaskPromptMode mode = TaskPromptMode::Unrestricted;  // extraction cells
    PromptVariant variant = PromptVariant::S;            // generation cells
    NotationKind notation = NotationKind::MER;           // generation cells
    std::string paraphrase_method;  // non-empty marks a kpi7 stability cell

    std::string to_string() const;
    bool operator<(const CellKey& other) const;
};

struct CellResult {
    CellKey key;
    bool failed = false;
    std::string error;
    std::string transcript_hash;
    std::vector<std::string> tasks;     // extraction cells
    std::optional<ProcessGraph> graph;  // generation cells
    std::size_t repair_count = 0;
    std::string paraphrased_text;  // kpi7 cells: the augmented description
};

struct RawResults {
    RunSpec spec;
    std::string provider_id;
    bool replay = false;
    std::vector<CellResult> cells;  // sorted by key

    const CellResult* find(const CellKey& key) const;
};

// Executes every cell of the matrix on a bounded worker pool. Individual cell
// failures are recorded and never abort the run; dataset/config problems
// throw. Results come back in deterministic (key-sorted) order regardless of
// worker count. The lexicon is only needed when "kpi7" is selected.
RawResults run_matrix(const RunSpec& spec, const std::vector<Case>& cases, ChatProvider& provider,
                      const ArtefactSet& artefacts, const SynonymLexicon* lexicon = nullptr);

struct ReportRow {
    std::string case_id;  // "ALL" for across-case averages
    std::string model_id;
    std::string variant;   // prompt variant or task mode
    std::string notation;  // empty for extraction rows
    std::string metric;
    double value = 0.0;
    std::string provenance;  // "live" | "replay"
    std::string transcript_hash;
};

struct ScoreResult {
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> exclusions;  // cell key -> cause
    std::string chat_provider_id;
    std::string embedder_id;
    std::size_t cell_count = 0;
};

// Per-cell metrics (averaged over each case's gold models) plus "ALL" rows
// averaging per-case values across cases — mean of means. Failed cells are
// excluded from averages and surfaced in `exclusions`.
ScoreResult score(const RawResults& raw, const std::vector<Case>& cases,
                  EmbeddingProvider* embedder);

// Raw-results persistence (out/<run-id>/raw.json) so scoring and rendering
// can run as separate steps.
nlohmann::ordered_json raw_to_json(const RawResults& raw);
RawResults raw_from_json(const nlohmann::json& j);

// RFC-4180 CSV (CRLF, quoting as needed), deterministic row order.
std::string render_csv(const std::vector<ReportRow>& rows);
// Markdown tables: one per model metric with LLM x notation rows and one
// column per prompt variant, plus the task-extraction KPI table.
std::string render_markdown(const ScoreResult& result, const RunSpec& spec);

}  // namespace pmeval
