#include "pmeval/metrics.hpp"

#include <set>

namespace pmeval {

SimilarityReport similarity_from_counts(const MetricCounts& counts) {
    SimilarityReport r;
    r.counts = counts;
    const double tp = static_cast<double>(counts.tp);
    const double fp = static_cast<double>(counts.fp);
    const double fn = static_cast<double>(counts.fn);
    r.precision = (counts.tp + counts.fp) ? tp / (tp + fp) : 0.0;
    r.recall = (counts.tp + counts.fn) ? tp / (tp + fn) : 0.0;
    r.jaccard = (counts.tp + counts.fp + counts.fn) ? tp / (tp + fp + fn) : 0.0;
    return r;
}

SimilarityReport model_similarity(const ProcessGraph& generated, const ProcessGraph& gold,
                                  const NormalizationOptions& opts) {
    const std::set<EdgeTuple> gen = to_edge_tuples(normalize_for_comparison(generated, opts));
    const std::set<EdgeTuple> ref = to_edge_tuples(normalize_for_comparison(gold, opts));

    MetricCounts c;
    for (const EdgeTuple& t : gen) {
        if (ref.contains(t)) ++c.tp;
        else ++c.fp;
    }
    for (const EdgeTuple& t : ref)
        if (!gen.contains(t)) ++c.fn;
    return similarity_from_counts(c);
}

SimilarityReport task_set_metrics(const std::vector<std::string>& generated_tasks,
                                  const std::vector<std::string>& gold_tasks) {
    std::set<std::string> gen, ref;
    for (const std::string& t : generated_tasks) {
        std::string c = canon_label(t);
        if (!c.empty()) gen.insert(std::move(c));
    }
    for (const std::string& t : gold_tasks) {
        std::string c = canon_label(t);
        if (!c.empty()) ref.insert(std::move(c));
    }

    MetricCounts counts;
    for (const std::string& t : gen) {
        if (ref.contains(t)) ++counts.tp;
        else ++counts.fp;
    }
    for (const std::string& t : ref)
        if (!gen.contains(t)) ++counts.fn;
    return similarity_from_counts(counts);
}

nlohmann::ordered_json lint_to_json(const std::vector<LintFinding>& findings) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const LintFinding& f : findings) {
        nlohmann::ordered_json j;
        j["rule"] = f.rule_id;
        j["severity"] = f.severity == Severity::Error ? "error" : "warning";
        j["subject"] = f.subject;
        j["message"] = f.message;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace pmeval
