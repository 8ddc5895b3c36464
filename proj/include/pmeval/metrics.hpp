#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pmeval/graph.hpp"
#include "pmeval/normalize.hpp"

namespace pmeval {

// tp/fp/fn over edge-tuple (or task-label) sets; tn is identically zero and
// therefore not stored.
struct MetricCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct SimilarityReport {
    double jaccard = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    MetricCounts counts;
};

// precision = tp/(tp+fp), recall = tp/(tp+fn), jaccard = tp/(tp+fp+fn);
// all 0 when the denominator is 0.
SimilarityReport similarity_from_counts(const MetricCounts& counts);

// Both graphs are normalized before tuple extraction.
SimilarityReport model_similarity(const ProcessGraph& generated, const ProcessGraph& gold,
                                  const NormalizationOptions& opts = {});

// Exact-match set semantics over canonical task labels.
SimilarityReport task_set_metrics(const std::vector<std::string>& generated_tasks,
                                  const std::vector<std::string>& gold_tasks);

// Structural lint over machine-checkable modeling rules R1..R9.
// R1  at least one start event                             (error)
// R2  at least one end event                               (error)
// R3  start events have no incoming flow                   (error)
// R4  end events have no outgoing flow                     (error)
// R5  gateway is neither a proper split nor a proper merge (warning)
// R6  every node reachable from some start event           (error)
// R7  every node reaches some end event                    (error)
// R8  split/merge gateway kinds differ on a matched region (warning)
// R9  non-gateway node with more than one outgoing flow    (warning)
// R6 is skipped when R1 fires, R7 when R2 fires, so seeded single-rule
// violations stay single-rule. Missing merge gateways are deliberately not a
// finding (comparison treats them leniently as well).
struct LintFinding {
    std::string rule_id;
    Severity severity = Severity::Warning;
    std::string subject;  // node id or "a -> b"
    std::string message;
};

std::vector<LintFinding> lint(const ProcessGraph& g);

nlohmann::ordered_json lint_to_json(const std::vector<LintFinding>& findings);

}  // namespace pmeval
