#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

#include "pmeval/metrics.hpp"
#include "pmeval/runner.hpp"
#include "pmeval/similarity.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

struct RowKey {
    std::string model_id, variant, notation, metric;
    bool operator<(const RowKey& o) const {
        return std::tie(model_id, variant, notation, metric) <
               std::tie(o.model_id, o.variant, o.notation, o.metric);
    }
};

double mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += "\"";
    return quoted;
}

std::string round2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const Case* find_if_case(const std::vector<Case>& cases, const std::string& id) {
    for (const Case& c : cases)
        if (c.id == id) return &c;
    return nullptr;
}

}  // namespace

ScoreResult score(const RawResults& raw, const std::vector<Case>& cases,
                  EmbeddingProvider* embedder) {
    ScoreResult result;
    result.chat_provider_id = raw.provider_id;
    result.embedder_id = embedder ? embedder->id() : "";
    result.cell_count = raw.cells.size();
    const std::string provenance = raw.replay ? "replay" : "live";
    const std::set<std::string>& kpis = raw.spec.kpis;

    // gold task lists per case, extracted once
    std::map<std::string, std::vector<std::vector<std::string>>> gold_tasks;
    for (const Case& c : cases) {
        auto& lists = gold_tasks[c.id];
        for (const GoldModel& g : c.gold) lists.push_back(extract_tasks(g.graph));
    }

    std::vector<ReportRow> rows;
    auto add_row = [&](const CellResult& cell, const std::string& variant,
                       const std::string& notation, std::string metric, double value) {
        rows.push_back(ReportRow{cell.key.case_id, cell.key.model_id, variant, notation,
                                 std::move(metric), value, provenance, cell.transcript_hash});
    };

    for (const CellResult& cell : raw.cells) {
        if (cell.failed) {
            result.exclusions.emplace_back(cell.key.to_string(), cell.error);
            continue;
        }
        const Case* c = find_if_case(cases, cell.key.case_id);
        if (!c) continue;

        if (cell.key.kind == CellKey::Kind::ModelGeneration) {
            if (!kpis.contains("model_metrics") || !cell.graph) continue;
            const std::string variant(variant_name(cell.key.variant));
            const std::string notation(notation_name(cell.key.notation));

            std::vector<double> mj, mp, mr, tj, tp_, tr;
            const std::vector<std::string> gen_tasks = extract_tasks(*cell.graph);
            for (const GoldModel& gold : c->gold) {
                const SimilarityReport m = model_similarity(*cell.graph, gold.graph);
                mj.push_back(m.jaccard);
                mp.push_back(m.precision);
                mr.push_back(m.recall);
                const SimilarityReport t = task_set_metrics(gen_tasks, extract_tasks(gold.graph));
                tj.push_back(t.jaccard);
                tp_.push_back(t.precision);
                tr.push_back(t.recall);
            }
            add_row(cell, variant, notation, "model_jaccard", mean(mj));
            add_row(cell, variant, notation, "model_precision", mean(mp));
            add_row(cell, variant, notation, "model_recall", mean(mr));
            add_row(cell, variant, notation, "task_jaccard", mean(tj));
            add_row(cell, variant, notation, "task_precision", mean(tp_));
            add_row(cell, variant, notation, "task_recall", mean(tr));
            add_row(cell, variant, notation, "repaired_lines",
                    static_cast<double>(cell.repair_count));
            continue;
        }

        // kpi7 stability cell: extraction over a paraphrased description,
        // always judged against the original text
        if (!cell.key.paraphrase_method.empty()) {
            const std::string& method = cell.key.paraphrase_method;
            add_row(cell, "kpi7", "", "kpi7_" + method + "_tasks",
                    static_cast<double>(cell.tasks.size()));
            add_row(cell, "kpi7", "", "kpi7_" + method + "_nc",
                    text_similarity(cell.tasks, c->description, VectorizerKind::NonContextual));
            if (embedder)
                add_row(cell, "kpi7", "", "kpi7_" + method + "_c",
                        text_similarity(cell.tasks, c->description, VectorizerKind::Contextual,
                                        embedder));
            continue;
        }

        // task-extraction cell
        const bool restricted = cell.key.mode == TaskPromptMode::Restricted;
        const std::string mode_name(task_mode_name(cell.key.mode));
        const int base = restricted ? 4 : 1;
        const std::string text_kpi = "kpi" + std::to_string(base);
        const std::string set_kpi = "kpi" + std::to_string(base + 1);
        const std::string overlap_kpi = "kpi" + std::to_string(base + 2);

        add_row(cell, mode_name, "", "tasks_extracted", static_cast<double>(cell.tasks.size()));

        if (kpis.contains(text_kpi)) {
            add_row(cell, mode_name, "", text_kpi + "_nc",
                    text_similarity(cell.tasks, c->description, VectorizerKind::NonContextual));
            if (embedder)
                add_row(cell, mode_name, "", text_kpi + "_c",
                        text_similarity(cell.tasks, c->description, VectorizerKind::Contextual,
                                        embedder));
        }
        if (kpis.contains(set_kpi)) {
            std::vector<double> nc, cc;
            for (const auto& gold : gold_tasks[c->id]) {
                nc.push_back(set_similarity(cell.tasks, gold, VectorizerKind::NonContextual));
                if (embedder)
                    cc.push_back(
                        set_similarity(cell.tasks, gold, VectorizerKind::Contextual, embedder));
            }
            add_row(cell, mode_name, "", set_kpi + "_nc", mean(nc));
            if (embedder) add_row(cell, mode_name, "", set_kpi + "_c", mean(cc));
        }
        if (kpis.contains(overlap_kpi)) {
            auto overlap_rows = [&](VectorizerKind kind, double threshold,
                                    const std::string& suffix) {
                std::vector<double> cm, cc2, om, oc;
                for (const auto& gold : gold_tasks[c->id]) {
                    const OverlapCounts counts =
                        set_overlap(gold, cell.tasks, OverlapConfig{threshold, kind}, embedder);
                    cm.push_back(static_cast<double>(counts.common_model));
                    cc2.push_back(static_cast<double>(counts.common_chat));
                    om.push_back(static_cast<double>(counts.only_model));
                    oc.push_back(static_cast<double>(counts.only_chat));
                }
                add_row(cell, mode_name, "", overlap_kpi + suffix + "_common_model", mean(cm));
                add_row(cell, mode_name, "", overlap_kpi + suffix + "_common_chat", mean(cc2));
                add_row(cell, mode_name, "", overlap_kpi + suffix + "_only_model", mean(om));
                add_row(cell, mode_name, "", overlap_kpi + suffix + "_only_chat", mean(oc));
            };
            overlap_rows(VectorizerKind::NonContextual, raw.spec.overlap_threshold_nc, "_nc");
            if (embedder)
                overlap_rows(VectorizerKind::Contextual, raw.spec.overlap_threshold_c, "_c");
        }
    }

    // across-case averages (mean of per-case means)
    std::map<RowKey, std::vector<double>> buckets;
    for (const ReportRow& r : rows)
        buckets[RowKey{r.model_id, r.variant, r.notation, r.metric}].push_back(r.value);
    std::vector<ReportRow> aggregates;
    for (const auto& [key, values] : buckets) {
        aggregates.push_back(ReportRow{"ALL", key.model_id, key.variant, key.notation, key.metric,
                                       mean(values), provenance, ""});
    }

    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.case_id, a.model_id, a.variant, a.notation, a.metric) <
               std::tie(b.case_id, b.model_id, b.variant, b.notation, b.metric);
    });
    rows.insert(rows.end(), aggregates.begin(), aggregates.end());
    result.rows = std::move(rows);
    return result;
}

std::string render_csv(const std::vector<ReportRow>& rows) {
    std::string out = "case_id,model_id,variant,notation,metric,value,provenance,transcript_hash\r\n";
    for (const ReportRow& r : rows) {
        out += csv_field(r.case_id) + "," + csv_field(r.model_id) + "," + csv_field(r.variant) +
               "," + csv_field(r.notation) + "," + csv_field(r.metric) + "," +
               fmt_double(r.value) + "," + csv_field(r.provenance) + "," +
               csv_field(r.transcript_hash) + "\r\n";
    }
    return out;
}

std::string render_markdown(const ScoreResult& result, const RunSpec& spec) {
    std::string out = "# Evaluation report\n\n";
    out += "- cells: " + std::to_string(result.cell_count) + " total, " +
           std::to_string(result.exclusions.size()) + " failed (excluded from averages)\n";
    out += "- chat provider: " + result.chat_provider_id + "\n";
    if (!result.embedder_id.empty()) {
        out += "- contextual vectorizer: " + result.embedder_id;
        if (result.embedder_id == "hash-embed-v1")
            out += " (deterministic token-hash fallback, no semantic fidelity)";
        out += "\n";
    }
    out += "\n";

    auto aggregate = [&](const std::string& model, const std::string& variant,
                         const std::string& notation,
                         const std::string& metric) -> std::optional<double> {
        for (const ReportRow& r : result.rows) {
            if (r.case_id == "ALL" && r.model_id == model && r.variant == variant &&
                r.notation == notation && r.metric == metric)
                return r.value;
        }
        return std::nullopt;
    };

    static const char* model_metrics[] = {"model_jaccard", "model_precision", "model_recall",
                                          "task_jaccard",  "task_precision",  "task_recall"};
    if (spec.kpis.contains("model_metrics") && !spec.variants.empty()) {
        out += "## Model metrics (average of per-case averages)\n";
        for (const char* metric : model_metrics) {
            out += "\n### " + std::string(metric) + "\n\n";
            out += "| LLM | TN |";
            for (PromptVariant v : spec.variants) out += " " + std::string(variant_name(v)) + " |";
            out += "\n|---|---|";
            for (std::size_t i = 0; i < spec.variants.size(); ++i) out += "---|";
            out += "\n";
            for (const std::string& model : spec.model_ids) {
                for (NotationKind notation : spec.notations) {
                    out += "| " + model + " | " + std::string(notation_name(notation)) + " |";
                    for (PromptVariant v : spec.variants) {
                        const auto value = aggregate(model, std::string(variant_name(v)),
                                                     std::string(notation_name(notation)), metric);
                        out += value ? " " + round2(*value) + " |" : " - |";
                    }
                    out += "\n";
                }
            }
        }
        out += "\n";
    }

    if (!spec.task_modes.empty()) {
        out += "## Task extraction KPIs (average of per-case averages)\n\n";
        std::vector<std::string> metrics;
        for (TaskPromptMode m : spec.task_modes) {
            const int base = m == TaskPromptMode::Restricted ? 4 : 1;
            metrics = {"tasks_extracted",
                       "kpi" + std::to_string(base) + "_nc",
                       "kpi" + std::to_string(base) + "_c",
                       "kpi" + std::to_string(base + 1) + "_nc",
                       "kpi" + std::to_string(base + 1) + "_c",
                       "kpi" + std::to_string(base + 2) + "_nc_common_model",
                       "kpi" + std::to_string(base + 2) + "_nc_common_chat",
                       "kpi" + std::to_string(base + 2) + "_nc_only_model",
                       "kpi" + std::to_string(base + 2) + "_nc_only_chat"};
            out += "### " + std::string(task_mode_name(m)) + "\n\n| LLM |";
            for (const std::string& metric : metrics) out += " " + metric + " |";
            out += "\n|---|";
            for (std::size_t i = 0; i < metrics.size(); ++i) out += "---|";
            out += "\n";
            for (const std::string& model : spec.model_ids) {
                out += "| " + model + " |";
                for (const std::string& metric : metrics) {
                    const auto value =
                        aggregate(model, std::string(task_mode_name(m)), "", metric);
                    out += value ? " " + round2(*value) + " |" : " - |";
                }
                out += "\n";
            }
            out += "\n";
        }
    }

    if (spec.kpis.contains("kpi7")) {
        out += "## Paraphrase stability (kpi7, restricted extraction)\n\n";
        std::vector<std::string> methods = {"Original"};
        for (const ParaphraseMethod& m : RunSpec::kpi7_methods()) methods.push_back(m.name);
        out += "| LLM | metric |";
        for (const std::string& m : methods) out += " " + m + " |";
        out += "\n|---|---|";
        for (std::size_t i = 0; i < methods.size(); ++i) out += "---|";
        out += "\n";
        for (const std::string& model : spec.model_ids) {
            for (const char* metric : {"tasks", "c", "nc"}) {
                out += "| " + model + " | " + metric + " |";
                for (const std::string& m : methods) {
                    const auto value =
                        aggregate(model, "kpi7", "", "kpi7_" + m + "_" + metric);
                    out += value ? " " + round2(*value) + " |" : " - |";
                }
                out += "\n";
            }
        }
        out += "\n";
    }

    if (!result.exclusions.empty()) {
        out += "## Excluded cells\n\n";
        for (const auto& [cell, cause] : result.exclusions)
            out += "- `" + cell + "`: " + cause + "\n";
        out += "\n";
    }
    return out;
}

}  // namespace pmeval
