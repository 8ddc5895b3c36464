#include "pmeval/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>
#include <tuple>

#include "pmeval/graph_json.hpp"
#include "pmeval/kpi7.hpp"
#include "pmeval/notation.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

int kind_rank(CellKey::Kind k) { return k == CellKey::Kind::TaskExtraction ? 0 : 1; }

}  // namespace

RunSpec RunSpec::from_json(const nlohmann::json& j) {
    RunSpec spec;
    for (const auto& m : j.value("model_ids", nlohmann::json::array()))
        spec.model_ids.push_back(m.get<std::string>());
    for (const auto& v : j.value("variants", nlohmann::json::array())) {
        const auto parsed = variant_from_name(v.get<std::string>());
        if (!parsed) throw ConfigError("unknown prompt variant: " + v.get<std::string>());
        spec.variants.push_back(*parsed);
    }
    for (const auto& n : j.value("notations", nlohmann::json::array())) {
        const auto parsed = notation_from_name(n.get<std::string>());
        if (!parsed) throw ConfigError("unknown notation: " + n.get<std::string>());
        spec.notations.push_back(*parsed);
    }
    for (const auto& m : j.value("task_modes", nlohmann::json::array())) {
        const auto parsed = task_mode_from_name(m.get<std::string>());
        if (!parsed) throw ConfigError("unknown task mode: " + m.get<std::string>());
        spec.task_modes.push_back(*parsed);
    }
    for (const auto& k : j.value("kpis", nlohmann::json::array()))
        spec.kpis.insert(k.get<std::string>());
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.worker_limit = j.value("worker_limit", 1);
    spec.overlap_threshold_nc = j.value("overlap_threshold_nc", 0.3);
    spec.overlap_threshold_c = j.value("overlap_threshold_c", 0.7);
    spec.paraphrase_rate = j.value("paraphrase_rate", 0.1);
    spec.temperature = j.value("temperature", 0.0);
    spec.max_tokens = j.value("max_tokens", 2000);
    return spec;
}

RunSpec RunSpec::from_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open run spec: " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad run spec JSON: " + std::string(e.what()));
    }
    return from_json(j);
}

nlohmann::ordered_json RunSpec::to_json() const {
    nlohmann::ordered_json j;
    j["model_ids"] = model_ids;
    j["variants"] = nlohmann::ordered_json::array();
    for (PromptVariant v : variants) j["variants"].push_back(std::string(variant_name(v)));
    j["notations"] = nlohmann::ordered_json::array();
    for (NotationKind n : notations) j["notations"].push_back(std::string(notation_name(n)));
    j["task_modes"] = nlohmann::ordered_json::array();
    for (TaskPromptMode m : task_modes) j["task_modes"].push_back(std::string(task_mode_name(m)));
    j["kpis"] = kpis;
    j["seed"] = seed;
    j["worker_limit"] = worker_limit;
    j["overlap_threshold_nc"] = overlap_threshold_nc;
    j["overlap_threshold_c"] = overlap_threshold_c;
    j["paraphrase_rate"] = paraphrase_rate;
    j["temperature"] = temperature;
    j["max_tokens"] = max_tokens;
    return j;
}

const std::vector<ParaphraseMethod>& RunSpec::kpi7_methods() {
    static const std::vector<ParaphraseMethod> methods = {
        ParaphraseMethod::synonym_replace(), ParaphraseMethod::random_delete(),
        ParaphraseMethod::random_swap(), ParaphraseMethod::random_insert()};
    return methods;
}

void RunSpec::validate() const {
    if (model_ids.empty()) throw ConfigError("run spec has no model ids");
    if (variants.empty() && task_modes.empty())
        throw ConfigError("run spec selects neither prompt variants nor task modes");
    if (!variants.empty() && notations.empty())
        throw ConfigError("run spec has prompt variants but no notations");
    if (worker_limit < 1) throw ConfigError("worker_limit must be at least 1");
    if (overlap_threshold_nc <= 0 || overlap_threshold_nc >= 1 || overlap_threshold_c <= 0 ||
        overlap_threshold_c >= 1)
        throw ConfigError("overlap thresholds must lie strictly between 0 and 1");
    const bool needs_tasks = std::any_of(variants.begin(), variants.end(), variant_requires_tasks);
    const bool has_restricted =
        std::find(task_modes.begin(), task_modes.end(), TaskPromptMode::Restricted) !=
        task_modes.end();
    if (needs_tasks && !has_restricted)
        throw ConfigError(
            "variants A/RA/RAB consume restricted task extraction; add \"restricted\" to "
            "task_modes");
    for (const std::string& k : kpis) {
        static const std::set<std::string> known = {"kpi1", "kpi2", "kpi3", "kpi4",
                                                    "kpi5", "kpi6", "kpi7", "model_metrics"};
        if (!known.contains(k)) throw ConfigError("unknown kpi selector: " + k);
    }
    if (paraphrase_rate < 0 || paraphrase_rate > 1)
        throw ConfigError("paraphrase_rate must lie in [0,1]");
}

std::string CellKey::to_string() const {
    if (kind == Kind::TaskExtraction) {
        if (!paraphrase_method.empty())
            return "kpi7:" + case_id + ":" + model_id + ":" + paraphrase_method;
        return "task:" + case_id + ":" + model_id + ":" + std::string(task_mode_name(mode));
    }
    return "gen:" + case_id + ":" + model_id + ":" + std::string(variant_name(variant)) + ":" +
           std::string(notation_name(notation));
}

bool CellKey::operator<(const CellKey& other) const {
    return std::make_tuple(kind_rank(kind), case_id, model_id, static_cast<int>(mode),
                           static_cast<int>(variant), static_cast<int>(notation),
                           paraphrase_method) <
           std::make_tuple(kind_rank(other.kind), other.case_id, other.model_id,
                           static_cast<int>(other.mode), static_cast<int>(other.variant),
                           static_cast<int>(other.notation), other.paraphrase_method);
}

const CellResult* RawResults::find(const CellKey& key) const {
    for (const CellResult& c : cells)
        if (!(c.key < key) && !(key < c.key)) return &c;
    return nullptr;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (thread_count == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

const Case* find_case(const std::vector<Case>& cases, const std::string& id) {
    for (const Case& c : cases)
        if (c.id == id) return &c;
    return nullptr;
}

void run_extraction_cell(CellResult& cell, const Case& c, const RunSpec& spec,
                         ChatProvider& provider) {
    const std::string& description =
        cell.paraphrased_text.empty() ? c.description : cell.paraphrased_text;
    ChatRequest request;
    request.model_id = cell.key.model_id;
    request.prompt = build_task_prompt(description, cell.key.mode);
    request.temperature = spec.temperature;
    request.max_tokens = spec.max_tokens;

    std::string response = provider.complete(request);
    cell.transcript_hash = request_hash(request);
    std::vector<std::string> tasks = parse_task_list(response);
    if (tasks.empty()) {
        // one retry with an explicit format nudge
        request.prompt += "\nReturn one task per line.";
        response = provider.complete(request);
        cell.transcript_hash = request_hash(request);
        tasks = parse_task_list(response);
    }
    if (tasks.empty()) {
        cell.failed = true;
        cell.error = "response did not contain a parseable task list";
        return;
    }
    cell.tasks = std::move(tasks);
}

void run_generation_cell(CellResult& cell, const Case& c, const RunSpec& spec,
                         ChatProvider& provider, const ArtefactSet& artefacts,
                         const std::vector<std::string>* tasks, const std::string& tasks_error) {
    std::optional<std::vector<std::string>> task_input;
    if (variant_requires_tasks(cell.key.variant)) {
        if (!tasks) {
            cell.failed = true;
            cell.error = "task extraction unavailable: " + tasks_error;
            return;
        }
        task_input = *tasks;
    }

    ChatRequest request;
    request.model_id = cell.key.model_id;
    request.prompt = build_model_prompt(c.description, cell.key.variant, cell.key.notation,
                                        task_input, artefacts);
    request.temperature = spec.temperature;
    request.max_tokens = spec.max_tokens;

    const std::string response = provider.complete(request);
    cell.transcript_hash = request_hash(request);

    const ParseReport report = parse_notation(cell.key.notation, response);
    cell.repair_count = report.repair_count();
    if (!report.ok()) {
        std::string cause = "notation parse failed";
        for (const Diagnostic& d : report.issues) {
            if (d.severity == Severity::Error && !d.repaired) {
                cause += ": " + d.message;
                break;
            }
        }
        cell.failed = true;
        cell.error = cause;
        return;
    }
    cell.graph = report.graph;
}

}  // namespace

RawResults run_matrix(const RunSpec& spec, const std::vector<Case>& cases, ChatProvider& provider,
                      const ArtefactSet& artefacts, const SynonymLexicon* lexicon) {
    spec.validate();
    if (cases.empty()) throw ConfigError("run_matrix: no cases loaded");
    const bool kpi7 = spec.kpis.contains("kpi7");
    if (kpi7 && !lexicon)
        throw ConfigError("kpi7 needs a synonym lexicon for its augmentation methods");

    RawResults raw;
    raw.spec = spec;
    raw.provider_id = provider.id();
    raw.replay = provider.id() == "replay";

    // phase 1: task extraction (plus kpi7 stability cells on paraphrased text)
    std::vector<CellResult> extraction;
    for (const Case& c : cases) {
        for (const std::string& model : spec.model_ids) {
            for (TaskPromptMode mode : spec.task_modes) {
                CellResult cell;
                cell.key = CellKey{CellKey::Kind::TaskExtraction, c.id, model, mode};
                extraction.push_back(std::move(cell));
            }
            if (kpi7) {
                std::vector<ParaphraseMethod> methods = {ParaphraseMethod::identity()};
                methods.insert(methods.end(), RunSpec::kpi7_methods().begin(),
                               RunSpec::kpi7_methods().end());
                for (const ParaphraseMethod& method : methods) {
                    CellResult cell;
                    cell.key = CellKey{CellKey::Kind::TaskExtraction, c.id, model,
                                       TaskPromptMode::Restricted, PromptVariant::S,
                                       NotationKind::MER, method.name};
                    const std::uint64_t cell_seed =
                        mix_seed(spec.seed, cell.key.to_string());
                    cell.paraphrased_text = paraphrase(c.description, method, *lexicon, cell_seed,
                                                       spec.paraphrase_rate);
                    extraction.push_back(std::move(cell));
                }
            }
        }
    }
    std::sort(extraction.begin(), extraction.end(),
              [](const CellResult& a, const CellResult& b) { return a.key < b.key; });
    parallel_for(extraction.size(), spec.worker_limit, [&](std::size_t i) {
        CellResult& cell = extraction[i];
        try {
            run_extraction_cell(cell, *find_case(cases, cell.key.case_id), spec, provider);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    });

    auto restricted_tasks = [&](const std::string& case_id,
                                const std::string& model) -> std::pair<const CellResult*, bool> {
        for (const CellResult& cell : extraction) {
            if (cell.key.case_id == case_id && cell.key.model_id == model &&
                cell.key.mode == TaskPromptMode::Restricted && cell.key.paraphrase_method.empty())
                return {&cell, true};
        }
        return {nullptr, false};
    };

    // phase 2: model generation
    std::vector<CellResult> generation;
    for (const Case& c : cases) {
        for (const std::string& model : spec.model_ids) {
            for (PromptVariant variant : spec.variants) {
                for (NotationKind notation : spec.notations) {
                    CellResult cell;
                    cell.key = CellKey{CellKey::Kind::ModelGeneration, c.id,     model,
                                       TaskPromptMode::Unrestricted,   variant, notation};
                    generation.push_back(std::move(cell));
                }
            }
        }
    }
    std::sort(generation.begin(), generation.end(),
              [](const CellResult& a, const CellResult& b) { return a.key < b.key; });
    parallel_for(generation.size(), spec.worker_limit, [&](std::size_t i) {
        CellResult& cell = generation[i];
        const Case* c = find_case(cases, cell.key.case_id);
        const std::vector<std::string>* tasks = nullptr;
        std::string tasks_error = "restricted extraction cell not scheduled";
        if (variant_requires_tasks(cell.key.variant)) {
            const auto [source, found] = restricted_tasks(cell.key.case_id, cell.key.model_id);
            if (found && !source->failed) tasks = &source->tasks;
            else if (found) tasks_error = source->error;
        }
        try {
            run_generation_cell(cell, *c, spec, provider, artefacts, tasks, tasks_error);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    });

    raw.cells.reserve(extraction.size() + generation.size());
    for (CellResult& c : extraction) raw.cells.push_back(std::move(c));
    for (CellResult& c : generation) raw.cells.push_back(std::move(c));
    std::sort(raw.cells.begin(), raw.cells.end(),
              [](const CellResult& a, const CellResult& b) { return a.key < b.key; });
    return raw;
}

nlohmann::ordered_json raw_to_json(const RawResults& raw) {
    nlohmann::ordered_json j;
    j["spec"] = raw.spec.to_json();
    j["provider_id"] = raw.provider_id;
    j["replay"] = raw.replay;
    j["cells"] = nlohmann::ordered_json::array();
    for (const CellResult& c : raw.cells) {
        nlohmann::ordered_json jc;
        jc["key"]["kind"] =
            c.key.kind == CellKey::Kind::TaskExtraction ? "task_extraction" : "model_generation";
        jc["key"]["case_id"] = c.key.case_id;
        jc["key"]["model_id"] = c.key.model_id;
        if (c.key.kind == CellKey::Kind::TaskExtraction) {
            jc["key"]["mode"] = std::string(task_mode_name(c.key.mode));
            if (!c.key.paraphrase_method.empty())
                jc["key"]["paraphrase_method"] = c.key.paraphrase_method;
        } else {
            jc["key"]["variant"] = std::string(variant_name(c.key.variant));
            jc["key"]["notation"] = std::string(notation_name(c.key.notation));
        }
        jc["failed"] = c.failed;
        if (!c.error.empty()) jc["error"] = c.error;
        jc["transcript_hash"] = c.transcript_hash;
        if (!c.tasks.empty()) jc["tasks"] = c.tasks;
        if (c.graph) jc["graph"] = graph_to_json(*c.graph);
        if (c.repair_count) jc["repair_count"] = c.repair_count;
        if (!c.paraphrased_text.empty()) jc["paraphrased_text"] = c.paraphrased_text;
        j["cells"].push_back(std::move(jc));
    }
    return j;
}

RawResults raw_from_json(const nlohmann::json& j) {
    RawResults raw;
    raw.spec = RunSpec::from_json(j.at("spec"));
    raw.provider_id = j.value("provider_id", "");
    raw.replay = j.value("replay", false);
    for (const auto& jc : j.value("cells", nlohmann::json::array())) {
        CellResult c;
        const auto& key = jc.at("key");
        c.key.kind = key.value("kind", "") == "task_extraction" ? CellKey::Kind::TaskExtraction
                                                                : CellKey::Kind::ModelGeneration;
        c.key.case_id = key.value("case_id", "");
        c.key.model_id = key.value("model_id", "");
        if (c.key.kind == CellKey::Kind::TaskExtraction) {
            if (const auto mode = task_mode_from_name(key.value("mode", ""))) c.key.mode = *mode;
            c.key.paraphrase_method = key.value("paraphrase_method", "");
        } else {
            if (const auto v = variant_from_name(key.value("variant", ""))) c.key.variant = *v;
            if (const auto n = notation_from_name(key.value("notation", ""))) c.key.notation = *n;
        }
        c.failed = jc.value("failed", false);
        c.error = jc.value("error", "");
        c.transcript_hash = jc.value("transcript_hash", "");
        c.tasks = jc.value("tasks", std::vector<std::string>{});
        if (jc.contains("graph")) c.graph = graph_from_json(jc.at("graph"));
        c.repair_count = jc.value("repair_count", std::size_t{0});
        c.paraphrased_text = jc.value("paraphrased_text", "");
        raw.cells.push_back(std::move(c));
    }
    std::sort(raw.cells.begin(), raw.cells.end(),
              [](const CellResult& a, const CellResult& b) { return a.key < b.key; });
    return raw;
}

}  // namespace pmeval
