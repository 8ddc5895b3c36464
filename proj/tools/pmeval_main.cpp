#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmeval/bpmn.hpp"
#include "pmeval/dataset.hpp"
#include "pmeval/graph_json.hpp"
#include "pmeval/kpi7.hpp"
#include "pmeval/metrics.hpp"
#include "pmeval/notation.hpp"
#include "pmeval/prompt.hpp"
#include "pmeval/provider.hpp"
#include "pmeval/runner.hpp"
#include "pmeval/text.hpp"

namespace fs = std::filesystem;
using namespace pmeval;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;       // config or dataset error
constexpr int kExitAllFailed = 2;    // every matrix cell failed

std::string read_file_or_die(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

struct ProviderOptions {
    std::string transcripts = "data/transcripts";
    bool replay = false;
    bool record = false;
    std::string base_url;
    std::string api_key_env = "PMEVAL_API_KEY";

    void attach(CLI::App* cmd) {
        cmd->add_option("--transcripts", transcripts, "Transcript store directory");
        cmd->add_flag("--replay", replay, "Serve responses from recorded transcripts only");
        cmd->add_flag("--record", record, "Record live responses into the transcript store");
        cmd->add_option("--base-url", base_url, "Chat endpoint base URL (live mode)");
        cmd->add_option("--api-key-env", api_key_env,
                        "Environment variable holding the API key");
    }
};

struct ProviderBundle {
    std::unique_ptr<TranscriptStore> store;
    std::unique_ptr<ChatProvider> live;
    std::unique_ptr<ChatProvider> provider;  // what callers use

    ChatProvider& get() { return *provider; }
};

ProviderBundle make_provider(const ProviderOptions& opts) {
    ProviderBundle bundle;
    bundle.store = std::make_unique<TranscriptStore>(opts.transcripts);
    if (opts.replay) {
        bundle.provider = std::make_unique<ReplayChatProvider>(*bundle.store);
        return bundle;
    }
    HttpProviderOptions http;
    if (!opts.base_url.empty()) http.base_url = opts.base_url;
    http.api_key_env = opts.api_key_env;
    bundle.live = std::make_unique<HttpChatProvider>(http);
    if (opts.record) {
        bundle.provider =
            std::make_unique<RecordingChatProvider>(*bundle.live, *bundle.store);
    } else {
        bundle.provider = std::move(bundle.live);
    }
    return bundle;
}

int cmd_ingest(const std::string& root) {
    const std::vector<Case> cases = load_dataset(root);
    std::cout << "cases: " << cases.size() << "\n";
    std::cout << "case_id | words | gold models | gold tasks\n";
    for (const Case& c : cases) {
        std::string counts;
        for (std::size_t n : c.gold_task_counts) {
            if (!counts.empty()) counts += ",";
            counts += std::to_string(n);
        }
        std::cout << c.id << " | " << c.word_count << " | " << c.gold.size() << " | " << counts
                  << "\n";
    }
    std::cout << "mean gold task count: " << fmt_double(mean_gold_task_count(cases)) << "\n";
    return kExitOk;
}

ParseReport parse_model_file(const fs::path& path, const std::string& format) {
    std::string fmt = format;
    if (fmt.empty()) {
        const std::string ext = path.extension().string();
        if (ext == ".bpmn" || ext == ".xml") fmt = "bpmn";
        else if (ext == ".mer" || ext == ".mmd") fmt = "mer";
        else if (ext == ".gv" || ext == ".dot") fmt = "gv";
        else throw ConfigError("cannot infer model format from " + path.string() +
                               "; pass --format");
    }
    const std::string text = read_file_or_die(path);
    if (fmt == "bpmn") {
        ParseReport report;
        try {
            BpmnParseResult result = parse_bpmn_xml(text);
            report.graph = std::move(result.graph);
            report.issues = std::move(result.warnings);
        } catch (const ParseError& e) {
            report.issues.push_back({Severity::Error, e.line, e.column, e.what(), false});
        }
        return report;
    }
    if (fmt == "mer") return parse_mer(text);
    if (fmt == "gv") return parse_gv(text);
    throw ConfigError("unknown model format: " + fmt);
}

int cmd_lint(const fs::path& path, const std::string& format, bool as_json) {
    const ParseReport report = parse_model_file(path, format);
    for (const Diagnostic& d : report.issues) std::cerr << to_string(d) << "\n";
    if (!report.ok()) {
        std::cerr << "cannot lint: model did not parse\n";
        return kExitConfig;
    }
    const std::vector<LintFinding> findings = lint(*report.graph);
    if (as_json) {
        std::cout << lint_to_json(findings).dump(2) << "\n";
    } else if (findings.empty()) {
        std::cout << "no findings\n";
    } else {
        for (const LintFinding& f : findings) {
            std::cout << f.rule_id << " "
                      << (f.severity == Severity::Error ? "error" : "warning");
            if (!f.subject.empty()) std::cout << " [" << f.subject << "]";
            std::cout << ": " << f.message << "\n";
        }
    }
    return kExitOk;
}

std::string case_description(const std::string& data_root, const std::string& case_id) {
    const std::vector<Case> cases = load_dataset(data_root);
    for (const Case& c : cases)
        if (c.id == case_id) return c.description;
    throw ConfigError("case not found in dataset: " + case_id);
}

int cmd_extract_tasks(const std::string& data_root, const std::string& bpmn_file,
                      const std::string& case_id, const std::string& description_file,
                      const std::string& model_id, const std::string& mode_name,
                      const ProviderOptions& popts) {
    if (!bpmn_file.empty()) {
        const ParseReport report = parse_model_file(bpmn_file, "bpmn");
        if (!report.ok()) return kExitConfig;
        std::vector<Diagnostic> warnings;
        for (const std::string& t : extract_tasks(*report.graph, &warnings)) std::cout << t << "\n";
        for (const Diagnostic& d : warnings) std::cerr << to_string(d) << "\n";
        return kExitOk;
    }

    std::string description;
    if (!case_id.empty()) description = case_description(data_root, case_id);
    else if (!description_file.empty()) description = trim(read_file_or_die(description_file));
    else throw ConfigError("extract-tasks needs --bpmn, --case or --description");

    const auto mode = task_mode_from_name(mode_name);
    if (!mode) throw ConfigError("unknown task mode: " + mode_name);

    ProviderBundle provider = make_provider(popts);
    ChatRequest request;
    request.model_id = model_id;
    request.prompt = build_task_prompt(description, *mode);
    const std::string response = provider.get().complete(request);
    for (const std::string& t : parse_task_list(response)) std::cout << t << "\n";
    return kExitOk;
}

int cmd_gen_model(const std::string& data_root, const std::string& case_id,
                  const std::string& description_file, const std::string& model_id,
                  const std::string& variant_str, const std::string& notation_str,
                  const std::string& artefact_dir, const std::string& emit_format,
                  const ProviderOptions& popts) {
    std::string description;
    if (!case_id.empty()) description = case_description(data_root, case_id);
    else if (!description_file.empty()) description = trim(read_file_or_die(description_file));
    else throw ConfigError("gen-model needs --case or --description");

    const auto variant = variant_from_name(variant_str);
    if (!variant) throw ConfigError("unknown prompt variant: " + variant_str);
    const auto notation = notation_from_name(notation_str);
    if (!notation) throw ConfigError("unknown notation: " + notation_str);

    const ArtefactSet artefacts = ArtefactSet::load(artefact_dir);
    ProviderBundle provider = make_provider(popts);

    std::optional<std::vector<std::string>> tasks;
    if (variant_requires_tasks(*variant)) {
        ChatRequest task_request;
        task_request.model_id = model_id;
        task_request.prompt = build_task_prompt(description, TaskPromptMode::Restricted);
        tasks = parse_task_list(provider.get().complete(task_request));
    }

    ChatRequest request;
    request.model_id = model_id;
    request.prompt = build_model_prompt(description, *variant, *notation, tasks, artefacts);
    const std::string response = provider.get().complete(request);

    const ParseReport report = parse_notation(*notation, response);
    for (const Diagnostic& d : report.issues) std::cerr << to_string(d) << "\n";
    if (!report.ok()) {
        std::cerr << "model did not parse\n";
        return kExitConfig;
    }
    if (emit_format == "json") std::cout << graph_to_canonical_json(*report.graph);
    else if (emit_format == "mer") std::cout << emit_mer(*report.graph);
    else if (emit_format == "gv") std::cout << emit_gv(*report.graph);
    else std::cout << response;
    return kExitOk;
}

int cmd_run_matrix(const std::string& data_root, const std::string& spec_file,
                   const std::string& artefact_dir, const std::string& out_dir,
                   std::optional<int> worker_override, ProviderOptions popts) {
    RunSpec spec = RunSpec::from_json_file(spec_file);
    if (worker_override) spec.worker_limit = *worker_override;
    const std::vector<Case> cases = load_dataset(data_root);
    const ArtefactSet artefacts = ArtefactSet::load(artefact_dir);

    std::optional<SynonymLexicon> lexicon;
    if (spec.kpis.contains("kpi7"))
        lexicon = SynonymLexicon::load(fs::path(data_root) / "lexicon" / "synonyms.txt");

    // fresh recordings live next to the run's other outputs
    if (popts.record && popts.transcripts == "data/transcripts")
        popts.transcripts = out_dir + "/transcripts";

    ProviderBundle provider = make_provider(popts);
    const RawResults raw = run_matrix(spec, cases, provider.get(), artefacts,
                                      lexicon ? &*lexicon : nullptr);

    HashingEmbeddingProvider embedder;
    const ScoreResult result = score(raw, cases, &embedder);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "raw.json", raw_to_json(raw).dump(2) + "\n");
    write_file(fs::path(out_dir) / "rows.csv", render_csv(result.rows));
    write_file(fs::path(out_dir) / "report.md", render_markdown(result, spec));

    std::size_t failed = 0;
    for (const CellResult& c : raw.cells)
        if (c.failed) ++failed;
    std::cout << "cells: " << raw.cells.size() << ", failed: " << failed << "\n";
    std::cout << "wrote " << out_dir << "/raw.json, rows.csv, report.md\n";
    if (failed == raw.cells.size() && !raw.cells.empty()) return kExitAllFailed;
    return kExitOk;
}

int cmd_kpi7(const std::string& data_root, const std::string& case_id, const std::string& model_id,
             double rate, std::uint64_t seed, const ProviderOptions& popts) {
    const std::string description = case_description(data_root, case_id);
    const SynonymLexicon lexicon =
        SynonymLexicon::load(fs::path(data_root) / "lexicon" / "synonyms.txt");
    ProviderBundle provider = make_provider(popts);
    HashingEmbeddingProvider embedder;

    const TaskExtractor extractor = [&](const std::string& text) {
        ChatRequest request;
        request.model_id = model_id;
        request.prompt = build_task_prompt(text, TaskPromptMode::Restricted);
        return parse_task_list(provider.get().complete(request));
    };

    const auto rows = kpi7_run(description, RunSpec::kpi7_methods(), extractor, &embedder,
                               lexicon, seed, rate);
    std::cout << "method | tasks | c | nc\n";
    for (const Kpi7Row& row : rows) {
        if (!row.error.empty()) {
            std::cout << row.method << " | error: " << row.error << "\n";
            continue;
        }
        std::cout << row.method << " | " << fmt_double(row.avg_task_count) << " | "
                  << fmt_double(row.c_similarity) << " | " << fmt_double(row.nc_similarity)
                  << "\n";
    }
    return kExitOk;
}

int cmd_score(const std::string& data_root, const std::string& raw_file,
              const std::string& out_csv) {
    nlohmann::json j = nlohmann::json::parse(read_file_or_die(raw_file));
    const RawResults raw = raw_from_json(j);
    const std::vector<Case> cases = load_dataset(data_root);
    HashingEmbeddingProvider embedder;
    const ScoreResult result = score(raw, cases, &embedder);
    const std::string csv = render_csv(result.rows);
    if (out_csv.empty()) std::cout << csv;
    else write_file(out_csv, csv);
    return kExitOk;
}

int cmd_report(const std::string& data_root, const std::string& raw_file,
               const std::string& format, const std::string& out_file) {
    nlohmann::json j = nlohmann::json::parse(read_file_or_die(raw_file));
    const RawResults raw = raw_from_json(j);
    const std::vector<Case> cases = load_dataset(data_root);
    HashingEmbeddingProvider embedder;
    const ScoreResult result = score(raw, cases, &embedder);

    std::string content;
    if (format == "csv") content = render_csv(result.rows);
    else if (format == "markdown" || format == "md") content = render_markdown(result, raw.spec);
    else throw ConfigError("unknown report format: " + format);

    if (out_file.empty()) std::cout << content;
    else write_file(out_file, content);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmeval - LLM process-model extraction evaluation toolchain"};
    app.require_subcommand(1);

    std::string data_root = "data";
    app.add_option("--data", data_root, "Dataset root (contains cases/)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a dataset and print its statistics");
    std::string ingest_root;
    ingest->add_option("root", ingest_root, "Dataset root")->required();

    // lint
    auto* lint_cmd = app.add_subcommand("lint", "Structural lint for a model file");
    std::string lint_file, lint_format;
    bool lint_json = false;
    lint_cmd->add_option("file", lint_file, "Model file (.bpmn/.xml/.mer/.mmd/.gv/.dot)")
        ->required();
    lint_cmd->add_option("--format", lint_format, "bpmn|mer|gv (default: by extension)");
    lint_cmd->add_flag("--json", lint_json, "Emit findings as JSON");

    // extract-tasks
    auto* extract = app.add_subcommand("extract-tasks",
                                       "List tasks from a BPMN model or via a chat provider");
    std::string ex_bpmn, ex_case, ex_desc, ex_model = "gpt-4", ex_mode = "restricted";
    ProviderOptions ex_popts;
    extract->add_option("--bpmn", ex_bpmn, "BPMN file to extract from");
    extract->add_option("--case", ex_case, "Dataset case id");
    extract->add_option("--description", ex_desc, "Description text file");
    extract->add_option("--model", ex_model, "Chat model id");
    extract->add_option("--mode", ex_mode, "unrestricted|restricted");
    ex_popts.attach(extract);

    // gen-model
    auto* gen = app.add_subcommand("gen-model", "Generate one model through a chat provider");
    std::string gen_case, gen_desc, gen_model = "gpt-4", gen_variant = "RAB", gen_notation = "MER";
    std::string gen_artefacts = "data/artefacts", gen_emit = "raw";
    ProviderOptions gen_popts;
    gen->add_option("--case", gen_case, "Dataset case id");
    gen->add_option("--description", gen_desc, "Description text file");
    gen->add_option("--model", gen_model, "Chat model id");
    gen->add_option("--variant", gen_variant, "S|A|R|B|RA|RAB");
    gen->add_option("--notation", gen_notation, "MER|GV");
    gen->add_option("--artefacts", gen_artefacts, "Artefact directory");
    gen->add_option("--emit", gen_emit, "raw|json|mer|gv output form");
    gen_popts.attach(gen);

    // run-matrix
    auto* matrix = app.add_subcommand("run-matrix", "Run the full evaluation matrix");
    std::string mx_spec, mx_artefacts = "data/artefacts", mx_out = "out/run";
    std::optional<int> mx_workers;
    ProviderOptions mx_popts;
    matrix->add_option("--spec", mx_spec, "Run spec JSON file")->required();
    matrix->add_option("--artefacts", mx_artefacts, "Artefact directory");
    matrix->add_option("--out", mx_out, "Output directory");
    matrix->add_option("--workers", mx_workers, "Override worker_limit");
    mx_popts.attach(matrix);

    // kpi7
    auto* kpi7_cmd = app.add_subcommand("kpi7",
                                        "Paraphrase-stability table for one case and model");
    std::string k7_case, k7_model = "gpt-4";
    double k7_rate = 0.1;
    std::uint64_t k7_seed = 42;
    ProviderOptions k7_popts;
    kpi7_cmd->add_option("--case", k7_case, "Dataset case id")->required();
    kpi7_cmd->add_option("--model", k7_model, "Chat model id");
    kpi7_cmd->add_option("--rate", k7_rate, "Fraction of eligible tokens modified");
    kpi7_cmd->add_option("--seed", k7_seed, "Paraphrase seed");
    k7_popts.attach(kpi7_cmd);

    // score
    auto* score_cmd = app.add_subcommand("score", "Score persisted raw results into rows.csv");
    std::string sc_raw, sc_out;
    score_cmd->add_option("--raw", sc_raw, "raw.json from run-matrix")->required();
    score_cmd->add_option("--out", sc_out, "Output CSV path (default: stdout)");

    // report
    auto* report_cmd = app.add_subcommand("report", "Render a report from raw results");
    std::string rp_raw, rp_format = "markdown", rp_out;
    report_cmd->add_option("--raw", rp_raw, "raw.json from run-matrix")->required();
    report_cmd->add_option("--format", rp_format, "csv|markdown");
    report_cmd->add_option("--out", rp_out, "Output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_root);
        if (lint_cmd->parsed()) return cmd_lint(lint_file, lint_format, lint_json);
        if (extract->parsed())
            return cmd_extract_tasks(data_root, ex_bpmn, ex_case, ex_desc, ex_model, ex_mode,
                                     ex_popts);
        if (gen->parsed())
            return cmd_gen_model(data_root, gen_case, gen_desc, gen_model, gen_variant,
                                 gen_notation, gen_artefacts, gen_emit, gen_popts);
        if (matrix->parsed())
            return cmd_run_matrix(data_root, mx_spec, mx_artefacts, mx_out, mx_workers, mx_popts);
        if (kpi7_cmd->parsed())
            return cmd_kpi7(data_root, k7_case, k7_model, k7_rate, k7_seed, k7_popts);
        if (score_cmd->parsed()) return cmd_score(data_root, sc_raw, sc_out);
        if (report_cmd->parsed()) return cmd_report(data_root, rp_raw, rp_format, rp_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
