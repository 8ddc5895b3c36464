// Builds the offline fixture set: synthetic chat transcripts for every matrix
// cell (derived deterministically from the gold models), the worked-example
// fragment transcripts, the frozen prompt catalog and the golden rows.csv.
// Run from the repository root after changing dataset, prompts or notation
// emitters, then commit the refreshed files.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "pmeval/dataset.hpp"
#include "pmeval/graph_json.hpp"
#include "pmeval/kpi7.hpp"
#include "pmeval/normalize.hpp"
#include "pmeval/notation.hpp"
#include "pmeval/prompt.hpp"
#include "pmeval/provider.hpp"
#include "pmeval/runner.hpp"

namespace fs = std::filesystem;
using namespace pmeval;

namespace {

constexpr const char* kFixtureProvider = "fixture-synth";
constexpr const char* kFixtureTimestamp = "2024-01-15T00:00:00Z";
const std::vector<std::string> kModels = {"text-davinci-003", "gpt-4"};

void record(TranscriptStore& store, const ChatRequest& request, const std::string& response) {
    Transcript t;
    t.request_hash = request_hash(request);
    t.provider_id = kFixtureProvider;
    t.timestamp = kFixtureTimestamp;
    t.request = request;
    t.response_text = response;
    store.save(t);
}

ProcessGraph copy_graph(const ProcessGraph& g) {
    ProcessGraph out;
    for (const Node& n : g.nodes()) out.add_node(n);
    for (const Edge& e : g.edges()) out.add_edge(e);
    return out;
}

// Removes one task node, rewiring its predecessors to its successors.
ProcessGraph without_task(const ProcessGraph& g, const std::string& label) {
    std::string victim;
    for (const Node& n : g.nodes())
        if (n.kind == NodeKind::Task && n.label == label) victim = n.id;
    if (victim.empty()) return copy_graph(g);

    ProcessGraph out;
    for (const Node& n : g.nodes())
        if (n.id != victim) out.add_node(n);
    std::vector<const Edge*> ins = g.in_edges(victim);
    std::vector<const Edge*> outs = g.out_edges(victim);
    for (const Edge& e : g.edges()) {
        if (e.source == victim || e.target == victim) continue;
        out.add_edge(e);
    }
    for (const Edge* in : ins) {
        for (const Edge* outE : outs) {
            if (in->source == outE->target) continue;
            out.add_edge(Edge{in->source, outE->target,
                              !in->condition.empty() ? in->condition : outE->condition});
        }
    }
    return out;
}

ProcessGraph drop_last_tasks(const ProcessGraph& g, std::size_t count) {
    ProcessGraph out = copy_graph(g);
    std::vector<std::string> order = extract_tasks(out);
    for (std::size_t i = 0; i < count && order.size() > 1; ++i) {
        out = without_task(out, order.back());
        order.pop_back();
    }
    return out;
}

// Linear start -> t1 .. tk -> end over the first `count` task labels.
ProcessGraph chain_of(const std::vector<std::string>& labels, std::size_t count) {
    ProcessGraph g;
    g.add_node(Node{"start", NodeKind::StartEvent, ""});
    std::string prev = "start";
    for (std::size_t i = 0; i < count && i < labels.size(); ++i) {
        const std::string id = "t" + std::to_string(i + 1);
        g.add_node(Node{id, NodeKind::Task, labels[i]});
        g.add_edge(Edge{prev, id, ""});
        prev = id;
    }
    g.add_node(Node{"end", NodeKind::EndEvent, ""});
    g.add_edge(Edge{prev, "end", ""});
    return g;
}

std::size_t fraction_count(std::size_t n, double p) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(p * static_cast<double>(n))));
}

std::string enumerate_tasks(const std::vector<std::string>& tasks, bool numbered) {
    std::string out = numbered ? "The main tasks in the process are:\n" : "";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (numbered) out += std::to_string(i + 1) + ". " + tasks[i] + "\n";
        else out += "- " + tasks[i] + "\n";
    }
    return out;
}

std::vector<std::string> extraction_tasks(const std::vector<std::string>& gold,
                                          const std::string& model, TaskPromptMode mode) {
    std::size_t keep = gold.size();
    if (model == "gpt-4") {
        if (mode == TaskPromptMode::Unrestricted && keep > 3) keep -= 1;
    } else {
        keep = keep > 4 ? keep - (mode == TaskPromptMode::Unrestricted ? 2 : 1) : keep;
    }
    return {gold.begin(), gold.begin() + static_cast<std::ptrdiff_t>(keep)};
}

// What the simulated model answers for a generation cell. The weaker prompts
// come back as bare task chains, the rule-laden ones track the gold model;
// some MER answers arrive wrapped in prose and code fences, and one cell is
// deliberately unusable.
std::string generation_response(const Case& c, const std::string& model, PromptVariant variant,
                                NotationKind notation) {
    if (model == "text-davinci-003" && variant == PromptVariant::S &&
        notation == NotationKind::MER && c.id == "1.3") {
        return "I'm sorry, but I can only describe this process in words. The company first "
               "records the order and then assembles the bicycle before delivering it.";
    }

    const ProcessGraph& gold = c.gold.front().graph;
    const std::vector<std::string> labels = extract_tasks(gold);
    const bool strong = model == "gpt-4";

    ProcessGraph answer;
    bool fence = false;
    switch (variant) {
        case PromptVariant::S:
            answer = chain_of(labels, fraction_count(labels.size(), strong ? 0.6 : 0.5));
            fence = notation == NotationKind::MER;
            break;
        case PromptVariant::A:
            answer = chain_of(labels, strong ? labels.size()
                                             : fraction_count(labels.size(), 0.7));
            fence = notation == NotationKind::MER;
            break;
        case PromptVariant::B:
            answer = chain_of(labels, fraction_count(labels.size(), strong ? 0.7 : 0.5));
            break;
        case PromptVariant::R:
            answer = drop_last_tasks(gold, strong ? 1 : 2);
            break;
        case PromptVariant::RA:
            answer = strong ? normalize_for_comparison(gold) : drop_last_tasks(gold, 1);
            break;
        case PromptVariant::RAB:
            answer = strong ? copy_graph(gold)
                            : normalize_for_comparison(drop_last_tasks(gold, 1));
            break;
    }

    std::string text = emit_notation(notation, answer);
    if (fence) {
        std::string wrapped = "Here is the process model you asked for:\n\n";
        wrapped += notation == NotationKind::MER ? "```mermaid\n" : "```dot\n";
        wrapped += text;
        wrapped += "```\n\nLet me know if you would like any changes.\n";
        return wrapped;
    }
    return text;
}

ProcessGraph fragment_graph() {
    ProcessGraph g;
    g.add_node(Node{"t1", NodeKind::Task, "task1"});
    g.add_node(Node{"g1", NodeKind::ExclusiveGateway, ""});
    g.add_node(Node{"t2", NodeKind::Task, "task2"});
    g.add_node(Node{"t3", NodeKind::Task, "task3"});
    g.add_edge(Edge{"t1", "g1", ""});
    g.add_edge(Edge{"g1", "t2", ""});
    g.add_edge(Edge{"g1", "t3", ""});
    return g;
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

RunSpec replay_spec() {
    RunSpec spec;
    spec.model_ids = kModels;
    spec.variants = all_variants();
    spec.notations = {NotationKind::MER, NotationKind::GV};
    spec.task_modes = {TaskPromptMode::Unrestricted, TaskPromptMode::Restricted};
    spec.kpis = {"kpi1", "kpi2", "kpi3", "kpi4", "kpi5", "kpi6", "model_metrics"};
    spec.seed = 42;
    spec.worker_limit = 8;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path data_root = "data";
    if (argc > 1) data_root = argv[1];

    const std::vector<Case> cases = load_dataset(data_root);
    const ArtefactSet artefacts = ArtefactSet::load(data_root / "artefacts");
    const RunSpec spec = replay_spec();

    const fs::path transcripts_dir = data_root / "transcripts";
    fs::remove_all(transcripts_dir);
    TranscriptStore store(transcripts_dir);

    // task-extraction transcripts
    for (const Case& c : cases) {
        const std::vector<std::string> gold = extract_tasks(c.gold.front().graph);
        for (const std::string& model : kModels) {
            for (TaskPromptMode mode : spec.task_modes) {
                ChatRequest request;
                request.model_id = model;
                request.prompt = build_task_prompt(c.description, mode);
                request.temperature = spec.temperature;
                request.max_tokens = spec.max_tokens;
                const std::vector<std::string> tasks = extraction_tasks(gold, model, mode);
                record(store, request, enumerate_tasks(tasks, mode == TaskPromptMode::Restricted));
            }
        }
    }

    // model-generation transcripts (task lists flow in from the restricted cells)
    for (const Case& c : cases) {
        for (const std::string& model : kModels) {
            ChatRequest task_request;
            task_request.model_id = model;
            task_request.prompt = build_task_prompt(c.description, TaskPromptMode::Restricted);
            task_request.temperature = spec.temperature;
            task_request.max_tokens = spec.max_tokens;
            const std::vector<std::string> tasks =
                parse_task_list(store.load(request_hash(task_request))->response_text);

            for (PromptVariant variant : spec.variants) {
                for (NotationKind notation : spec.notations) {
                    ChatRequest request;
                    request.model_id = model;
                    request.prompt = build_model_prompt(
                        c.description, variant, notation,
                        variant_requires_tasks(variant)
                            ? std::optional<std::vector<std::string>>(tasks)
                            : std::nullopt,
                        artefacts);
                    request.temperature = spec.temperature;
                    request.max_tokens = spec.max_tokens;
                    record(store, request, generation_response(c, model, variant, notation));
                }
            }
        }
    }

    // worked-example fragment, both notations
    const std::string fragment = "After task1, either task2 or task3 are conducted.";
    for (NotationKind notation : {NotationKind::MER, NotationKind::GV}) {
        ChatRequest request;
        request.model_id = "gpt-4";
        request.prompt =
            build_model_prompt(fragment, PromptVariant::R, notation, std::nullopt, artefacts);
        record(store, request, emit_notation(notation, fragment_graph()));
    }

    // frozen prompt catalog
    const fs::path prompts_dir = data_root / "golden" / "prompts";
    const std::string sample_desc = fragment;
    const std::vector<std::string> sample_tasks = {"task1", "task2", "task3"};
    write_file(prompts_dir / "task_unrestricted.txt",
               build_task_prompt(sample_desc, TaskPromptMode::Unrestricted));
    write_file(prompts_dir / "task_restricted.txt",
               build_task_prompt(sample_desc, TaskPromptMode::Restricted));
    for (PromptVariant variant : all_variants()) {
        for (NotationKind notation : {NotationKind::MER, NotationKind::GV}) {
            const std::string name = "model_" + std::string(variant_name(variant)) + "_" +
                                     std::string(notation_name(notation)) + ".txt";
            write_file(prompts_dir / name,
                       build_model_prompt(sample_desc, variant, notation,
                                          variant_requires_tasks(variant)
                                              ? std::optional<std::vector<std::string>>(sample_tasks)
                                              : std::nullopt,
                                          artefacts));
        }
    }

    // canonical-JSON golden for the largest gold model
    for (const Case& c : cases) {
        if (c.id != "1.3") continue;
        write_file(data_root / "golden" / "graph_1.3.json",
                   graph_to_canonical_json(c.gold.front().graph));
    }

    // replay run spec + golden rows.csv from a replay run
    write_file(data_root / "runspec_replay.json", spec.to_json().dump(2) + "\n");

    ReplayChatProvider replay(store);
    const RawResults raw = run_matrix(spec, cases, replay, artefacts);
    HashingEmbeddingProvider embedder;
    const ScoreResult result = score(raw, cases, &embedder);
    write_file(data_root / "golden" / "rows.csv", render_csv(result.rows));

    std::size_t failed = 0;
    for (const CellResult& cell : raw.cells)
        if (cell.failed) ++failed;
    std::cout << "transcripts: " << store.count() << "\n";
    std::cout << "matrix cells: " << raw.cells.size() << " (" << failed << " failed by design)\n";
    std::cout << "golden rows: " << result.rows.size() << "\n";
    return 0;
}
