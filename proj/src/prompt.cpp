#include "pmeval/prompt.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pmeval/text.hpp"

namespace pmeval {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open artefact file: " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view task_mode_name(TaskPromptMode m) {
    return m == TaskPromptMode::Unrestricted ? "unrestricted" : "restricted";
}

std::optional<TaskPromptMode> task_mode_from_name(std::string_view name) {
    if (iequals(name, "unrestricted")) return TaskPromptMode::Unrestricted;
    if (iequals(name, "restricted")) return TaskPromptMode::Restricted;
    return std::nullopt;
}

std::string_view variant_name(PromptVariant v) {
    switch (v) {
        case PromptVariant::S: return "S";
        case PromptVariant::A: return "A";
        case PromptVariant::R: return "R";
        case PromptVariant::B: return "B";
        case PromptVariant::RA: return "RA";
        case PromptVariant::RAB: return "RAB";
    }
    return "S";
}

std::optional<PromptVariant> variant_from_name(std::string_view name) {
    for (PromptVariant v : all_variants())
        if (iequals(name, variant_name(v))) return v;
    return std::nullopt;
}

const std::vector<PromptVariant>& all_variants() {
    static const std::vector<PromptVariant> variants = {PromptVariant::S,  PromptVariant::A,
                                                        PromptVariant::R,  PromptVariant::B,
                                                        PromptVariant::RA, PromptVariant::RAB};
    return variants;
}

bool variant_requires_tasks(PromptVariant v) {
    return v == PromptVariant::A || v == PromptVariant::RA || v == PromptVariant::RAB;
}

bool variant_requires_rules(PromptVariant v) {
    return v == PromptVariant::R || v == PromptVariant::RA || v == PromptVariant::RAB;
}

bool variant_requires_bpmn(PromptVariant v) {
    return v == PromptVariant::B || v == PromptVariant::RAB;
}

ArtefactSet ArtefactSet::load(const std::filesystem::path& dir) {
    ArtefactSet set;
    set.rules[NotationKind::MER] = read_file(dir / "rules_mer.txt");
    set.rules[NotationKind::GV] = read_file(dir / "rules_gv.txt");
    set.bpmn_summary = read_file(dir / "bpmn_summary.txt");
    for (const auto& [kind, text] : set.rules) {
        if (trim(text).empty())
            throw std::runtime_error(std::string("rules artefact for ") +
                                     std::string(notation_name(kind)) + " is empty");
    }
    if (trim(set.bpmn_summary).empty()) throw std::runtime_error("BPMN summary artefact is empty");
    return set;
}

std::string build_task_prompt(std::string_view description, TaskPromptMode mode) {
    if (trim(description).empty())
        throw std::invalid_argument("build_task_prompt: description is empty");
    std::string out = "Considering following ";
    out += description;
    out += mode == TaskPromptMode::Restricted ? " return the list of main tasks (each 3-5 words) in it"
                                              : " return the list of main tasks in it";
    return out;
}

std::string build_model_prompt(std::string_view description, PromptVariant variant,
                               NotationKind notation,
                               const std::optional<std::vector<std::string>>& tasks,
                               const ArtefactSet& artefacts) {
    if (trim(description).empty())
        throw std::invalid_argument("build_model_prompt: description is empty");
    if (variant_requires_tasks(variant) && (!tasks || tasks->empty()))
        throw std::invalid_argument(std::string("prompt variant ") +
                                    std::string(variant_name(variant)) +
                                    " requires a task list");
    const auto rules_it = artefacts.rules.find(notation);
    if (variant_requires_rules(variant) &&
        (rules_it == artefacts.rules.end() || trim(rules_it->second).empty()))
        throw std::invalid_argument(std::string("prompt variant ") +
                                    std::string(variant_name(variant)) +
                                    " requires the notation rules artefact");
    if (variant_requires_bpmn(variant) && trim(artefacts.bpmn_summary).empty())
        throw std::invalid_argument(std::string("prompt variant ") +
                                    std::string(variant_name(variant)) +
                                    " requires the BPMN summary artefact");

    const char* notation_phrase = notation == NotationKind::MER
                                      ? "Mermaid.js flowchart text"
                                      : "Graphviz DOT text";

    std::string out = "Create a BPMN process model for the process described below and return it as ";
    out += notation_phrase;
    out += ". Return only the graph text.\n";

    out += "\nProcess description:\n";
    out += trim(description);
    out += "\n";

    if (variant_requires_tasks(variant)) {
        out += "\nTasks:\n";
        for (const std::string& t : *tasks) {
            out += "- ";
            out += t;
            out += "\n";
        }
    }
    if (variant_requires_rules(variant)) {
        out += "\nRules:\n";
        out += trim(rules_it->second);
        out += "\n";
    }
    if (variant_requires_bpmn(variant)) {
        out += "\nBPMN elements:\n";
        out += trim(artefacts.bpmn_summary);
        out += "\n";
    }
    return out;
}

}  // namespace pmeval
