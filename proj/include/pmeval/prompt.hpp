#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmeval/notation.hpp"

namespace pmeval {

enum class TaskPromptMode { Unrestricted, Restricted };

std::string_view task_mode_name(TaskPromptMode m);  // "unrestricted" / "restricted"
std::optional<TaskPromptMode> task_mode_from_name(std::string_view name);

// The six model-generation prompt flavours: combinations of the process
// description (always), extracted task list (A), notation rules (R) and BPMN
// element summary (B).
enum class PromptVariant { S, A, R, B, RA, RAB };

std::string_view variant_name(PromptVariant v);
std::optional<PromptVariant> variant_from_name(std::string_view name);
const std::vector<PromptVariant>& all_variants();

bool variant_requires_tasks(PromptVariant v);  // A, RA, RAB
bool variant_requires_rules(PromptVariant v);  // R, RA, RAB
bool variant_requires_bpmn(PromptVariant v);   // B, RAB

// Prompt building blocks loaded from the artefact directory:
// rules_mer.txt, rules_gv.txt, bpmn_summary.txt.
struct ArtefactSet {
    std::map<NotationKind, std::string> rules;
    std::string bpmn_summary;

    static ArtefactSet load(const std::filesystem::path& dir);
};

// Task-extraction prompt; the wording is fixed and the description is
// substituted verbatim. Throws std::invalid_argument on an empty description.
std::string build_task_prompt(std::string_view description, TaskPromptMode mode);

// Model-generation prompt with the variant's sections in fixed order
// (description, tasks, rules, BPMN elements). Throws std::invalid_argument
// naming the missing input when the variant's requirements are not met.
std::string build_model_prompt(std::string_view description, PromptVariant variant,
                               NotationKind notation,
                               const std::optional<std::vector<std::string>>& tasks,
                               const ArtefactSet& artefacts);

}  // namespace pmeval
