#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pmeval/prompt.hpp"

using namespace pmeval;

namespace {

ArtefactSet artefacts() {
    return ArtefactSet::load(std::string(PMEVAL_SOURCE_DIR) + "/data/artefacts");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// section headers sit alone on their own line; substring hits inside artefact
// text do not count
bool has_section(const std::string& prompt, const std::string& marker) {
    return prompt.find("\n" + marker + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("task prompt templates match the fixed wording verbatim") {
    CHECK(build_task_prompt("Pay the bill.", TaskPromptMode::Unrestricted) ==
          "Considering following Pay the bill. return the list of main tasks in it");
    CHECK(build_task_prompt("Pay the bill.", TaskPromptMode::Restricted) ==
          "Considering following Pay the bill. return the list of main tasks (each 3-5 words) in "
          "it");
}

TEST_CASE("task prompt rejects an empty description") {
    CHECK_THROWS_AS(build_task_prompt("", TaskPromptMode::Unrestricted), std::invalid_argument);
    CHECK_THROWS_AS(build_task_prompt("  \n", TaskPromptMode::Restricted), std::invalid_argument);
}

TEST_CASE("variant requirements") {
    CHECK_FALSE(variant_requires_tasks(PromptVariant::S));
    CHECK(variant_requires_tasks(PromptVariant::A));
    CHECK(variant_requires_rules(PromptVariant::R));
    CHECK(variant_requires_bpmn(PromptVariant::B));
    CHECK(variant_requires_tasks(PromptVariant::RA));
    CHECK(variant_requires_rules(PromptVariant::RA));
    CHECK_FALSE(variant_requires_bpmn(PromptVariant::RA));
    CHECK(variant_requires_tasks(PromptVariant::RAB));
    CHECK(variant_requires_rules(PromptVariant::RAB));
    CHECK(variant_requires_bpmn(PromptVariant::RAB));
}

TEST_CASE("section presence matrix holds for every variant") {
    const ArtefactSet set = artefacts();
    const std::vector<std::string> tasks = {"task1", "task2"};
    for (PromptVariant v : all_variants()) {
        for (NotationKind notation : {NotationKind::MER, NotationKind::GV}) {
            const std::string prompt = build_model_prompt(
                "Some description.", v, notation,
                variant_requires_tasks(v) ? std::optional<std::vector<std::string>>(tasks)
                                          : std::nullopt,
                set);
            CHECK(has_section(prompt, "Process description:"));
            CHECK(has_section(prompt, "Tasks:") == variant_requires_tasks(v));
            CHECK(has_section(prompt, "Rules:") == variant_requires_rules(v));
            CHECK(has_section(prompt, "BPMN elements:") == variant_requires_bpmn(v));
        }
    }
}

TEST_CASE("sections appear in fixed order") {
    const ArtefactSet set = artefacts();
    const std::string prompt =
        build_model_prompt("Description here.", PromptVariant::RAB, NotationKind::MER,
                           std::vector<std::string>{"a"}, set);
    const std::size_t d = prompt.find("Process description:");
    const std::size_t t = prompt.find("Tasks:");
    const std::size_t r = prompt.find("Rules:");
    const std::size_t b = prompt.find("BPMN elements:");
    REQUIRE(d != std::string::npos);
    CHECK(d < t);
    CHECK(t < r);
    CHECK(r < b);
}

TEST_CASE("missing inputs are rejected with the artefact named") {
    const ArtefactSet set = artefacts();
    CHECK_THROWS_WITH_AS(build_model_prompt("d", PromptVariant::A, NotationKind::MER, std::nullopt,
                                            set),
                         doctest::Contains("task list"), std::invalid_argument);
    ArtefactSet empty_rules = set;
    empty_rules.rules.clear();
    CHECK_THROWS_WITH_AS(build_model_prompt("d", PromptVariant::R, NotationKind::MER, std::nullopt,
                                            empty_rules),
                         doctest::Contains("rules artefact"), std::invalid_argument);
    ArtefactSet no_bpmn = set;
    no_bpmn.bpmn_summary.clear();
    CHECK_THROWS_WITH_AS(build_model_prompt("d", PromptVariant::B, NotationKind::MER, std::nullopt,
                                            no_bpmn),
                         doctest::Contains("BPMN summary"), std::invalid_argument);
}

TEST_CASE("prompts are byte-deterministic") {
    const ArtefactSet set = artefacts();
    const std::vector<std::string> tasks = {"t1", "t2"};
    const std::string a =
        build_model_prompt("desc", PromptVariant::RAB, NotationKind::GV, tasks, set);
    const std::string b =
        build_model_prompt("desc", PromptVariant::RAB, NotationKind::GV, tasks, set);
    CHECK(a == b);
}

TEST_CASE("prompt catalog matches the frozen golden files") {
    const ArtefactSet set = artefacts();
    const std::string dir = std::string(PMEVAL_SOURCE_DIR) + "/data/golden/prompts/";
    const std::string desc = "After task1, either task2 or task3 are conducted.";
    const std::vector<std::string> tasks = {"task1", "task2", "task3"};

    CHECK(build_task_prompt(desc, TaskPromptMode::Unrestricted) ==
          slurp(dir + "task_unrestricted.txt"));
    CHECK(build_task_prompt(desc, TaskPromptMode::Restricted) ==
          slurp(dir + "task_restricted.txt"));

    for (PromptVariant v : all_variants()) {
        for (NotationKind notation : {NotationKind::MER, NotationKind::GV}) {
            const std::string name = "model_" + std::string(variant_name(v)) + "_" +
                                     std::string(notation_name(notation)) + ".txt";
            const std::string prompt = build_model_prompt(
                desc, v, notation,
                variant_requires_tasks(v) ? std::optional<std::vector<std::string>>(tasks)
                                          : std::nullopt,
                set);
            CHECK_MESSAGE(prompt == slurp(dir + name), "catalog drift in ", name);
        }
    }
}
