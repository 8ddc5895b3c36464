#include "pmeval/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pmeval/bpmn.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw DatasetError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_meta(Case& c, const fs::path& meta_path) {
    if (!fs::exists(meta_path)) return;
    json j;
    try {
        std::ifstream in(meta_path);
        in >> j;
    } catch (const json::exception& e) {
        throw DatasetError("case " + c.id + ": bad meta.json: " + e.what());
    }
    if (j.contains("quality")) {
        const json& q = j["quality"];
        if (!q.is_array() || q.size() != c.gold.size())
            throw DatasetError("case " + c.id +
                               ": quality array must have one entry per gold model");
        for (std::size_t i = 0; i < c.gold.size(); ++i) {
            const int v = q[i].get<int>();
            if (v < 0 || v > 5)
                throw DatasetError("case " + c.id + ": quality values must lie in [0,5]");
            c.gold[i].quality = v;
        }
    }
    if (j.contains("correctness_labels")) {
        for (const auto& [key, value] : j["correctness_labels"].items())
            c.correctness_labels[key] = value.get<bool>();
    }
}

}  // namespace

double Case::mean_gold_task_count() const {
    if (gold_task_counts.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t n : gold_task_counts) sum += static_cast<double>(n);
    return sum / static_cast<double>(gold_task_counts.size());
}

std::vector<Case> load_dataset(const fs::path& root) {
    const fs::path cases_dir = root / "cases";
    if (!fs::is_directory(cases_dir))
        throw DatasetError("dataset root has no cases/ directory: " + root.string());

    std::vector<Case> cases;
    for (const auto& entry : fs::directory_iterator(cases_dir)) {
        if (!entry.is_directory()) continue;
        Case c;
        c.id = entry.path().filename().string();

        const fs::path desc_path = entry.path() / "description.txt";
        if (!fs::exists(desc_path))
            throw DatasetError("case " + c.id + ": missing description.txt");
        c.description = trim(read_file(desc_path));
        if (c.description.empty()) throw DatasetError("case " + c.id + ": empty description");
        c.word_count = word_count(c.description);

        const fs::path gold_dir = entry.path() / "gold";
        std::vector<fs::path> gold_files;
        if (fs::is_directory(gold_dir)) {
            for (const auto& g : fs::directory_iterator(gold_dir))
                if (g.path().extension() == ".bpmn" || g.path().extension() == ".xml")
                    gold_files.push_back(g.path());
        }
        std::sort(gold_files.begin(), gold_files.end());
        if (gold_files.empty()) throw DatasetError("case " + c.id + ": no gold model");

        for (const fs::path& g : gold_files) {
            GoldModel model;
            model.file = g.filename().string();
            try {
                model.graph = parse_bpmn_xml(read_file(g)).graph;
            } catch (const ParseError& e) {
                throw DatasetError("case " + c.id + ": gold model " + model.file + " line " +
                                   std::to_string(e.line) + ": " + e.what());
            }
            c.gold_task_counts.push_back(model.graph.task_count());
            c.gold.push_back(std::move(model));
        }

        apply_meta(c, entry.path() / "meta.json");
        cases.push_back(std::move(c));
    }

    if (cases.empty()) throw DatasetError("no cases found under " + cases_dir.string());
    std::sort(cases.begin(), cases.end(), [](const Case& a, const Case& b) { return a.id < b.id; });
    return cases;
}

double mean_gold_task_count(const std::vector<Case>& cases) {
    if (cases.empty()) return 0.0;
    double sum = 0.0;
    for (const Case& c : cases) sum += c.mean_gold_task_count();
    return sum / static_cast<double>(cases.size());
}

}  // namespace pmeval
