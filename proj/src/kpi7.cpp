#include "pmeval/kpi7.hpp"

#include <cctype>

#include "pmeval/text.hpp"

namespace pmeval {

namespace {

// Strips one leading enumeration marker ("1.", "2)", "3:", "-", "*", "•").
// Returns the remaining label and whether a marker was present.
std::pair<std::string, bool> strip_marker(const std::string& line) {
    std::size_t i = 0;
    bool marked = false;
    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits])))
        ++digits;
    if (digits > 0 && digits < line.size() &&
        (line[digits] == '.' || line[digits] == ')' || line[digits] == ':')) {
        i = digits + 1;  // a bare leading number stays part of the label
        marked = true;
    }
    for (;;) {
        if (i < line.size() &&
            (line[i] == '-' || line[i] == '*' || line[i] == '.' || line[i] == ')')) {
            ++i;
            marked = true;
            continue;
        }
        if (i < line.size() && line[i] == ' ') {
            ++i;
            continue;
        }
        if (line.compare(i, 3, "\xe2\x80\xa2") == 0) {  // UTF-8 bullet
            i += 3;
            marked = true;
            continue;
        }
        break;
    }
    return {trim(line.substr(i)), marked};
}

}  // namespace

std::vector<std::string> parse_task_list(std::string_view response) {
    struct Parsed {
        std::string label;
        bool marked;
    };
    std::vector<Parsed> lines;
    bool any_marked = false;
    for (const std::string& raw : split_lines(response)) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        auto [label, marked] = strip_marker(line);
        if (label.empty()) continue;
        any_marked = any_marked || marked;
        lines.push_back({std::move(label), marked});
    }

    // When any line carries an enumeration marker, those lines ARE the list;
    // unmarked lines around them are prose ("The main tasks are:", ...).
    std::vector<std::string> tasks;
    for (Parsed& p : lines)
        if (p.marked || !any_marked) tasks.push_back(std::move(p.label));
    return tasks;
}

std::vector<Kpi7Row> kpi7_run(const std::string& description,
                              const std::vector<ParaphraseMethod>& methods,
                              const TaskExtractor& extractor, EmbeddingProvider* embedder,
                              const SynonymLexicon& lexicon, std::uint64_t seed, double rate) {
    std::vector<Kpi7Row> rows;

    auto run_one = [&](const std::string& name, const std::string& text) {
        Kpi7Row row;
        row.method = name;
        try {
            const std::vector<std::string> tasks = extractor(text);
            row.avg_task_count = static_cast<double>(tasks.size());
            // stability is always judged against the original description
            row.nc_similarity =
                text_similarity(tasks, description, VectorizerKind::NonContextual);
            if (embedder)
                row.c_similarity =
                    text_similarity(tasks, description, VectorizerKind::Contextual, embedder);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    };

    run_one("Original", description);
    for (const ParaphraseMethod& method : methods) {
        std::string text;
        try {
            text = paraphrase(description, method, lexicon, mix_seed(seed, method.name), rate);
        } catch (const std::exception& e) {
            Kpi7Row row;
            row.method = method.name;
            row.error = e.what();
            rows.push_back(std::move(row));
            continue;
        }
        run_one(method.name, text);
    }
    return rows;
}

}  // namespace pmeval
