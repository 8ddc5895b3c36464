#include "pmeval/paraphrase.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pmeval/provider.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

// A word split into leading punctuation, core and trailing punctuation, so
// replacements keep the surrounding text intact.
struct WordParts {
    std::string lead, core, tail;
};

WordParts split_word(const std::string& w) {
    std::size_t b = 0, e = w.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(w[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(w[e - 1]))) --e;
    return {w.substr(0, b), w.substr(b, e - b), w.substr(e)};
}

std::string match_case(const std::string& replacement, const std::string& original) {
    if (original.empty() || replacement.empty()) return replacement;
    std::string out = replacement;
    if (std::isupper(static_cast<unsigned char>(original[0])))
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::size_t count_from_rate(double rate, std::size_t eligible) {
    if (rate <= 0.0 || eligible == 0) return 0;
    return static_cast<std::size_t>(rate * static_cast<double>(eligible) + 0.5);
}

std::vector<std::size_t> pick_positions(std::mt19937_64& rng, std::size_t universe,
                                        std::size_t wanted) {
    std::vector<std::size_t> all(universe);
    for (std::size_t i = 0; i < universe; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(wanted, universe));
    std::sort(all.begin(), all.end());
    return all;
}

std::string synonym_replace(std::vector<std::string> words, const SynonymLexicon& lexicon,
                            std::mt19937_64& rng, double rate) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const WordParts parts = split_word(words[i]);
        if (!parts.core.empty() && lexicon.group_for(to_lower(parts.core))) eligible.push_back(i);
    }
    const std::size_t n = count_from_rate(rate, eligible.size());
    std::shuffle(eligible.begin(), eligible.end(), rng);
    for (std::size_t k = 0; k < n; ++k) {
        std::string& word = words[eligible[k]];
        const WordParts parts = split_word(word);
        const std::vector<std::string>* group = lexicon.group_for(to_lower(parts.core));
        std::vector<std::string> candidates;
        for (const std::string& s : *group)
            if (!iequals(s, parts.core)) candidates.push_back(s);
        if (candidates.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        word = parts.lead + match_case(candidates[pick(rng)], parts.core) + parts.tail;
    }
    return join(words, " ");
}

std::string random_delete(std::vector<std::string> words, std::mt19937_64& rng, double rate) {
    if (words.size() <= 1) return join(words, " ");
    std::size_t n = count_from_rate(rate, words.size());
    n = std::min(n, words.size() - 1);  // never delete everything
    const std::vector<std::size_t> victims = pick_positions(rng, words.size(), n);
    std::vector<std::string> kept;
    std::size_t v = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (v < victims.size() && victims[v] == i) {
            ++v;
            continue;
        }
        kept.push_back(std::move(words[i]));
    }
    return join(kept, " ");
}

std::string random_swap(std::vector<std::string> words, std::mt19937_64& rng, double rate) {
    if (words.size() < 2) return join(words, " ");
    const std::size_t n = count_from_rate(rate, words.size());
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = pick(rng);
        const std::size_t b = pick(rng);
        std::swap(words[a], words[b]);
    }
    return join(words, " ");
}

std::string random_insert(std::vector<std::string> words, const SynonymLexicon& lexicon,
                          std::mt19937_64& rng, double rate) {
    std::vector<std::string> synonyms;
    for (const std::string& w : words) {
        const WordParts parts = split_word(w);
        if (parts.core.empty()) continue;
        if (const std::vector<std::string>* group = lexicon.group_for(to_lower(parts.core))) {
            for (const std::string& s : *group)
                if (!iequals(s, parts.core)) synonyms.push_back(s);
        }
    }
    if (synonyms.empty() || words.empty()) return join(words, " ");
    const std::size_t n = count_from_rate(rate, words.size());
    for (std::size_t k = 0; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick_syn(0, synonyms.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_pos(0, words.size());
        const std::string& syn = synonyms[pick_syn(rng)];
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(pick_pos(rng)), syn);
    }
    return join(words, " ");
}

}  // namespace

SynonymLexicon SynonymLexicon::from_string(std::string_view text) {
    SynonymLexicon lex;
    for (const std::string& line : split_lines(text)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> group;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string word = trim(item);
            if (!word.empty()) group.push_back(word);
        }
        if (group.size() < 2) continue;
        const std::size_t idx = lex.groups_.size();
        for (const std::string& w : group) lex.index_.emplace(to_lower(w), idx);
        lex.groups_.push_back(std::move(group));
    }
    return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open synonym lexicon: " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

const std::vector<std::string>* SynonymLexicon::group_for(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    return it == index_.end() ? nullptr : &groups_[it->second];
}

std::string paraphrase(std::string_view text, const ParaphraseMethod& method,
                       const SynonymLexicon& lexicon, std::uint64_t seed, double rate,
                       ChatProvider* external_provider, const std::string& external_model_id) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("paraphrase: rate must be in [0,1]");

    if (method.kind == ParaphraseKind::Identity) return std::string(text);

    if (method.kind == ParaphraseKind::External) {
        if (!external_provider)
            throw std::invalid_argument("paraphrase method '" + method.name +
                                        "' needs a chat provider");
        ChatRequest request;
        request.model_id = external_model_id.empty() ? method.name : external_model_id;
        request.prompt = "Paraphrase the following text. Keep its meaning, change the wording. "
                         "Return only the paraphrased text.\n\n" +
                         std::string(text);
        const std::string out = external_provider->complete(request);
        return out.empty() ? std::string(text) : out;
    }

    std::vector<std::string> words = split_ws(text);
    if (words.empty()) return std::string(text);
    std::mt19937_64 rng(seed);

    std::string result;
    switch (method.kind) {
        case ParaphraseKind::SynonymReplace:
            result = synonym_replace(std::move(words), lexicon, rng, rate);
            break;
        case ParaphraseKind::RandomDelete:
            result = random_delete(std::move(words), rng, rate);
            break;
        case ParaphraseKind::RandomSwap:
            result = random_swap(std::move(words), rng, rate);
            break;
        case ParaphraseKind::RandomInsert:
            result = random_insert(std::move(words), lexicon, rng, rate);
            break;
        default:
            result = std::string(text);
            break;
    }
    return result.empty() ? std::string(text) : result;
}

}  // namespace pmeval
