#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pmeval {

class ChatProvider;

// The built-in augmentation operators plus external (chat-based) delegation.
enum class ParaphraseKind { Identity, SynonymReplace, RandomDelete, RandomSwap, RandomInsert, External };

struct ParaphraseMethod {
    ParaphraseKind kind = ParaphraseKind::Identity;
    std::string name = "Original";  // display name: "SR", "DL", "SW", "IN", or a custom one

    static ParaphraseMethod identity() { return {ParaphraseKind::Identity, "Original"}; }
    static ParaphraseMethod synonym_replace() { return {ParaphraseKind::SynonymReplace, "SR"}; }
    static ParaphraseMethod random_delete() { return {ParaphraseKind::RandomDelete, "DL"}; }
    static ParaphraseMethod random_swap() { return {ParaphraseKind::RandomSwap, "SW"}; }
    static ParaphraseMethod random_insert() { return {ParaphraseKind::RandomInsert, "IN"}; }
    static ParaphraseMethod external(std::string name) {
        return {ParaphraseKind::External, std::move(name)};
    }
};

// One synonym group per line, comma-separated.
class SynonymLexicon {
  public:
    static SynonymLexicon from_string(std::string_view text);
    static SynonymLexicon load(const std::filesystem::path& file);

    // Group containing the (lowercased) word, or nullptr.
    const std::vector<std::string>* group_for(std::string_view word) const;
    std::size_t group_count() const { return groups_.size(); }

  private:
    std::vector<std::vector<std::string>> groups_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Seed-deterministic text augmentation. `rate` is the fraction of eligible
// tokens modified; Identity returns the input unchanged; the output is never
// empty. External methods delegate to the chat provider and throw
// std::invalid_argument when none is supplied.
std::string paraphrase(std::string_view text, const ParaphraseMethod& method,
                       const SynonymLexicon& lexicon, std::uint64_t seed, double rate,
                       ChatProvider* external_provider = nullptr,
                       const std::string& external_model_id = "");

}  // namespace pmeval
