#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmeval {

class EmbeddingProvider;

enum class VectorizerKind { NonContextual, Contextual };

std::string_view vectorizer_name(VectorizerKind k);  // "nc" / "c"

// Lowercase, split on non-alphanumerics, drop empties.
std::vector<std::string> tokenize(std::string_view text);

// tf * idf with smoothed idf = ln((1+N)/(1+df)) + 1 over the fit corpus.
struct TfidfModel {
    std::map<std::string, std::size_t> vocab;  // term -> dimension
    std::vector<double> idf;
    std::size_t doc_count = 0;
};

using SparseVec = std::map<std::size_t, double>;

// Throws std::invalid_argument on an empty corpus.
TfidfModel tfidf_fit(const std::vector<std::string>& corpus);
// Out-of-vocabulary terms are ignored.
SparseVec tfidf_vectorize(const TfidfModel& model, std::string_view doc);

// u.v / (|u||v|); 0 when either norm is 0.
double cosine(const SparseVec& u, const SparseVec& v);
// Dense variant; throws std::invalid_argument on dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

// KPI1/KPI4: extracted tasks (joined to one document) against the original
// description. NonContextual fits tf-idf on exactly the two documents.
// An empty task list scores 0 and records a warning.
double text_similarity(const std::vector<std::string>& extracted_tasks, std::string_view original,
                       VectorizerKind kind, EmbeddingProvider* embedder = nullptr,
                       std::vector<std::string>* warnings = nullptr);

// KPI2/KPI5: both task sets joined to one document each, then cosine.
// Symmetric in its arguments.
double set_similarity(const std::vector<std::string>& tasks_a,
                      const std::vector<std::string>& tasks_b, VectorizerKind kind,
                      EmbeddingProvider* embedder = nullptr,
                      std::vector<std::string>* warnings = nullptr);

struct OverlapConfig {
    double threshold = 0.3;  // strictly between 0 and 1
    VectorizerKind vectorizer = VectorizerKind::NonContextual;
};

// KPI3/KPI6 tallies. common_model + only_model = |model task set| and
// common_chat + only_chat = |chat task set|.
struct OverlapCounts {
    std::size_t common_model = 0;
    std::size_t common_chat = 0;
    std::size_t only_model = 0;
    std::size_t only_chat = 0;
};

// Directional matching: a task is common when its best similarity against the
// other side exceeds the threshold (many-to-one matches allowed, so
// common_model and common_chat may differ). NonContextual pair similarities
// use a tf-idf model fit on all tasks from both sides, one task per document.
OverlapCounts set_overlap(const std::vector<std::string>& model_tasks,
                          const std::vector<std::string>& chat_tasks, const OverlapConfig& cfg,
                          EmbeddingProvider* embedder = nullptr);

}  // namespace pmeval
