#include "pmeval/similarity.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "pmeval/provider.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

std::string join_tasks(const std::vector<std::string>& tasks) {
    return join(tasks, "\n");
}

void note(std::vector<std::string>* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

std::vector<std::vector<double>> embed_all(EmbeddingProvider& embedder,
                                           const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    for (const EmbeddingVector& v : embedder.embed(texts)) out.push_back(v.values);
    return out;
}

double document_similarity(const std::string& doc_a, const std::string& doc_b,
                           VectorizerKind kind, EmbeddingProvider* embedder) {
    if (kind == VectorizerKind::NonContextual) {
        const TfidfModel model = tfidf_fit({doc_a, doc_b});
        return cosine(tfidf_vectorize(model, doc_a), tfidf_vectorize(model, doc_b));
    }
    if (!embedder)
        throw std::invalid_argument("contextual similarity requires an embedding provider");
    const auto vecs = embed_all(*embedder, {doc_a, doc_b});
    return cosine(vecs[0], vecs[1]);
}

}  // namespace

std::string_view vectorizer_name(VectorizerKind k) {
    return k == VectorizerKind::NonContextual ? "nc" : "c";
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            current.push_back(static_cast<char>(std::tolower(u)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

TfidfModel tfidf_fit(const std::vector<std::string>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("tfidf_fit: corpus is empty");

    TfidfModel model;
    model.doc_count = corpus.size();

    std::map<std::string, std::size_t> df;
    for (const std::string& doc : corpus) {
        std::map<std::string, bool> seen;
        for (const std::string& tok : tokenize(doc)) {
            if (!seen[tok]) {
                seen[tok] = true;
                ++df[tok];
            }
        }
    }

    model.idf.reserve(df.size());
    for (const auto& [term, count] : df) {
        model.vocab.emplace(term, model.idf.size());
        model.idf.push_back(
            std::log((1.0 + static_cast<double>(model.doc_count)) / (1.0 + static_cast<double>(count))) +
            1.0);
    }
    return model;
}

SparseVec tfidf_vectorize(const TfidfModel& model, std::string_view doc) {
    std::map<std::string, std::size_t> tf;
    for (const std::string& tok : tokenize(doc)) ++tf[tok];

    SparseVec vec;
    for (const auto& [term, count] : tf) {
        const auto it = model.vocab.find(term);
        if (it == model.vocab.end()) continue;  // out of vocabulary
        vec[it->second] = static_cast<double>(count) * model.idf[it->second];
    }
    return vec;
}

double cosine(const SparseVec& u, const SparseVec& v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (const auto& [i, x] : u) {
        nu += x * x;
        const auto it = v.find(i);
        if (it != v.end()) dot += x * it->second;
    }
    for (const auto& [i, x] : v) nv += x * x;
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(u.size()) +
                                    " vs " + std::to_string(v.size()) + ")");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double text_similarity(const std::vector<std::string>& extracted_tasks, std::string_view original,
                       VectorizerKind kind, EmbeddingProvider* embedder,
                       std::vector<std::string>* warnings) {
    if (extracted_tasks.empty()) {
        note(warnings, "text_similarity: empty task list, scoring 0");
        return 0.0;
    }
    return document_similarity(join_tasks(extracted_tasks), std::string(original), kind, embedder);
}

double set_similarity(const std::vector<std::string>& tasks_a,
                      const std::vector<std::string>& tasks_b, VectorizerKind kind,
                      EmbeddingProvider* embedder, std::vector<std::string>* warnings) {
    if (tasks_a.empty() || tasks_b.empty()) {
        note(warnings, "set_similarity: empty task set, scoring 0");
        return 0.0;
    }
    return document_similarity(join_tasks(tasks_a), join_tasks(tasks_b), kind, embedder);
}

OverlapCounts set_overlap(const std::vector<std::string>& model_tasks,
                          const std::vector<std::string>& chat_tasks, const OverlapConfig& cfg,
                          EmbeddingProvider* embedder) {
    if (cfg.threshold <= 0.0 || cfg.threshold >= 1.0)
        throw std::invalid_argument("set_overlap: threshold must lie strictly between 0 and 1");

    OverlapCounts counts;
    if (model_tasks.empty() && chat_tasks.empty()) return counts;

    // pairwise similarity matrix
    std::vector<std::vector<double>> sim(model_tasks.size(),
                                         std::vector<double>(chat_tasks.size(), 0.0));
    if (cfg.vectorizer == VectorizerKind::NonContextual) {
        std::vector<std::string> corpus;
        corpus.insert(corpus.end(), model_tasks.begin(), model_tasks.end());
        corpus.insert(corpus.end(), chat_tasks.begin(), chat_tasks.end());
        const TfidfModel model = tfidf_fit(corpus);
        std::vector<SparseVec> mv, cv;
        for (const std::string& t : model_tasks) mv.push_back(tfidf_vectorize(model, t));
        for (const std::string& t : chat_tasks) cv.push_back(tfidf_vectorize(model, t));
        for (std::size_t i = 0; i < mv.size(); ++i)
            for (std::size_t j = 0; j < cv.size(); ++j) sim[i][j] = cosine(mv[i], cv[j]);
    } else {
        if (!embedder)
            throw std::invalid_argument("contextual overlap requires an embedding provider");
        const auto mv = embed_all(*embedder, model_tasks);
        const auto cv = embed_all(*embedder, chat_tasks);
        for (std::size_t i = 0; i < mv.size(); ++i)
            for (std::size_t j = 0; j < cv.size(); ++j) sim[i][j] = cosine(mv[i], cv[j]);
    }

    for (std::size_t i = 0; i < model_tasks.size(); ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < chat_tasks.size(); ++j) best = std::max(best, sim[i][j]);
        if (best > cfg.threshold) ++counts.common_model;
        else ++counts.only_model;
    }
    for (std::size_t j = 0; j < chat_tasks.size(); ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < model_tasks.size(); ++i) best = std::max(best, sim[i][j]);
        if (best > cfg.threshold) ++counts.common_chat;
        else ++counts.only_chat;
    }
    return counts;
}

}  // namespace pmeval
