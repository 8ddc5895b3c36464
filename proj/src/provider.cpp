#include "pmeval/provider.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "pmeval/sha256.hpp"
#include "pmeval/text.hpp"

namespace pmeval {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Canonical field separator; keeps the hash independent of JSON formatting.
constexpr char kSep = '\x1f';

std::string canonical_temperature(double t) { return fmt_double(t); }

std::string now_utc_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace

std::string request_hash(const ChatRequest& request) {
    std::string preimage = "chat";
    preimage += kSep;
    preimage += request.model_id;
    preimage += kSep;
    preimage += request.prompt;
    preimage += kSep;
    preimage += canonical_temperature(request.temperature);
    preimage += kSep;
    preimage += std::to_string(request.max_tokens);
    return sha256_hex(preimage);
}

std::string embedding_hash(std::string_view model_id, std::string_view text) {
    std::string preimage = "embed";
    preimage += kSep;
    preimage += model_id;
    preimage += kSep;
    preimage += text;
    return sha256_hex(preimage);
}

std::size_t estimate_tokens(std::string_view text) { return text.size() / 4 + 1; }

TranscriptStore::TranscriptStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path TranscriptStore::path_for(const std::string& hash) const {
    return dir_ / (hash + ".json");
}

void TranscriptStore::save(const Transcript& t) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "chat";
    j["request_hash"] = t.request_hash;
    j["provider_id"] = t.provider_id;
    j["timestamp"] = t.timestamp;
    j["request"]["model_id"] = t.request.model_id;
    j["request"]["prompt"] = t.request.prompt;
    j["request"]["temperature"] = t.request.temperature;
    j["request"]["max_tokens"] = t.request.max_tokens;
    j["response_text"] = t.response_text;

    const std::lock_guard<std::mutex> lock(write_mutex_);
    std::ofstream out(path_for(t.request_hash));
    out << j.dump(2) << "\n";
}

std::optional<Transcript> TranscriptStore::load(const std::string& hash) const {
    std::ifstream in(path_for(hash));
    if (!in) return std::nullopt;
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (j.value("kind", "chat") != "chat") return std::nullopt;
    Transcript t;
    t.request_hash = j.value("request_hash", hash);
    t.provider_id = j.value("provider_id", "");
    t.timestamp = j.value("timestamp", "");
    if (j.contains("request")) {
        const json& r = j["request"];
        t.request.model_id = r.value("model_id", "");
        t.request.prompt = r.value("prompt", "");
        t.request.temperature = r.value("temperature", 0.0);
        t.request.max_tokens = r.value("max_tokens", 0);
    }
    t.response_text = j.value("response_text", "");
    return t;
}

bool TranscriptStore::has(const std::string& hash) const {
    return std::filesystem::exists(path_for(hash));
}

void TranscriptStore::save_embedding(std::string_view model_id, std::string_view text,
                                     const EmbeddingVector& vec, std::string_view provider_id) {
    const std::string hash = embedding_hash(model_id, text);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "embedding";
    j["request_hash"] = hash;
    j["provider_id"] = std::string(provider_id);
    j["timestamp"] = now_utc_iso8601();
    j["request"]["model_id"] = std::string(model_id);
    j["request"]["text"] = std::string(text);
    j["response_vector"] = vec.values;

    const std::lock_guard<std::mutex> lock(write_mutex_);
    std::ofstream out(path_for(hash));
    out << j.dump(2) << "\n";
}

std::optional<EmbeddingVector> TranscriptStore::load_embedding(std::string_view model_id,
                                                               std::string_view text) const {
    std::ifstream in(path_for(embedding_hash(model_id, text)));
    if (!in) return std::nullopt;
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (j.value("kind", "") != "embedding") return std::nullopt;
    EmbeddingVector v;
    v.values = j.value("response_vector", std::vector<double>{});
    return v;
}

std::size_t TranscriptStore::count() const {
    std::size_t n = 0;
    if (!std::filesystem::exists(dir_)) return 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir_))
        if (entry.path().extension() == ".json") ++n;
    return n;
}

std::string ReplayChatProvider::complete(const ChatRequest& request) {
    const std::string hash = request_hash(request);
    std::optional<Transcript> t = store_.load(hash);
    if (!t) throw MissingFixtureError(hash);
    return t->response_text;
}

std::vector<EmbeddingVector> ReplayEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: no input texts");
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        std::optional<EmbeddingVector> v = store_.load_embedding(model_id_, text);
        if (!v) throw MissingFixtureError(embedding_hash(model_id_, text));
        if (!out.empty() && v->dim() != out.front().dim())
            throw std::runtime_error("recorded embeddings disagree on dimension (" +
                                     std::to_string(v->dim()) + " vs " +
                                     std::to_string(out.front().dim()) + ")");
        out.push_back(std::move(*v));
    }
    return out;
}

std::string RecordingChatProvider::complete(const ChatRequest& request) {
    const std::string hash = request_hash(request);
    if (skip_existing_) {
        if (std::optional<Transcript> t = store_.load(hash)) return t->response_text;
    }
    Transcript t;
    t.request_hash = hash;
    t.provider_id = inner_.id();
    t.timestamp = now_utc_iso8601();
    t.request = request;
    t.response_text = inner_.complete(request);
    store_.save(t);
    return t.response_text;
}

std::vector<EmbeddingVector> HashingEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: no input texts");
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        EmbeddingVector v;
        v.values.assign(dim_, 0.0);
        // token-count buckets: FNV-1a of the token modulo the dimension
        std::string current;
        auto flush = [&] {
            if (current.empty()) return;
            v.values[fnv1a64(current) % dim_] += 1.0;
            current.clear();
        };
        for (char c : text) {
            const unsigned char u = static_cast<unsigned char>(c);
            if (std::isalnum(u)) current.push_back(static_cast<char>(std::tolower(u)));
            else flush();
        }
        flush();
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace pmeval
