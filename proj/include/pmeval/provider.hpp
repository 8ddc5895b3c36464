#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pmeval {

struct ChatRequest {
    std::string model_id;
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 2000;
};

// Content hash over (model_id, prompt, temperature, max_tokens); independent
// of any serialization of the request.
std::string request_hash(const ChatRequest& request);
std::string embedding_hash(std::string_view model_id, std::string_view text);

// Rough prompt size estimate used against the context limit (~4 chars/token).
std::size_t estimate_tokens(std::string_view text);

struct Transcript {
    std::string request_hash;
    std::string provider_id;
    std::string timestamp;  // ISO-8601 UTC
    ChatRequest request;
    std::string response_text;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::size_t dim() const { return values.size(); }
};

// Permanent failure: the request can never succeed as-is.
class ContextLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Transport-level failure after the retry budget is spent.
class TransportError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class MissingFixtureError : public std::runtime_error {
  public:
    explicit MissingFixtureError(const std::string& hash)
        : std::runtime_error("no recorded transcript for request hash " + hash), hash(hash) {}
    std::string hash;
};

class ChatProvider {
  public:
    virtual ~ChatProvider() = default;
    virtual std::string id() const = 0;
    virtual std::string complete(const ChatRequest& request) = 0;
};

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string id() const = 0;
    // One vector per input, order preserving. Throws on empty input.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

// One JSON file per request hash under a directory; writes are serialized.
class TranscriptStore {
  public:
    explicit TranscriptStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }

    void save(const Transcript& t);
    std::optional<Transcript> load(const std::string& hash) const;
    bool has(const std::string& hash) const;

    void save_embedding(std::string_view model_id, std::string_view text,
                        const EmbeddingVector& vec, std::string_view provider_id);
    std::optional<EmbeddingVector> load_embedding(std::string_view model_id,
                                                  std::string_view text) const;

    std::size_t count() const;

    static constexpr int kSchemaVersion = 1;

  private:
    std::filesystem::path path_for(const std::string& hash) const;

    std::filesystem::path dir_;
    mutable std::mutex write_mutex_;
};

// Serves recorded responses only; unknown hashes raise MissingFixtureError.
class ReplayChatProvider : public ChatProvider {
  public:
    explicit ReplayChatProvider(const TranscriptStore& store) : store_(store) {}
    std::string id() const override { return "replay"; }
    std::string complete(const ChatRequest& request) override;

  private:
    const TranscriptStore& store_;
};

class ReplayEmbeddingProvider : public EmbeddingProvider {
  public:
    ReplayEmbeddingProvider(const TranscriptStore& store, std::string model_id)
        : store_(store), model_id_(std::move(model_id)) {}
    std::string id() const override { return "replay-embed"; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

  private:
    const TranscriptStore& store_;
    std::string model_id_;
};

// Wraps a live provider and persists every response. When skip_existing is
// set, previously recorded requests are answered from the store.
class RecordingChatProvider : public ChatProvider {
  public:
    RecordingChatProvider(ChatProvider& inner, TranscriptStore& store, bool skip_existing = true)
        : inner_(inner), store_(store), skip_existing_(skip_existing) {}
    std::string id() const override { return inner_.id(); }
    std::string complete(const ChatRequest& request) override;

  private:
    ChatProvider& inner_;
    TranscriptStore& store_;
    bool skip_existing_;
};

// Deterministic token-hashing embedder. Carries no semantics; it exists so
// aggregation plumbing can run offline, and reports must label it as such.
class HashingEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit HashingEmbeddingProvider(std::size_t dim = 256) : dim_(dim) {}
    std::string id() const override { return "hash-embed-v1"; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

    std::size_t dim() const { return dim_; }

  private:
    std::size_t dim_;
};

struct HttpProviderOptions {
    std::string base_url = "http://127.0.0.1:8080";
    std::string api_key_env = "PMEVAL_API_KEY";
    std::string chat_path = "/v1/chat/completions";
    std::string embeddings_path = "/v1/embeddings";
    int max_retries = 3;           // attempts = max_retries + 1
    int backoff_ms = 250;          // doubled per retry
    int timeout_sec = 60;
    int max_concurrent = 4;
    double requests_per_second = 2.0;  // token bucket refill rate
    std::size_t context_limit_tokens = 8000;
};

// Chat-completion client for an OpenAI-style HTTP endpoint. Transport errors
// are retried with exponential backoff up to the budget, then surface as
// TransportError; oversized prompts fail fast with ContextLimitError.
class HttpChatProvider : public ChatProvider {
  public:
    explicit HttpChatProvider(HttpProviderOptions options);
    ~HttpChatProvider() override;

    std::string id() const override { return "http:" + options_.base_url; }
    std::string complete(const ChatRequest& request) override;

  private:
    struct Impl;
    HttpProviderOptions options_;
    std::unique_ptr<Impl> impl_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
  public:
    HttpEmbeddingProvider(HttpProviderOptions options, std::string model_id);
    ~HttpEmbeddingProvider() override;

    std::string id() const override { return "http-embed:" + model_id_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

  private:
    struct Impl;
    HttpProviderOptions options_;
    std::string model_id_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pmeval
