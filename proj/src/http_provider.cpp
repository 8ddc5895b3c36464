#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "pmeval/provider.hpp"

namespace pmeval {

namespace {

using nlohmann::json;

// Counting semaphore + token bucket guarding a live endpoint.
class RateGate {
  public:
    RateGate(int max_concurrent, double requests_per_second)
        : slots_(max_concurrent),
          rate_(requests_per_second > 0 ? requests_per_second : 1e9),
          tokens_(1.0),
          last_refill_(std::chrono::steady_clock::now()) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [this] { return slots_ > 0; });
        --slots_;
        for (;;) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
            cv_.wait_for(lock, wait);
        }
    }

    void release() {
        const std::lock_guard<std::mutex> lock(mutex_);
        ++slots_;
        cv_.notify_all();
    }

  private:
    void refill() {
        const auto now = std::chrono::steady_clock::now();
        const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
        last_refill_ = now;
        tokens_ = std::min(tokens_ + elapsed * rate_, rate_ + 1.0);
    }

    std::mutex mutex_;
    std::condition_variable cv_;
    int slots_;
    double rate_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
};

struct GateGuard {
    RateGate& gate;
    explicit GateGuard(RateGate& g) : gate(g) { gate.acquire(); }
    ~GateGuard() { gate.release(); }
};

std::string api_key_from_env(const std::string& env_name) {
    const char* v = std::getenv(env_name.c_str());
    return v ? v : "";
}

httplib::Headers auth_headers(const HttpProviderOptions& options) {
    httplib::Headers headers;
    const std::string key = api_key_from_env(options.api_key_env);
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
    return headers;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

// Runs the request with bounded exponential-backoff retries. `send` returns
// the body on success, nullopt on a retryable failure; it throws on permanent
// failures.
template <typename Send>
std::string with_retries(const HttpProviderOptions& options, Send&& send) {
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        if (attempt > 0) {
            const int delay = options.backoff_ms << (attempt - 1);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        std::optional<std::string> body = send(last_error);
        if (body) return *body;
    }
    throw TransportError("request failed after " + std::to_string(options.max_retries + 1) +
                         " attempts: " + last_error);
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed response body: ") + e.what());
    }
}

}  // namespace

struct HttpChatProvider::Impl {
    httplib::Client client;
    RateGate gate;

    Impl(const HttpProviderOptions& options)
        : client(options.base_url), gate(options.max_concurrent, options.requests_per_second) {
        client.set_connection_timeout(options.timeout_sec);
        client.set_read_timeout(options.timeout_sec);
    }
};

HttpChatProvider::HttpChatProvider(HttpProviderOptions options)
    : options_(std::move(options)), impl_(std::make_unique<Impl>(options_)) {}

HttpChatProvider::~HttpChatProvider() = default;

std::string HttpChatProvider::complete(const ChatRequest& request) {
    if (estimate_tokens(request.prompt) > options_.context_limit_tokens)
        throw ContextLimitError("prompt estimate exceeds the context limit of " +
                                std::to_string(options_.context_limit_tokens) + " tokens");

    json payload;
    payload["model"] = request.model_id;
    payload["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
    payload["temperature"] = request.temperature;
    payload["max_tokens"] = request.max_tokens;
    const std::string body = payload.dump();

    return with_retries(options_, [&](std::string& last_error) -> std::optional<std::string> {
        GateGuard guard(impl_->gate);
        httplib::Result res =
            impl_->client.Post(options_.chat_path, auth_headers(options_), body, "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            return std::nullopt;
        }
        if (retryable_status(res->status)) {
            last_error = "http status " + std::to_string(res->status);
            return std::nullopt;
        }
        if (res->status != 200)
            throw TransportError("http status " + std::to_string(res->status) + ": " + res->body);

        const json j = parse_body(res->body);
        if (!j.contains("choices") || j["choices"].empty())
            throw TransportError("response has no choices");
        const json& choice = j["choices"][0];
        std::string text;
        if (choice.contains("message")) text = choice["message"].value("content", "");
        else text = choice.value("text", "");
        if (text.empty()) throw TransportError("response text is empty");
        return text;
    });
}

struct HttpEmbeddingProvider::Impl {
    httplib::Client client;
    RateGate gate;

    Impl(const HttpProviderOptions& options)
        : client(options.base_url), gate(options.max_concurrent, options.requests_per_second) {
        client.set_connection_timeout(options.timeout_sec);
        client.set_read_timeout(options.timeout_sec);
    }
};

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpProviderOptions options, std::string model_id)
    : options_(std::move(options)),
      model_id_(std::move(model_id)),
      impl_(std::make_unique<Impl>(options_)) {}

HttpEmbeddingProvider::~HttpEmbeddingProvider() = default;

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: no input texts");

    json payload;
    payload["model"] = model_id_;
    payload["input"] = texts;
    const std::string body = payload.dump();

    const std::string response =
        with_retries(options_, [&](std::string& last_error) -> std::optional<std::string> {
            GateGuard guard(impl_->gate);
            httplib::Result res = impl_->client.Post(options_.embeddings_path,
                                                     auth_headers(options_), body,
                                                     "application/json");
            if (!res) {
                last_error = "transport: " + httplib::to_string(res.error());
                return std::nullopt;
            }
            if (retryable_status(res->status)) {
                last_error = "http status " + std::to_string(res->status);
                return std::nullopt;
            }
            if (res->status != 200)
                throw TransportError("http status " + std::to_string(res->status) + ": " +
                                     res->body);
            return res->body;
        });

    const json j = parse_body(response);
    if (!j.contains("data")) throw TransportError("embedding response has no data array");
    std::vector<EmbeddingVector> out(texts.size());
    for (const json& item : j["data"]) {
        const std::size_t index = item.value("index", out.size());
        if (index >= out.size()) throw TransportError("embedding index out of range");
        out[index].values = item.value("embedding", std::vector<double>{});
    }
    for (const EmbeddingVector& v : out)
        if (v.values.empty()) throw TransportError("embedding response is incomplete");
    return out;
}

}  // namespace pmeval
