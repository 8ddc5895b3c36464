#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "pmeval/provider.hpp"
#include "pmeval/sha256.hpp"
#include "pmeval/text.hpp"

using namespace pmeval;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pmeval_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("request hash depends on fields, not serialization") {
    ChatRequest a{"gpt-4", "hello world", 0.0, 2000};
    const std::string h = request_hash(a);

    // a JSON round trip with different whitespace must not change the hash
    nlohmann::json j;
    j["model_id"] = a.model_id;
    j["prompt"] = a.prompt;
    j["temperature"] = a.temperature;
    j["max_tokens"] = a.max_tokens;
    const std::string pretty = j.dump(4);
    const nlohmann::json back = nlohmann::json::parse(pretty);
    ChatRequest b{back["model_id"], back["prompt"], back["temperature"], back["max_tokens"]};
    CHECK(request_hash(b) == h);

    b.prompt = "hello  world";  // whitespace inside the prompt DOES matter
    CHECK(request_hash(b) != h);
    b = a;
    b.temperature = 0.5;
    CHECK(request_hash(b) != h);
    b = a;
    b.max_tokens = 100;
    CHECK(request_hash(b) != h);
}

TEST_CASE("transcript store round-trips and replays bit-identically") {
    TempDir tmp;
    TranscriptStore store(tmp.path);

    Transcript t;
    t.request = ChatRequest{"gpt-4", "what are the tasks?", 0.0, 512};
    t.request_hash = request_hash(t.request);
    t.provider_id = "test";
    t.timestamp = "2024-01-01T00:00:00Z";
    t.response_text = "1. pay bill\n2. archive invoice\n";
    store.save(t);

    CHECK(store.count() == 1);
    CHECK(store.has(t.request_hash));

    ReplayChatProvider replay(store);
    CHECK(replay.complete(t.request) == t.response_text);
    CHECK(replay.complete(t.request) == t.response_text);
}

TEST_CASE("replay provider raises MissingFixtureError naming the hash") {
    TempDir tmp;
    TranscriptStore store(tmp.path);
    ReplayChatProvider replay(store);
    const ChatRequest unknown{"gpt-4", "never recorded", 0.0, 16};
    try {
        replay.complete(unknown);
        FAIL("expected MissingFixtureError");
    } catch (const MissingFixtureError& e) {
        CHECK(e.hash == request_hash(unknown));
        CHECK(std::string(e.what()).find(e.hash) != std::string::npos);
    }
}

TEST_CASE("recording provider persists responses and can skip existing ones") {
    TempDir tmp;
    TranscriptStore store(tmp.path);

    class Counting : public ChatProvider {
      public:
        std::string id() const override { return "counting"; }
        std::string complete(const ChatRequest&) override {
            ++calls;
            return "reply " + std::to_string(calls);
        }
        int calls = 0;
    } inner;

    RecordingChatProvider recording(inner, store);
    const ChatRequest request{"m", "p", 0.0, 8};
    CHECK(recording.complete(request) == "reply 1");
    CHECK(recording.complete(request) == "reply 1");  // served from the store
    CHECK(inner.calls == 1);

    ReplayChatProvider replay(store);
    CHECK(replay.complete(request) == "reply 1");
}

TEST_CASE("transcript store writes are safe under concurrency") {
    TempDir tmp;
    TranscriptStore store(tmp.path);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&store, t] {
            for (int i = 0; i < 25; ++i) {
                Transcript tr;
                tr.request = ChatRequest{"m", "prompt " + std::to_string(t * 25 + i), 0.0, 8};
                tr.request_hash = request_hash(tr.request);
                tr.provider_id = "test";
                tr.timestamp = "2024-01-01T00:00:00Z";
                tr.response_text = "r";
                store.save(tr);
            }
        });
    }
    for (std::thread& t : pool) t.join();
    CHECK(store.count() == 100);
}

TEST_CASE("hashing embedder is deterministic with cosine in [0,1]") {
    HashingEmbeddingProvider embedder;
    const auto a = embedder.embed({"check the hardware"});
    const auto b = embedder.embed({"check the hardware"});
    REQUIRE(a.size() == 1);
    CHECK(a[0].values == b[0].values);
    CHECK(a[0].dim() == embedder.dim());

    // identical texts -> cosine exactly 1
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a[0].values.size(); ++i) {
        dot += a[0].values[i] * b[0].values[i];
        na += a[0].values[i] * a[0].values[i];
        nb += b[0].values[i] * b[0].values[i];
    }
    CHECK(dot / (std::sqrt(na) * std::sqrt(nb)) == doctest::Approx(1.0));

    // the published scheme: token counts bucketed by fnv1a64(token) % dim
    const auto c = embedder.embed({"pay bill pay"});
    std::vector<double> want(embedder.dim(), 0.0);
    want[fnv1a64("pay") % embedder.dim()] += 2.0;
    want[fnv1a64("bill") % embedder.dim()] += 1.0;
    CHECK(c[0].values == want);

    CHECK_THROWS_AS(embedder.embed({}), std::invalid_argument);
}

TEST_CASE("embedding transcripts replay through the store") {
    TempDir tmp;
    TranscriptStore store(tmp.path);
    HashingEmbeddingProvider hasher;
    const auto vecs = hasher.embed({"alpha", "beta"});
    store.save_embedding("embed-model", "alpha", vecs[0], hasher.id());
    store.save_embedding("embed-model", "beta", vecs[1], hasher.id());

    ReplayEmbeddingProvider replay(store, "embed-model");
    const auto back = replay.embed({"alpha", "beta"});
    CHECK(back[0].values == vecs[0].values);
    CHECK(back[1].values == vecs[1].values);
    CHECK_THROWS_AS(replay.embed({"gamma"}), MissingFixtureError);
}

TEST_CASE("live provider: success, retry on 500, and retry exhaustion") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        const int n = ++hits;
        if (n <= 2) {
            res.status = 500;
            res.set_content("burp", "text/plain");
            return;
        }
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json out;
        out["choices"] = nlohmann::json::array(
            {{{"message", {{"content", "echo: " + body["messages"][0]["content"].get<std::string>()}}}}});
        res.set_content(out.dump(), "application/json");
    });

    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpProviderOptions options;
    options.base_url = "http://127.0.0.1:" + std::to_string(port);
    options.max_retries = 3;
    options.backoff_ms = 1;
    HttpChatProvider provider(options);
    CHECK(provider.complete(ChatRequest{"m", "ping", 0.0, 16}) == "echo: ping");
    CHECK(hits == 3);  // two 500s then success

    server.stop();
    server_thread.join();

    // unreachable endpoint: bounded retries, then TransportError
    HttpProviderOptions dead;
    dead.base_url = "http://127.0.0.1:1";
    dead.max_retries = 2;
    dead.backoff_ms = 1;
    dead.timeout_sec = 1;
    HttpChatProvider unreachable(dead);
    CHECK_THROWS_WITH_AS(unreachable.complete(ChatRequest{"m", "ping", 0.0, 16}),
                         doctest::Contains("3 attempts"), TransportError);
}

TEST_CASE("live embedding provider round-trips through a stub endpoint") {
    httplib::Server server;
    server.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json out;
        out["data"] = nlohmann::json::array();
        int index = 0;
        for (const auto& text : body["input"]) {
            const double len = static_cast<double>(text.get<std::string>().size());
            out["data"].push_back({{"index", index++}, {"embedding", {len, 1.0, 0.0}}});
        }
        res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpProviderOptions options;
    options.base_url = "http://127.0.0.1:" + std::to_string(port);
    options.backoff_ms = 1;
    HttpEmbeddingProvider provider(options, "embed-small");
    const auto vecs = provider.embed({"ab", "defg"});
    REQUIRE(vecs.size() == 2);
    CHECK(vecs[0].values == std::vector<double>{2.0, 1.0, 0.0});
    CHECK(vecs[1].values == std::vector<double>{4.0, 1.0, 0.0});

    server.stop();
    server_thread.join();
}

TEST_CASE("context-limit violations fail fast and permanently") {
    HttpProviderOptions options;
    options.base_url = "http://127.0.0.1:1";
    options.context_limit_tokens = 10;
    HttpChatProvider provider(options);
    const std::string big(1000, 'x');
    CHECK_THROWS_AS(provider.complete(ChatRequest{"m", big, 0.0, 16}), ContextLimitError);
}

TEST_CASE("token estimate tracks byte length") {
    CHECK(estimate_tokens("") == 1);
    CHECK(estimate_tokens(std::string(400, 'a')) == 101);
}
