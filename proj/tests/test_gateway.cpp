#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "warrantscore/errors.hpp"
#include "warrantscore/gateway.hpp"
#include "warrantscore/http_backend.hpp"
#include "warrantscore/mock_backend.hpp"

using namespace warrantscore;
using namespace warrantscore::gateway;

namespace {

BackendProfile mock_profile(Role role) {
    BackendProfile profile;
    profile.kind = "mock";
    profile.role = role;
    profile.model = "mock-" + to_string(role);
    return profile;
}

} // namespace

TEST_CASE("mock chat replies are a pure function of role and prompt") {
    MockGateway gw;
    const auto judge = mock_profile(Role::judge);
    const auto generator = mock_profile(Role::generator);
    CHECK(gw.chat_complete(judge, "prompt A") == gw.chat_complete(judge, "prompt A"));
    CHECK(gw.chat_complete(generator, "prompt A") ==
          gw.chat_complete(generator, "prompt A"));
    // same prompt, different role tag -> independent streams
    CHECK(gw.chat_complete(generator, "prompt A") != gw.chat_complete(judge, "prompt A"));
    CHECK(gw.calls() == 6);
}

TEST_CASE("mock judge covers the whole likert scale") {
    MockGateway gw;
    const auto judge = mock_profile(Role::judge);
    bool seen[5] = {false, false, false, false, false};
    for (int i = 0; i < 200; ++i) {
        const std::string reply = gw.chat_complete(judge, "p" + std::to_string(i));
        REQUIRE(reply.size() == 1);
        const int v = reply[0] - '0';
        REQUIRE(v >= 1);
        REQUIRE(v <= 4);
        seen[v] = true;
    }
    CHECK(seen[1]);
    CHECK(seen[2]);
    CHECK(seen[3]);
    CHECK(seen[4]);
}

TEST_CASE("mock embeddings are unit norm, deterministic and order preserving") {
    MockGateway gw;
    auto embedder = mock_profile(Role::embedder);
    embedder.embedding_dimension = 32;
    const std::vector<std::string> texts = {"alpha", "beta", "alpha"};
    const auto vectors = gw.embed(embedder, texts);
    REQUIRE(vectors.size() == 3);
    CHECK(vectors[0].values == vectors[2].values);
    CHECK(vectors[0].values != vectors[1].values);
    for (const auto& v : vectors) {
        REQUIRE(v.values.size() == 32);
        double norm = 0.0;
        for (double x : v.values) norm += x * x;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(gw.embed(embedder, texts)[1].values == vectors[1].values);
}

TEST_CASE("cosine similarity") {
    const std::vector<double> u = {1.0, 2.0, -1.0};
    std::vector<double> neg;
    for (double x : u) neg.push_back(-x);
    CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(u, neg) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
    CHECK(cosine_similarity({1, 0}, {0, 2}) == cosine_similarity({0, 2}, {1, 0}));
    CHECK_THROWS_AS(cosine_similarity({1, 0}, {1, 0, 0}), DataError);
    CHECK_THROWS_AS(cosine_similarity({0, 0}, {1, 0}), DataError);
}

TEST_CASE("binary classification normalizes replies against the labels") {
    struct FixedGateway final : Gateway {
        std::string reply;
        std::optional<int> seen_max_tokens;
        std::string chat_complete(const BackendProfile&, const std::string&,
                                  std::optional<int> max_tokens) override {
            seen_max_tokens = max_tokens;
            return reply;
        }
        std::vector<EmbeddingVector> embed(const BackendProfile&,
                                           const std::vector<std::string>&) override {
            throw DataError("unused");
        }
    } fixed;

    const auto profile = mock_profile(Role::acceptability);
    fixed.reply = "Yes";
    CHECK(classify_binary(fixed, profile, "p"));
    CHECK(fixed.seen_max_tokens == 2); // appendix-style 2-token cap
    fixed.reply = "NO ";
    CHECK(!classify_binary(fixed, profile, "p"));
    fixed.reply = " yes\n";
    CHECK(classify_binary(fixed, profile, "p"));
    fixed.reply = "1";
    CHECK_THROWS_AS(classify_binary(fixed, profile, "p"), ProtocolError);
    fixed.reply = "maybe";
    CHECK_THROWS_AS(classify_binary(fixed, profile, "p"), ProtocolError);
}

TEST_CASE("profile validation") {
    BackendProfile profile = mock_profile(Role::generator);
    CHECK_NOTHROW(validate_profile(profile));
    profile.temperature = -0.1;
    CHECK_THROWS_AS(validate_profile(profile), ConfigError);

    BackendProfile http = mock_profile(Role::generator);
    http.kind = "http";
    CHECK_THROWS_AS(validate_profile(http), ConfigError); // no endpoint
    http.endpoint = "http://localhost:1";
    CHECK_NOTHROW(validate_profile(http));
    http.api_key_env = "WARRANTSCORE_TEST_UNSET_KEY_VAR";
    CHECK_THROWS_AS(validate_profile(http), ConfigError);
}

namespace {

struct StubServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit StubServer(httplib::Server::Handler handler) {
        server.Post("/v1/chat/completions", std::move(handler));
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this]() { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~StubServer() {
        server.stop();
        thread.join();
    }

    BackendProfile profile() {
        BackendProfile p;
        p.kind = "http";
        p.role = Role::generator;
        p.model = "stub-model";
        p.endpoint = "http://127.0.0.1:" + std::to_string(port);
        p.retry.retries = 3;
        p.retry.initial_backoff_ms = 1;
        return p;
    }
};

} // namespace

TEST_CASE("http backend retries 5xx and succeeds") {
    std::atomic<int> hits{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        const int n = ++hits;
        if (n <= 2) {
            res.status = 500;
            return;
        }
        res.set_content(R"({"choices":[{"message":{"content":"recovered"}}]})",
                        "application/json");
    });
    HttpGateway gw;
    CHECK(gw.chat_complete(stub.profile(), "hello") == "recovered");
    CHECK(hits.load() == 3);
}

TEST_CASE("http backend surfaces exhausted retries as a transport error") {
    std::atomic<int> hits{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    auto profile = stub.profile();
    profile.retry.retries = 1;
    HttpGateway gw;
    CHECK_THROWS_AS(gw.chat_complete(profile, "hello"), TransportError);
    CHECK(hits.load() == 2); // first attempt + one retry
}

TEST_CASE("http backend names the endpoint on timeout") {
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(500));
        res.set_content(R"({"choices":[{"message":{"content":"late"}}]})",
                        "application/json");
    });
    auto profile = stub.profile();
    profile.timeout_ms = 50;
    profile.retry.retries = 0;
    HttpGateway gw;
    try {
        gw.chat_complete(profile, "hello");
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(std::string(e.what()).find(profile.endpoint) != std::string::npos);
    }
}

TEST_CASE("http backend formats the chat-completions request") {
    std::string seen_body;
    std::string seen_auth;
    StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
        seen_body = req.body;
        seen_auth = req.get_header_value("Authorization");
        res.set_content(R"({"choices":[{"message":{"content":"ok"}}]})", "application/json");
    });
    setenv("WARRANTSCORE_TEST_KEY", "secret-token", 1);
    auto profile = stub.profile();
    profile.api_key_env = "WARRANTSCORE_TEST_KEY";
    profile.max_output_tokens = 128;
    HttpGateway gw;
    CHECK(gw.chat_complete(profile, "the prompt", 2) == "ok");
    CHECK(seen_auth == "Bearer secret-token");
    const auto body = nlohmann::json::parse(seen_body);
    CHECK(body.at("model") == "stub-model");
    CHECK(body.at("temperature") == 0.0);
    CHECK(body.at("max_tokens") == 2); // per-call override beats the profile
    CHECK(body.at("messages").at(0).at("content") == "the prompt");
}

TEST_CASE("http backend rejects protocol-shaped failures without retry") {
    std::atomic<int> hits{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 404;
    });
    HttpGateway gw;
    CHECK_THROWS_AS(gw.chat_complete(stub.profile(), "x"), ProtocolError);
    CHECK(hits.load() == 1);

    StubServer garbage([&](const httplib::Request&, httplib::Response& res) {
        res.set_content("not json", "text/plain");
    });
    CHECK_THROWS_AS(gw.chat_complete(garbage.profile(), "x"), ProtocolError);
}
