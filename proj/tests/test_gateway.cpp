#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "wikigap/gateway.hpp"
#include "wikigap/gateway_http.hpp"
#include "wikigap/gateway_mock.hpp"
#include "wikigap/gateway_replay.hpp"

using namespace wikigap;
using gateway::Direction;
using gateway::ProfileId;
using gateway::Vector;
using nlohmann::json;

namespace {

Vector vec(std::vector<double> comps, ProfileId profile = ProfileId::TitleMap) {
    return Vector{std::move(comps), profile};
}

std::map<ProfileId, int> test_dims() {
    return {{ProfileId::TitleMap, 4},
            {ProfileId::ContentMap, 4},
            {ProfileId::Augment, 4},
            {ProfileId::RagIndex, 4}};
}

}  // namespace

TEST_CASE("cosine similarity identities") {
    Vector v = vec({0.3, -0.2, 0.9, 0.1});
    CHECK(gateway::cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-9));

    Vector ex = vec({1, 0, 0, 0});
    Vector ey = vec({0, 1, 0, 0});
    CHECK(gateway::cosine_similarity(ex, ey) == doctest::Approx(0.0));

    Vector diag = vec({1, 1, 0, 0});
    CHECK(gateway::cosine_similarity(ex, diag) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("cosine similarity is symmetric and scale-invariant") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(4), b(4);
        for (auto& x : a) x = dist(rng);
        for (auto& x : b) x = dist(rng);
        Vector va = vec(a), vb = vec(b);
        double sim = gateway::cosine_similarity(va, vb);
        CHECK(gateway::cosine_similarity(vb, va) == doctest::Approx(sim).epsilon(1e-12));
        double lambda = scale(rng);
        std::vector<double> scaled(4);
        for (int i = 0; i < 4; ++i) scaled[i] = lambda * a[i];
        CHECK(gateway::cosine_similarity(vec(scaled), vb) ==
              doctest::Approx(sim).epsilon(1e-9));
    }
}

TEST_CASE("cosine similarity rejects bad inputs") {
    CHECK_THROWS_AS(gateway::cosine_similarity(vec({0, 0, 0, 0}), vec({1, 0, 0, 0})),
                    ZeroVectorError);
    CHECK_THROWS_AS(gateway::cosine_similarity(vec({1, 0}), vec({1, 0, 0, 0})),
                    DimensionMismatchError);
    CHECK_THROWS_AS(gateway::cosine_similarity(vec({1, 0, 0, 0}, ProfileId::TitleMap),
                                               vec({1, 0, 0, 0}, ProfileId::ContentMap)),
                    DimensionMismatchError);
}

TEST_CASE("hashing embedder honors the shape contract") {
    gateway::HashingEmbedder embedder(test_dims());
    auto out = embedder.embed({"a"}, ProfileId::TitleMap);
    REQUIRE(out.size() == 1);
    CHECK(out[0].components.size() == 4);

    CHECK(embedder.embed({}, ProfileId::TitleMap).empty());
    CHECK_THROWS_AS(embedder.embed({""}, ProfileId::TitleMap), InvalidParamsError);
}

TEST_CASE("hashing embedder batches preserve order and cardinality") {
    gateway::HashingEmbedder embedder(test_dims());
    std::vector<std::string> texts = {"alpha beta", "gamma", "alpha beta", "delta epsilon zeta"};
    auto batch = embedder.embed(texts, ProfileId::RagIndex);
    REQUIRE(batch.size() == texts.size());
    for (size_t i = 0; i < texts.size(); ++i) {
        auto single = embedder.embed({texts[i]}, ProfileId::RagIndex);
        CHECK(batch[i].components == single[0].components);
    }
}

TEST_CASE("hashing embedder never returns a zero vector") {
    gateway::HashingEmbedder embedder(test_dims());
    for (const char* t : {"...", "!!", "a", "शब्द"}) {
        auto v = embedder.embed({t}, ProfileId::Augment);
        CHECK(gateway::norm(v[0]) > 0.0);
    }
}

TEST_CASE("table translator uses the table and the marker fallback") {
    gateway::TableTranslator tr;
    tr.set(Direction::HrlToLrl, "hello", "नमस्ते");
    CHECK(tr.translate("hello", Direction::HrlToLrl) == "नमस्ते");

    std::string marked = tr.translate("two words", Direction::HrlToLrl);
    CHECK(marked != "two words");
    CHECK(tr.translate(marked, Direction::LrlToHrl) == "two words");

    CHECK_THROWS_AS(tr.translate("", Direction::HrlToLrl), InvalidParamsError);

    tr.set(Direction::HrlToLrl, "bad", "");
    CHECK_THROWS_AS(tr.translate("bad", Direction::HrlToLrl), EmptyTranslationError);
}

TEST_CASE("identity round-trip through the marker transform") {
    gateway::TableTranslator tr;
    std::string input = "The quick brown fox jumps.";
    std::string there = tr.translate(input, Direction::HrlToLrl);
    CHECK(tr.translate(there, Direction::LrlToHrl) == input);
}

TEST_CASE("scripted generator returns canned strings and counts calls") {
    gateway::ScriptedGenerator gen({"first", "second"});
    gateway::GenerationRequest req{"prompt", 16, 0.0};
    CHECK(gen.generate(req) == "first");
    CHECK(gen.generate(req) == "second");
    CHECK(gen.generate(req) == "second");  // repeats the last
    CHECK(gen.calls() == 3);
}

TEST_CASE("mock generator enforces the prompt limit") {
    gateway::MockGenerator gen(16);
    gateway::GenerationRequest req;
    req.prompt = std::string(17, 'x');
    CHECK_THROWS_AS(gen.generate(req), TokenLimitError);
}

TEST_CASE("mock generator is deterministic at temperature zero") {
    gateway::MockGenerator gen;
    gateway::GenerationRequest req{"any fixed prompt", 32, 0.0};
    std::string first = gen.generate(req);
    for (int i = 0; i < 5; ++i) CHECK(gen.generate(req) == first);
}

// --- HTTP clients against an in-process service -------------------------------

namespace {

struct TestService {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> embed_failures{0};  // serve this many 500s first

    TestService() {
        server.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
            if (embed_failures.fetch_sub(1) > 0) {
                res.status = 500;
                return;
            }
            json body = json::parse(req.body);
            json vectors = json::array();
            for (const auto& t : body["texts"]) {
                double h = static_cast<double>(t.get<std::string>().size());
                vectors.push_back({h, 1.0, 0.0, 0.0});
            }
            res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
        });
        server.Post("/narrow/embed", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(json{{"vectors", {{1.0, 2.0}}}}.dump(), "application/json");
        });
        server.Post("/translate", [](const httplib::Request& req, httplib::Response& res) {
            json body = json::parse(req.body);
            std::string text = body["text"];
            res.set_content(json{{"translation", "[t]" + text}}.dump(), "application/json");
        });
        server.Post("/generate", [](const httplib::Request& req, httplib::Response& res) {
            json body = json::parse(req.body);
            std::string prompt = body["prompt"];
            if (prompt.size() > 256) {
                res.status = 413;
                return;
            }
            res.set_content(json{{"completion", "done:" + std::to_string(prompt.size())}}.dump(),
                            "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~TestService() {
        server.stop();
        thread.join();
    }

    std::string endpoint(const std::string& path = "") const {
        return "http://127.0.0.1:" + std::to_string(port) + path;
    }
};

gateway::HttpOptions fast_retry() {
    gateway::HttpOptions opts;
    opts.retry = {3, 1};
    return opts;
}

}  // namespace

TEST_CASE("http embedding client round-trips and validates width") {
    TestService svc;
    std::map<ProfileId, gateway::EmbeddingProfile> profiles = {
        {ProfileId::TitleMap, {ProfileId::TitleMap, svc.endpoint(), 4}},
        {ProfileId::ContentMap, {ProfileId::ContentMap, svc.endpoint("/narrow"), 4}},
    };
    gateway::HttpEmbeddingClient client(profiles, fast_retry());

    auto out = client.embed({"ab", "cdef"}, ProfileId::TitleMap);
    REQUIRE(out.size() == 2);
    CHECK(out[0].components[0] == doctest::Approx(2.0));
    CHECK(out[1].components[0] == doctest::Approx(4.0));

    // service configured to return width 2 against a dimension-4 profile
    CHECK_THROWS_AS(client.embed({"x"}, ProfileId::ContentMap), DimensionMismatchError);
}

TEST_CASE("http embedding client retries 5xx then succeeds") {
    TestService svc;
    svc.embed_failures = 2;  // two 500s, third attempt lands
    std::map<ProfileId, gateway::EmbeddingProfile> profiles = {
        {ProfileId::TitleMap, {ProfileId::TitleMap, svc.endpoint(), 4}},
    };
    gateway::HttpEmbeddingClient client(profiles, fast_retry());
    CHECK(client.embed({"abc"}, ProfileId::TitleMap).size() == 1);

    svc.embed_failures = 99;  // always failing exhausts the retry budget
    CHECK_THROWS_AS(client.embed({"abc"}, ProfileId::TitleMap), RemoteError);
}

TEST_CASE("http clients for translate and generate") {
    TestService svc;
    gateway::HttpTranslationClient tr(svc.endpoint(), fast_retry());
    CHECK(tr.translate("hi", Direction::LrlToHrl) == "[t]hi");

    gateway::HttpGenerationClient gen(svc.endpoint(), fast_retry());
    gateway::GenerationRequest req{"hello", 16, 0.0};
    CHECK(gen.generate(req) == "done:5");

    req.prompt = std::string(300, 'p');
    CHECK_THROWS_AS(gen.generate(req), TokenLimitError);
}

TEST_CASE("unreachable service raises RemoteError after retries") {
    gateway::HttpTranslationClient tr("http://127.0.0.1:1", fast_retry());
    CHECK_THROWS_AS(tr.translate("x", Direction::LrlToHrl), RemoteError);
}

// --- record / replay -----------------------------------------------------------

TEST_CASE("recorded traffic replays byte-identically and offline") {
    namespace fs = std::filesystem;
    fs::path log = fs::temp_directory_path() / "wikigap_replay_test.jsonl";
    fs::remove(log);

    auto base = gateway::make_mock_gateway(test_dims());
    auto recording = gateway::make_recording_gateway(base, log.string());

    auto vec1 = recording.embeddings->embed({"alpha beta", "gamma"}, ProfileId::TitleMap);
    std::string tr1 = recording.translator->translate("some text", Direction::HrlToLrl);
    gateway::GenerationRequest req{"a prompt", 8, 0.0};
    std::string gen1 = recording.generator->generate(req);

    auto replay = gateway::make_replay_gateway(log.string());
    auto vec2 = replay.embeddings->embed({"alpha beta", "gamma"}, ProfileId::TitleMap);
    REQUIRE(vec2.size() == vec1.size());
    for (size_t i = 0; i < vec1.size(); ++i) CHECK(vec2[i].components == vec1[i].components);
    CHECK(replay.translator->translate("some text", Direction::HrlToLrl) == tr1);
    CHECK(replay.generator->generate(req) == gen1);

    // unrecorded requests surface as typed errors
    CHECK_THROWS_AS(replay.translator->translate("never seen", Direction::HrlToLrl), RemoteError);
    fs::remove(log);
}
