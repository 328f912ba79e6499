#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "wikigap/gateway_mock.hpp"
#include "wikigap/rag.hpp"

using namespace wikigap;
using gateway::ProfileId;
using ingest::BookDocument;
using rag::Chunk;
using rag::VectorIndex;

namespace {

BookDocument doc_of(std::string text) {
    BookDocument d;
    d.article_id = "Q1";
    d.source_uri = "test";
    d.text = std::move(text);
    return d;
}

std::map<ProfileId, int> dims(int n = 2) {
    return {{ProfileId::TitleMap, n},
            {ProfileId::ContentMap, n},
            {ProfileId::Augment, n},
            {ProfileId::RagIndex, n}};
}

std::string random_document(std::mt19937& rng, int min_len = 120, int max_len = 2000) {
    std::uniform_int_distribution<int> len_dist(min_len, max_len);
    std::uniform_int_distribution<int> word_len(1, 12);
    std::uniform_int_distribution<int> kind(0, 99);
    int target = len_dist(rng);
    std::string out;
    while (static_cast<int>(out.size()) < target) {
        int wl = word_len(rng);
        for (int i = 0; i < wl; ++i) {
            out.push_back(static_cast<char>('a' + (rng() % 26)));
        }
        int k = kind(rng);
        if (k < 4) out += "\n\n";
        else if (k < 10) out += "\n";
        else if (k < 25) out += ". ";
        else out.push_back(' ');
    }
    return out;
}

// chunk-level greedy MMR with its own arithmetic, independent of the library path
std::vector<int> mmr_oracle(const std::vector<std::vector<double>>& chunk_vecs,
                            const std::vector<double>& query_vec, int k, double lambda) {
    auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0, na = 0, nb = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        return dot / (std::sqrt(na) * std::sqrt(nb));
    };
    std::vector<int> selected;
    std::vector<bool> used(chunk_vecs.size(), false);
    int want = std::min<int>(k, static_cast<int>(chunk_vecs.size()));
    while (static_cast<int>(selected.size()) < want) {
        int best = -1;
        double best_score = 0;
        for (int i = 0; i < static_cast<int>(chunk_vecs.size()); ++i) {
            if (used[i]) continue;
            double score;
            if (selected.empty()) {
                score = cosine(chunk_vecs[i], query_vec);
            } else {
                double max_sel = -2;
                for (int s : selected) {
                    max_sel = std::max(max_sel, cosine(chunk_vecs[i], chunk_vecs[s]));
                }
                score = lambda * cosine(chunk_vecs[i], query_vec) - (1 - lambda) * max_sel;
            }
            if (best < 0 || score > best_score) {
                best = i;
                best_score = score;
            }
        }
        used[best] = true;
        selected.push_back(best);
    }
    return selected;
}

std::vector<Chunk> word_chunks(const std::vector<std::string>& words) {
    std::vector<Chunk> chunks;
    size_t offset = 0;
    for (size_t i = 0; i < words.size(); ++i) {
        Chunk c;
        c.id = static_cast<int>(i);
        c.text = words[i];
        c.char_start = offset;
        c.char_end = offset + words[i].size();
        offset = c.char_end;
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace

TEST_CASE("a short text becomes a single chunk equal to the text") {
    auto chunks = rag::split_chunks(doc_of("short text"), 100, 0);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].text == "short text");
    CHECK(chunks[0].char_start == 0);
    CHECK(chunks[0].char_end == 10);
}

TEST_CASE("paragraph document with zero overlap reconstructs exactly") {
    std::string text;
    for (int p = 0; p < 5; ++p) {
        text += "Paragraph number " + std::to_string(p) + " with enough filler words to matter";
        if (p != 4) text += "\n\n";
    }
    REQUIRE(text.size() >= 250);
    auto chunks = rag::split_chunks(doc_of(text), 100, 0);
    CHECK(chunks.size() > 1);
    std::string rebuilt;
    for (const auto& c : chunks) {
        CHECK(c.text.size() <= 100);
        rebuilt += c.text;
    }
    CHECK(rebuilt == text);
}

TEST_CASE("unbroken string chunks at stride size - overlap") {
    std::string text(200, 'x');
    auto chunks = rag::split_chunks(doc_of(text), 50, 10);
    REQUIRE(chunks.size() == 5);
    size_t expected_starts[] = {0, 40, 80, 120, 160};
    for (size_t i = 0; i < chunks.size(); ++i) {
        CHECK(chunks[i].char_start == expected_starts[i]);
        CHECK(chunks[i].text.size() <= 50);
    }
    CHECK(chunks.back().char_end == 200);
}

TEST_CASE("chunk offsets are exact slices of the source") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::string text = random_document(rng);
        int size = 40 + static_cast<int>(rng() % 200);
        int overlap = static_cast<int>(rng() % (size / 2));
        auto chunks = rag::split_chunks(doc_of(text), size, overlap);
        REQUIRE(!chunks.empty());
        CHECK(chunks.front().char_start == 0);
        CHECK(chunks.back().char_end == text.size());
        for (size_t i = 0; i < chunks.size(); ++i) {
            const auto& c = chunks[i];
            CHECK(c.text ==
                  text.substr(c.char_start, c.char_end - c.char_start));
            CHECK(c.text.size() <= static_cast<size_t>(size));
            if (i > 0) {
                size_t prev_end = chunks[i - 1].char_end;
                size_t expected =
                    prev_end > static_cast<size_t>(overlap) ? prev_end - overlap : 0;
                CHECK(c.char_start == expected);
            }
        }
    }
}

TEST_CASE("zero-overlap chunking reconstructs random documents byte for byte") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::string text = random_document(rng);
        int size = 50 + static_cast<int>(rng() % 300);
        auto chunks = rag::split_chunks(doc_of(text), size, 0);
        std::string rebuilt;
        for (const auto& c : chunks) rebuilt += c.text;
        CHECK(rebuilt == text);
    }
}

TEST_CASE("split_chunks rejects invalid parameters") {
    CHECK_THROWS_AS(rag::split_chunks(doc_of("abc"), 0, 0), InvalidParamsError);
    CHECK_THROWS_AS(rag::split_chunks(doc_of("abc"), 10, 10), InvalidParamsError);
    CHECK_THROWS_AS(rag::split_chunks(doc_of("abc"), 10, -1), InvalidParamsError);
    CHECK_THROWS_AS(rag::split_chunks(doc_of(""), 10, 0), InvalidParamsError);
}

TEST_CASE("index of one chunk answers every query with it") {
    gateway::HashingEmbedder embedder(dims(8));
    auto index = VectorIndex::build(word_chunks({"only chunk text"}), embedder);
    CHECK(index.size() == 1);
    auto q = embedder.embed({"whatever query"}, ProfileId::RagIndex)[0];
    auto top = index.top_k(q, 3);
    REQUIRE(top.size() == 1);
    CHECK(top[0].first == 0);
}

TEST_CASE("duplicate chunk texts stay distinct in the index") {
    gateway::HashingEmbedder embedder(dims(8));
    auto index = VectorIndex::build(word_chunks({"same words", "same words"}), embedder);
    CHECK(index.size() == 2);
    CHECK(index.chunk_by_id(0).text == index.chunk_by_id(1).text);
    CHECK(index.chunk_by_id(0).id != index.chunk_by_id(1).id);
}

TEST_CASE("index top-1 equals an independent linear scan over 100 random chunks") {
    std::mt19937 rng(5);
    std::vector<std::string> texts;
    for (int i = 0; i < 100; ++i) {
        texts.push_back(random_document(rng, 20, 60));
    }
    gateway::HashingEmbedder embedder(dims(16));
    auto index = VectorIndex::build(word_chunks(texts), embedder);

    for (const char* query : {"alpha beta gamma", "some words qqq", "zzz yyy"}) {
        auto qv = embedder.embed({query}, ProfileId::RagIndex)[0];
        auto top = index.top_k(qv, 1);
        REQUIRE(top.size() == 1);

        int best = -1;
        double best_sim = -2;
        for (int i = 0; i < 100; ++i) {
            auto cv = embedder.embed({texts[i]}, ProfileId::RagIndex)[0];
            double sim = gateway::cosine_similarity(qv, cv);
            if (sim > best_sim) {
                best_sim = sim;
                best = i;
            }
        }
        CHECK(top[0].first == best);
        CHECK(top[0].second == doctest::Approx(best_sim).epsilon(1e-12));
    }
}

TEST_CASE("an index with one chunk is a forced MMR selection") {
    gateway::HashingEmbedder embedder(dims(8));
    auto index = VectorIndex::build(word_chunks({"lone chunk"}), embedder);
    for (double lambda : {0.0, 0.5, 1.0}) {
        auto out = rag::mmr_retrieve(index, "query", 3, lambda, embedder);
        REQUIRE(out.size() == 1);
        CHECK(out[0].first.id == 0);
    }
}

TEST_CASE("hand-set six-vector MMR matches the brute-force oracle") {
    auto embedder = std::make_shared<gateway::TableEmbedder>(dims(2));
    std::vector<std::vector<double>> vecs = {
        {0.95, std::sqrt(1 - 0.95 * 0.95)}, {0.9, std::sqrt(1 - 0.81)},
        {0.85, std::sqrt(1 - 0.7225)},      {0.5, std::sqrt(0.75)},
        {0.1, std::sqrt(0.99)},             {-0.2, std::sqrt(0.96)},
    };
    std::vector<std::string> texts;
    for (int i = 0; i < 6; ++i) {
        texts.push_back("chunk " + std::to_string(i));
        embedder->set(ProfileId::RagIndex, texts.back(), vecs[i]);
    }
    embedder->set(ProfileId::RagIndex, "the query", {1.0, 0.0});

    auto index = VectorIndex::build(word_chunks(texts), *embedder);
    auto out = rag::mmr_retrieve(index, "the query", 3, 0.5, *embedder);
    auto expected = mmr_oracle(vecs, {1.0, 0.0}, 3, 0.5);
    REQUIRE(out.size() == 3);
    CHECK(out[0].first.id == 0);  // first pick is the pure query argmax
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i].first.id == expected[i]);
}

TEST_CASE("random MMR instances match the oracle and deduplicate ids") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);
    gateway::TableEmbedder embedder(dims(3));

    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 9);
        int k = 1 + static_cast<int>(rng() % 4);
        double lambda = std::vector<double>{0.0, 0.3, 0.5, 1.0}[rng() % 4];

        std::vector<std::vector<double>> vecs;
        std::vector<std::string> texts;
        for (int i = 0; i < n; ++i) {
            std::vector<double> v = {comp(rng), comp(rng), comp(rng)};
            if (std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]) < 1e-6) v[0] = 1.0;
            vecs.push_back(v);
            texts.push_back("t" + std::to_string(trial) + "_" + std::to_string(i));
            embedder.set(ProfileId::RagIndex, texts.back(), v);
        }
        std::string query = "q" + std::to_string(trial);
        std::vector<double> qv = {comp(rng), comp(rng), comp(rng)};
        if (std::abs(qv[0]) + std::abs(qv[1]) + std::abs(qv[2]) < 1e-6) qv[0] = 1.0;
        embedder.set(ProfileId::RagIndex, query, qv);

        auto index = VectorIndex::build(word_chunks(texts), embedder);
        auto out = rag::mmr_retrieve(index, query, k, lambda, embedder);
        auto expected = mmr_oracle(vecs, qv, k, lambda);

        REQUIRE(out.size() == expected.size());
        CHECK(out.size() == std::min<size_t>(k, n));
        std::set<int> ids;
        for (size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].first.id == expected[i]);
            ids.insert(out[i].first.id);
        }
        CHECK(ids.size() == out.size());  // no duplicates
    }
}

TEST_CASE("MMR with lambda 1 reduces to plain top-k") {
    std::mt19937 rng(77);
    gateway::HashingEmbedder embedder(dims(8));
    std::vector<std::string> texts;
    for (int i = 0; i < 12; ++i) texts.push_back(random_document(rng, 15, 40));
    auto index = VectorIndex::build(word_chunks(texts), embedder);

    std::string query = "alpha beta";
    auto qv = embedder.embed({query}, ProfileId::RagIndex)[0];
    auto plain = index.top_k(qv, 4);
    auto mmr = rag::mmr_retrieve(index, query, 4, 1.0, embedder);
    REQUIRE(mmr.size() == plain.size());
    for (size_t i = 0; i < mmr.size(); ++i) {
        CHECK(mmr[i].first.id == plain[i].first);
        CHECK(mmr[i].second == doctest::Approx(plain[i].second).epsilon(1e-12));
    }
}

TEST_CASE("relevance gate keeps the highest-confidence Yes") {
    auto chunks = word_chunks({"first span", "second span", "third span"});
    gateway::ScriptedGenerator gen({"--No\n-- Confidence score: 0.4",
                                    "--Yes\n-- Confidence score: 0.8",
                                    "--Yes\n-- Confidence score: 0.6"});
    auto outcome = rag::relevance_gate(chunks, "section text", gen);
    REQUIRE(outcome.chunk_id.has_value());
    CHECK(*outcome.chunk_id == 1);
    CHECK(*outcome.confidence == doctest::Approx(0.8));
    CHECK(outcome.verdicts.size() == 3);
}

TEST_CASE("all-No gate returns absent") {
    auto chunks = word_chunks({"a", "b"});
    gateway::ScriptedGenerator gen({"--No\n-- Confidence score: 0.9", "--No"});
    auto outcome = rag::relevance_gate(chunks, "section", gen);
    CHECK_FALSE(outcome.chunk_id.has_value());
    CHECK_FALSE(outcome.confidence.has_value());
}

TEST_CASE("gate parses the documented response format") {
    auto chunks = word_chunks({"only"});
    gateway::ScriptedGenerator gen({"--Yes\n-- Confidence score: 0.9"});
    auto outcome = rag::relevance_gate(chunks, "section", gen);
    REQUIRE(outcome.chunk_id.has_value());
    CHECK(*outcome.confidence == doctest::Approx(0.9));
}

TEST_CASE("a Yes without a numeric score counts as 0.5") {
    auto chunks = word_chunks({"only"});
    gateway::ScriptedGenerator gen({"Yes, this chunk is relevant."});
    auto outcome = rag::relevance_gate(chunks, "section", gen);
    REQUIRE(outcome.chunk_id.has_value());
    CHECK(*outcome.confidence == doctest::Approx(0.5));
}

TEST_CASE("unparseable output counts as No and is flagged") {
    auto chunks = word_chunks({"alpha", "beta"});
    gateway::ScriptedGenerator gen({"???", "--Yes\n-- Confidence score: 0.7"});
    auto outcome = rag::relevance_gate(chunks, "section", gen);
    REQUIRE(outcome.chunk_id.has_value());
    CHECK(*outcome.chunk_id == 1);
    CHECK_FALSE(outcome.verdicts[0].parse_ok);
    CHECK_FALSE(outcome.verdicts[0].accepted);
}

TEST_CASE("gate selection ignores candidate order when confidences differ") {
    auto chunks = word_chunks({"alpha", "beta", "gamma"});
    std::vector<std::string> scripts = {"--Yes\n-- Confidence score: 0.3",
                                        "--Yes\n-- Confidence score: 0.9",
                                        "--Yes\n-- Confidence score: 0.6"};
    gateway::ScriptedGenerator forward(scripts);
    auto first = rag::relevance_gate(chunks, "s", forward);

    std::vector<Chunk> reversed = {chunks[2], chunks[1], chunks[0]};
    gateway::ScriptedGenerator backward({scripts[2], scripts[1], scripts[0]});
    auto second = rag::relevance_gate(reversed, "s", backward);

    REQUIRE(first.chunk_id.has_value());
    REQUIRE(second.chunk_id.has_value());
    CHECK(*first.chunk_id == *second.chunk_id);
    CHECK(*first.confidence == doctest::Approx(*second.confidence));
}

TEST_CASE("gate prompt embeds the chunk between its sentinels") {
    std::string prompt = rag::render_gate_prompt("CHUNK BODY", "SECTION BODY");
    CHECK(prompt.find("start(*)\nCHUNK BODY\nend(*)") != std::string::npos);
    CHECK(prompt.find("SECTION BODY") != std::string::npos);
    CHECK(prompt.find("--Yes/No") != std::string::npos);
    CHECK(prompt.find("-- Confidence score: <score>") != std::string::npos);
}
