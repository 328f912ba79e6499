#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "wikigap/gateway.hpp"

namespace wikigap::gateway {

// Deterministic embeddings from hashed token counts; texts sharing vocabulary
// score high cosine similarity. Texts with no tokens hash as a single token so
// the norm is never zero.
class HashingEmbedder : public EmbeddingClient {
public:
    explicit HashingEmbedder(std::map<ProfileId, int> dimensions);

    std::vector<Vector> embed(const std::vector<std::string>& texts, ProfileId profile) override;

    // The per-text embedding, exposed so tests can check batch order.
    Vector embed_one(const std::string& text, ProfileId profile) const;

private:
    std::map<ProfileId, int> dimensions_;
};

// Exact text -> fixed components, for hand-set similarity scenarios.
class TableEmbedder : public EmbeddingClient {
public:
    explicit TableEmbedder(std::map<ProfileId, int> dimensions);

    void set(ProfileId profile, const std::string& text, std::vector<double> components);
    std::vector<Vector> embed(const std::vector<std::string>& texts, ProfileId profile) override;

private:
    std::map<ProfileId, int> dimensions_;
    std::map<ProfileId, std::map<std::string, std::vector<double>>> table_;
};

// Table lookup with a reversible per-token marker fallback:
//   HRL->LRL prefixes every token with a Devanagari marker, LRL->HRL strips it.
// An entry mapped to "" raises EmptyTranslationError, for failure-path tests.
class TableTranslator : public TranslationClient {
public:
    TableTranslator() = default;

    void set(Direction direction, const std::string& text, const std::string& translation);
    std::string translate(const std::string& text, Direction direction) override;

    static std::string mark_tokens(const std::string& text);
    static std::string strip_marks(const std::string& text);

private:
    std::map<Direction, std::map<std::string, std::string>> table_;
};

// Canned completions served in order; repeats the last one when exhausted.
class ScriptedGenerator : public GenerationClient {
public:
    explicit ScriptedGenerator(std::vector<std::string> responses);

    std::string generate(const GenerationRequest& request) override;
    int calls() const { return calls_; }
    const std::vector<GenerationRequest>& requests() const { return seen_; }

private:
    std::vector<std::string> responses_;
    std::vector<GenerationRequest> seen_;
    int calls_ = 0;
    std::mutex mu_;
};

// Template-aware deterministic model stand-in for offline pipeline runs:
//  - relevance-gate prompts: Yes/No from content-word overlap between the
//    chunk and the section, confidence = rounded overlap ratio;
//  - neutralization prompts: echoes the query sentence inside <pad> sentinels
//    with tokens from a small loaded-language list removed.
class MockGenerator : public GenerationClient {
public:
    MockGenerator() = default;
    explicit MockGenerator(size_t prompt_char_limit) : prompt_char_limit_(prompt_char_limit) {}

    std::string generate(const GenerationRequest& request) override;

private:
    size_t prompt_char_limit_ = 1 << 20;
};

Gateway make_mock_gateway(std::map<ProfileId, int> dimensions,
                          std::map<std::string, std::string> hrl_to_lrl_table = {},
                          std::map<std::string, std::string> lrl_to_hrl_table = {});

}  // namespace wikigap::gateway
