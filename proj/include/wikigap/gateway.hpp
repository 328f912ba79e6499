#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wikigap/errors.hpp"

namespace wikigap::gateway {

// One profile per pipeline stage; each stage is bound to exactly one
// embedding model behind the service.
enum class ProfileId { TitleMap, ContentMap, Augment, RagIndex };

const char* profile_name(ProfileId id);
ProfileId profile_from_name(const std::string& name);

struct EmbeddingProfile {
    ProfileId id = ProfileId::TitleMap;
    std::string endpoint;
    int dimension = 0;
};

struct Vector {
    std::vector<double> components;
    ProfileId profile = ProfileId::TitleMap;
};

double norm(const Vector& v);

// dot(a,b) / (|a||b|), computed locally so threshold semantics never depend
// on service-side normalization. Throws ZeroVectorError / DimensionMismatchError.
double cosine_similarity(const Vector& a, const Vector& b);

struct GenerationRequest {
    std::string prompt;
    int max_tokens = 512;
    double temperature = 0.0;
};

enum class Direction { LrlToHrl, HrlToLrl };

const char* direction_name(Direction d);

class EmbeddingClient {
public:
    virtual ~EmbeddingClient() = default;
    // One vector per input, order preserved, all with the profile's dimension.
    virtual std::vector<Vector> embed(const std::vector<std::string>& texts, ProfileId profile) = 0;
};

class TranslationClient {
public:
    virtual ~TranslationClient() = default;
    virtual std::string translate(const std::string& text, Direction direction) = 0;
};

class GenerationClient {
public:
    virtual ~GenerationClient() = default;
    virtual std::string generate(const GenerationRequest& request) = 0;
};

struct Gateway {
    std::shared_ptr<EmbeddingClient> embeddings;
    std::shared_ptr<TranslationClient> translator;
    std::shared_ptr<GenerationClient> generator;
};

struct RetryPolicy {
    int attempts = 3;
    int base_delay_ms = 500;  // doubled per retry, RemoteError only
};

}  // namespace wikigap::gateway
