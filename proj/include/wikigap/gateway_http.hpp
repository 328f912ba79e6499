#pragma once

#include <map>
#include <memory>
#include <string>

#include "wikigap/gateway.hpp"

namespace wikigap::gateway {

// Base + path split of an http URL, e.g. "http://host:8081/v1" ->
// {"http://host:8081", "/v1"}.
struct ParsedUrl {
    std::string base;
    std::string path;
};
ParsedUrl parse_url(const std::string& url);

struct HttpOptions {
    RetryPolicy retry;
    int max_in_flight = 4;
    int timeout_sec = 30;
};

// POST {endpoint}/embed  {"profile": "...", "texts": [...]}
//   -> {"vectors": [[...], ...]}
class HttpEmbeddingClient : public EmbeddingClient {
public:
    HttpEmbeddingClient(std::map<ProfileId, EmbeddingProfile> profiles, HttpOptions options);
    ~HttpEmbeddingClient() override;

    std::vector<Vector> embed(const std::vector<std::string>& texts, ProfileId profile) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// POST {endpoint}/translate  {"direction": "lrl_to_hrl", "text": "..."}
//   -> {"translation": "..."}
class HttpTranslationClient : public TranslationClient {
public:
    HttpTranslationClient(std::string endpoint, HttpOptions options);
    ~HttpTranslationClient() override;

    std::string translate(const std::string& text, Direction direction) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// POST {endpoint}/generate  {"prompt": "...", "max_tokens": n, "temperature": t}
//   -> {"completion": "..."}; HTTP 413 or {"error":"token_limit"} -> TokenLimitError
class HttpGenerationClient : public GenerationClient {
public:
    HttpGenerationClient(std::string endpoint, HttpOptions options);
    ~HttpGenerationClient() override;

    std::string generate(const GenerationRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wikigap::gateway
