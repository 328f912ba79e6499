#include "wikigap/gateway_http.hpp"

#include <chrono>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace wikigap::gateway {

using nlohmann::json;

ParsedUrl parse_url(const std::string& url) {
    size_t scheme = url.find("://");
    if (scheme == std::string::npos) throw ConfigError("bad endpoint url: " + url);
    size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, ""};
    return {url.substr(0, slash), url.substr(slash)};
}

namespace {

struct SemGuard {
    std::counting_semaphore<256>& sem;
    explicit SemGuard(std::counting_semaphore<256>& s) : sem(s) { sem.acquire(); }
    ~SemGuard() { sem.release(); }
};

// Shared POST with retry/backoff on connection failure and 5xx.
json post_json(const std::string& endpoint, const std::string& route, const json& body,
               const HttpOptions& opts, std::counting_semaphore<256>& sem) {
    ParsedUrl url = parse_url(endpoint);
    std::string payload = body.dump();
    for (int attempt = 0;; ++attempt) {
        httplib::Result res;
        {
            SemGuard guard(sem);
            httplib::Client client(url.base);
            client.set_connection_timeout(opts.timeout_sec);
            client.set_read_timeout(opts.timeout_sec);
            res = client.Post(url.path + route, payload, "application/json");
        }
        bool retryable = !res || res->status >= 500;
        if (res && res->status == 200) {
            json parsed = json::parse(res->body, nullptr, false);
            if (parsed.is_discarded()) throw RemoteError("malformed JSON from " + route);
            return parsed;
        }
        if (res && !retryable) {
            if (res->status == 413) throw TokenLimitError("service rejected request size");
            json parsed = json::parse(res->body, nullptr, false);
            if (!parsed.is_discarded() && parsed.value("error", "") == "token_limit") {
                throw TokenLimitError("service reported token limit");
            }
            throw RemoteError(route + " failed with status " + std::to_string(res->status));
        }
        if (attempt + 1 >= opts.retry.attempts) {
            throw RemoteError(route + " unreachable after " +
                              std::to_string(opts.retry.attempts) + " attempts");
        }
        std::this_thread::sleep_for(
            std::chrono::milliseconds(opts.retry.base_delay_ms << attempt));
    }
}

}  // namespace

// --- HttpEmbeddingClient -----------------------------------------------------

struct HttpEmbeddingClient::Impl {
    std::map<ProfileId, EmbeddingProfile> profiles;
    HttpOptions options;
    std::counting_semaphore<256> sem;

    Impl(std::map<ProfileId, EmbeddingProfile> p, HttpOptions o)
        : profiles(std::move(p)), options(o), sem(o.max_in_flight) {}
};

HttpEmbeddingClient::HttpEmbeddingClient(std::map<ProfileId, EmbeddingProfile> profiles,
                                         HttpOptions options)
    : impl_(std::make_unique<Impl>(std::move(profiles), options)) {}

HttpEmbeddingClient::~HttpEmbeddingClient() = default;

std::vector<Vector> HttpEmbeddingClient::embed(const std::vector<std::string>& texts,
                                               ProfileId profile) {
    if (texts.empty()) return {};
    for (const auto& t : texts) {
        if (t.empty()) throw InvalidParamsError("embed: empty input text");
    }
    auto it = impl_->profiles.find(profile);
    if (it == impl_->profiles.end()) throw ConfigError("no endpoint configured for profile");
    const EmbeddingProfile& prof = it->second;

    json body = {{"profile", profile_name(profile)}, {"texts", texts}};
    json res = post_json(prof.endpoint, "/embed", body, impl_->options, impl_->sem);
    if (!res.contains("vectors") || !res["vectors"].is_array() ||
        res["vectors"].size() != texts.size()) {
        throw RemoteError("embed: response cardinality mismatch");
    }
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& row : res["vectors"]) {
        Vector v;
        v.profile = profile;
        v.components = row.get<std::vector<double>>();
        if (static_cast<int>(v.components.size()) != prof.dimension) {
            throw DimensionMismatchError("embed: service returned width " +
                                         std::to_string(v.components.size()) + ", expected " +
                                         std::to_string(prof.dimension));
        }
        out.push_back(std::move(v));
    }
    return out;
}

// --- HttpTranslationClient ---------------------------------------------------

struct HttpTranslationClient::Impl {
    std::string endpoint;
    HttpOptions options;
    std::counting_semaphore<256> sem;

    Impl(std::string e, HttpOptions o) : endpoint(std::move(e)), options(o), sem(o.max_in_flight) {}
};

HttpTranslationClient::HttpTranslationClient(std::string endpoint, HttpOptions options)
    : impl_(std::make_unique<Impl>(std::move(endpoint), options)) {}

HttpTranslationClient::~HttpTranslationClient() = default;

std::string HttpTranslationClient::translate(const std::string& text, Direction direction) {
    if (text.empty()) throw InvalidParamsError("translate: empty input text");
    json body = {{"direction", direction_name(direction)}, {"text", text}};
    json res = post_json(impl_->endpoint, "/translate", body, impl_->options, impl_->sem);
    std::string translation = res.value("translation", "");
    if (translation.empty()) throw EmptyTranslationError("translate: empty translation");
    return translation;
}

// --- HttpGenerationClient ----------------------------------------------------

struct HttpGenerationClient::Impl {
    std::string endpoint;
    HttpOptions options;
    std::counting_semaphore<256> sem;

    Impl(std::string e, HttpOptions o) : endpoint(std::move(e)), options(o), sem(o.max_in_flight) {}
};

HttpGenerationClient::HttpGenerationClient(std::string endpoint, HttpOptions options)
    : impl_(std::make_unique<Impl>(std::move(endpoint), options)) {}

HttpGenerationClient::~HttpGenerationClient() = default;

std::string HttpGenerationClient::generate(const GenerationRequest& request) {
    if (request.prompt.empty()) throw InvalidParamsError("generate: empty prompt");
    json body = {{"prompt", request.prompt},
                 {"max_tokens", request.max_tokens},
                 {"temperature", request.temperature}};
    json res = post_json(impl_->endpoint, "/generate", body, impl_->options, impl_->sem);
    if (!res.contains("completion")) throw RemoteError("generate: missing completion");
    return res["completion"].get<std::string>();
}

}  // namespace wikigap::gateway
