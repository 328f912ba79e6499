#include "wikigap/wiki_client.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "wikigap/errors.hpp"

namespace wikigap::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string percent_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

json get_json(const std::string& endpoint, const std::string& query,
              const gateway::HttpOptions& opts) {
    gateway::ParsedUrl url = gateway::parse_url(endpoint);
    for (int attempt = 0;; ++attempt) {
        httplib::Client client(url.base);
        client.set_connection_timeout(opts.timeout_sec);
        client.set_read_timeout(opts.timeout_sec);
        auto res = client.Get(url.path + query);
        if (res && res->status == 200) {
            json parsed = json::parse(res->body, nullptr, false);
            if (parsed.is_discarded()) throw RemoteError("malformed API response");
            return parsed;
        }
        bool retryable = !res || res->status >= 500;
        if (res && !retryable) {
            throw RemoteError("API request failed with status " + std::to_string(res->status));
        }
        if (attempt + 1 >= opts.retry.attempts) {
            throw RemoteError("API unreachable after " + std::to_string(opts.retry.attempts) +
                              " attempts");
        }
        std::this_thread::sleep_for(
            std::chrono::milliseconds(opts.retry.base_delay_ms << attempt));
    }
}

}  // namespace

struct WikiClient::Impl {
    WikiEndpoints endpoints;
    std::string cache_dir;
    std::map<Language, ParseOptions> parse_options;
    gateway::HttpOptions http_options;
    bool offline;
    std::mutex cache_mu;

    fs::path cache_path(const std::string& id, Language lang) const {
        return fs::path(cache_dir) / (id + "_" + language_name(lang) + ".json");
    }

    void write_cache(const std::string& id, Language lang, const json& payload) {
        std::lock_guard<std::mutex> lock(cache_mu);
        fs::create_directories(cache_dir);
        fs::path target = cache_path(id, lang);
        fs::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) throw IoError("cannot write cache file: " + tmp.string());
            out << payload.dump(2) << '\n';
        }
        fs::rename(tmp, target);
    }

    std::optional<json> read_cache(const std::string& id, Language lang) {
        fs::path p = cache_path(id, lang);
        std::ifstream in(p);
        if (!in) return std::nullopt;
        json payload = json::parse(in, nullptr, false);
        if (payload.is_discarded()) return std::nullopt;  // corrupt cache refetches
        return payload;
    }

    json fetch_remote(const std::string& id, Language lang) {
        const WikiSite& site = endpoints.sites.at(lang);
        json entities = get_json(endpoints.wikidata_endpoint,
                                 "?action=wbgetentities&format=json&props=sitelinks&ids=" +
                                     percent_encode(id),
                                 http_options);
        if (!entities.contains("entities") || !entities["entities"].contains(id) ||
            entities["entities"][id].contains("missing")) {
            throw NotFoundError("no entity for id " + id);
        }
        const json& links = entities["entities"][id].value("sitelinks", json::object());
        if (!links.contains(site.site_key)) {
            throw NotFoundError("no " + site.site_key + " page for id " + id);
        }
        std::string title = links[site.site_key].at("title").get<std::string>();

        json parsed = get_json(site.api_endpoint,
                               "?action=parse&format=json&prop=wikitext|revid&page=" +
                                   percent_encode(title),
                               http_options);
        if (parsed.contains("error")) {
            std::string code = parsed["error"].value("code", "");
            if (code == "missingtitle" || code == "pagecannotexist" || code == "invalidtitle") {
                throw NotFoundError("page missing: " + title);
            }
            throw RemoteError("API error: " + code);
        }
        if (!parsed.contains("parse")) throw ParseError("unexpected parse response shape");
        const json& p = parsed["parse"];
        std::string wikitext;
        if (p.contains("wikitext")) {
            wikitext = p["wikitext"].is_object() ? p["wikitext"].value("*", "")
                                                 : p["wikitext"].get<std::string>();
        }
        return json{{"wikidata_id", id},
                    {"language", language_name(lang)},
                    {"title", p.value("title", title)},
                    {"revision", p.value("revid", 0L)},
                    {"wikitext", wikitext}};
    }
};

WikiClient::WikiClient(WikiEndpoints endpoints, std::string cache_dir,
                       std::map<Language, ParseOptions> parse_options,
                       gateway::HttpOptions http_options, bool offline)
    : impl_(std::make_unique<Impl>()) {
    impl_->endpoints = std::move(endpoints);
    impl_->cache_dir = std::move(cache_dir);
    impl_->parse_options = std::move(parse_options);
    impl_->http_options = http_options;
    impl_->offline = offline;
}

WikiClient::~WikiClient() = default;

void WikiClient::seed_cache(const std::string& wikidata_id, Language language,
                            const std::string& title, long revision,
                            const std::string& wikitext) {
    impl_->write_cache(wikidata_id, language,
                       json{{"wikidata_id", wikidata_id},
                            {"language", language_name(language)},
                            {"title", title},
                            {"revision", revision},
                            {"wikitext", wikitext}});
}

Article WikiClient::fetch_article(const std::string& wikidata_id, Language language) {
    std::optional<json> payload = impl_->read_cache(wikidata_id, language);
    if (!payload) {
        if (impl_->offline) {
            throw NotFoundError("offline and no cached response for " + wikidata_id + "/" +
                                language_name(language));
        }
        payload = impl_->fetch_remote(wikidata_id, language);
        impl_->write_cache(wikidata_id, language, *payload);
    }

    Article article;
    article.wikidata_id = wikidata_id;
    article.language = language;
    article.title = payload->value("title", "");
    auto opts_it = impl_->parse_options.find(language);
    ParseOptions opts = opts_it == impl_->parse_options.end() ? ParseOptions{} : opts_it->second;
    article.sections = parse_sections(payload->value("wikitext", ""), opts);
    return article;
}

}  // namespace wikigap::ingest
