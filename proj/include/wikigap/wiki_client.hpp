#pragma once

#include <map>
#include <memory>
#include <string>

#include "wikigap/article.hpp"
#include "wikigap/gateway_http.hpp"
#include "wikigap/wikitext.hpp"

namespace wikigap::ingest {

struct WikiSite {
    std::string api_endpoint;  // MediaWiki api.php, e.g. https://en.wikipedia.org/w/api.php
    std::string site_key;      // sitelink key in the id registry, e.g. "enwiki"
};

struct WikiEndpoints {
    std::string wikidata_endpoint;  // wbgetentities api.php
    std::map<Language, WikiSite> sites;
};

// Fetches articles by wikidata id: resolves the per-language title through
// sitelinks, retrieves wikitext via action=parse, and caches the response on
// disk keyed by (id, language) with the revision stored inside, so repeat runs
// are reproducible. With `offline` set, only cached responses are served.
class WikiClient {
public:
    WikiClient(WikiEndpoints endpoints, std::string cache_dir,
               std::map<Language, ParseOptions> parse_options,
               gateway::HttpOptions http_options, bool offline);
    ~WikiClient();

    Article fetch_article(const std::string& wikidata_id, Language language);

    // Seeds the cache with a raw wikitext payload, as a recorded API response.
    void seed_cache(const std::string& wikidata_id, Language language, const std::string& title,
                    long revision, const std::string& wikitext);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wikigap::ingest
