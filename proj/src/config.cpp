#include "wikigap/config.hpp"

#include <fstream>

#include <json.hpp>

#include "wikigap/errors.hpp"
#include "wikigap/gateway_http.hpp"
#include "wikigap/gateway_mock.hpp"
#include "wikigap/gateway_replay.hpp"

namespace wikigap::pipeline {

using gateway::ProfileId;
using nlohmann::json;

PipelineConfig default_config() {
    PipelineConfig c;
    c.gateway.profiles = {
        {ProfileId::TitleMap, {ProfileId::TitleMap, "", 384}},
        {ProfileId::ContentMap, {ProfileId::ContentMap, "", 1024}},
        {ProfileId::Augment, {ProfileId::Augment, "", 768}},
        {ProfileId::RagIndex, {ProfileId::RagIndex, "", 768}},
    };
    c.wiki.excluded_headings_hrl = {"See also", "References", "External links",
                                    "Inline citations"};
    c.wiki.excluded_headings_lrl = {"इन्हें भी देखें", "सन्दर्भ", "संदर्भ", "बाहरी कड़ियाँ"};
    return c;
}

namespace {

void read_gateway(const json& j, GatewayConfig& g) {
    g.mode = j.value("mode", g.mode);
    g.translate_endpoint = j.value("translate_endpoint", g.translate_endpoint);
    g.generate_endpoint = j.value("generate_endpoint", g.generate_endpoint);
    g.max_in_flight = j.value("max_in_flight", g.max_in_flight);
    g.retry_attempts = j.value("retry_attempts", g.retry_attempts);
    g.retry_base_ms = j.value("retry_base_ms", g.retry_base_ms);
    g.timeout_sec = j.value("timeout_sec", g.timeout_sec);
    g.replay_file = j.value("replay_file", g.replay_file);
    g.record_file = j.value("record_file", g.record_file);
    if (j.contains("profiles")) {
        for (const auto& [name, pj] : j["profiles"].items()) {
            ProfileId id = gateway::profile_from_name(name);
            auto& prof = g.profiles[id];
            prof.id = id;
            prof.endpoint = pj.value("endpoint", prof.endpoint);
            prof.dimension = pj.value("dimension", prof.dimension);
        }
    }
    if (j.contains("mock_translation_table")) {
        const json& t = j["mock_translation_table"];
        const json hrl_to_lrl = t.value("hrl_to_lrl", json::object());
        for (const auto& [k, v] : hrl_to_lrl.items()) {
            g.mock_hrl_to_lrl[k] = v.get<std::string>();
        }
        const json lrl_to_hrl = t.value("lrl_to_hrl", json::object());
        for (const auto& [k, v] : lrl_to_hrl.items()) {
            g.mock_lrl_to_hrl[k] = v.get<std::string>();
        }
    }
}

void read_wiki(const json& j, WikiConfig& w) {
    w.wikidata_endpoint = j.value("wikidata_endpoint", w.wikidata_endpoint);
    w.offline = j.value("offline", w.offline);
    w.cache_dir = j.value("cache_dir", w.cache_dir);
    if (j.contains("sites")) {
        for (const auto& [name, sj] : j["sites"].items()) {
            ingest::Language lang = ingest::language_from_name(name);
            w.sites[lang] = ingest::WikiSite{sj.value("api_endpoint", ""),
                                             sj.value("site_key", "")};
        }
    }
    if (j.contains("excluded_headings_hrl")) {
        w.excluded_headings_hrl = j["excluded_headings_hrl"].get<std::vector<std::string>>();
    }
    if (j.contains("excluded_headings_lrl")) {
        w.excluded_headings_lrl = j["excluded_headings_lrl"].get<std::vector<std::string>>();
    }
    if (j.contains("abbreviations")) {
        w.abbreviations = j["abbreviations"].get<std::vector<std::string>>();
    }
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("malformed config JSON: " + path);

    PipelineConfig c = default_config();
    if (j.contains("gateway")) read_gateway(j["gateway"], c.gateway);
    if (j.contains("wiki")) read_wiki(j["wiki"], c.wiki);
    if (j.contains("thresholds")) {
        const json& t = j["thresholds"];
        c.thresholds.title_threshold = t.value("title_threshold", c.thresholds.title_threshold);
        c.thresholds.content_mean = t.value("content_mean", c.thresholds.content_mean);
        c.thresholds.content_std = t.value("content_std", c.thresholds.content_std);
    }
    if (j.contains("rag")) {
        const json& r = j["rag"];
        c.rag_k = r.value("k", c.rag_k);
        c.rag_lambda = r.value("lambda", c.rag_lambda);
        c.chunk_size = r.value("chunk_size", c.chunk_size);
        c.chunk_overlap = r.value("chunk_overlap", c.chunk_overlap);
        c.gate_max_tokens = r.value("gate_max_tokens", c.gate_max_tokens);
    }
    if (j.contains("augment")) {
        const json& a = j["augment"];
        c.short_word_cutoff = a.value("short_word_cutoff", c.short_word_cutoff);
        c.top_n = a.value("top_n", c.top_n);
    }
    if (j.contains("npov")) {
        const json& n = j["npov"];
        c.npov_mode = npov::mode_from_name(n.value("mode", npov::mode_name(c.npov_mode)));
        c.exemplar_file = n.value("exemplar_file", c.exemplar_file);
        c.npov_max_tokens = n.value("max_tokens", c.npov_max_tokens);
        c.npov_temperature = n.value("temperature", c.npov_temperature);
    }
    if (j.contains("eval")) {
        c.page_size_divisor = j["eval"].value("page_size_divisor", c.page_size_divisor);
    }
    if (j.contains("paths")) {
        const json& p = j["paths"];
        c.artifact_dir = p.value("artifact_dir", c.artifact_dir);
        c.book_dir = p.value("book_dir", c.book_dir);
        c.book_manifest = p.value("book_manifest", c.book_manifest);
        c.quality_records = p.value("quality_records", c.quality_records);
    }
    c.workers = j.value("workers", c.workers);

    validate(c);
    return c;
}

void validate(const PipelineConfig& c) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(c.thresholds.title_threshold) || !in_unit(c.thresholds.content_mean) ||
        !in_unit(c.thresholds.content_std) || !in_unit(c.thresholds.content_threshold())) {
        throw ConfigError("thresholds must lie in [0,1]");
    }
    if (c.rag_k < 1) throw ConfigError("rag.k must be >= 1");
    if (c.rag_lambda < 0.0 || c.rag_lambda > 1.0) throw ConfigError("rag.lambda must be in [0,1]");
    if (c.chunk_size <= 0 || c.chunk_overlap < 0 || c.chunk_overlap >= c.chunk_size) {
        throw ConfigError("rag chunking requires 0 <= overlap < size");
    }
    if (c.top_n < 1) throw ConfigError("augment.top_n must be >= 1");
    if (c.short_word_cutoff < 0) throw ConfigError("augment.short_word_cutoff must be >= 0");
    if (c.page_size_divisor <= 0.0) throw ConfigError("eval.page_size_divisor must be positive");
    if (c.workers < 1) throw ConfigError("workers must be >= 1");
    if (c.gateway.max_in_flight < 1 || c.gateway.max_in_flight > 256) {
        throw ConfigError("gateway.max_in_flight must be in [1,256]");
    }
    if (c.gateway.mode != "mock" && c.gateway.mode != "http" && c.gateway.mode != "replay") {
        throw ConfigError("gateway.mode must be mock, http, or replay");
    }
    if (c.gateway.mode == "replay" && c.gateway.replay_file.empty()) {
        throw ConfigError("gateway.mode=replay requires gateway.replay_file");
    }
    for (const auto& [id, prof] : c.gateway.profiles) {
        if (prof.dimension <= 0) throw ConfigError("embedding profile dimension must be > 0");
    }
}

std::string config_to_json(const PipelineConfig& c) {
    json profiles;
    for (const auto& [id, prof] : c.gateway.profiles) {
        profiles[gateway::profile_name(id)] = {{"endpoint", prof.endpoint},
                                               {"dimension", prof.dimension}};
    }
    json sites;
    for (const auto& [lang, site] : c.wiki.sites) {
        sites[ingest::language_name(lang)] = {{"api_endpoint", site.api_endpoint},
                                              {"site_key", site.site_key}};
    }
    json j = {
        {"gateway",
         {{"mode", c.gateway.mode},
          {"translate_endpoint", c.gateway.translate_endpoint},
          {"generate_endpoint", c.gateway.generate_endpoint},
          {"max_in_flight", c.gateway.max_in_flight},
          {"retry_attempts", c.gateway.retry_attempts},
          {"retry_base_ms", c.gateway.retry_base_ms},
          {"replay_file", c.gateway.replay_file},
          {"record_file", c.gateway.record_file},
          {"profiles", profiles}}},
        {"wiki",
         {{"wikidata_endpoint", c.wiki.wikidata_endpoint},
          {"sites", sites},
          {"offline", c.wiki.offline},
          {"cache_dir", c.wiki.cache_dir},
          {"excluded_headings_hrl", c.wiki.excluded_headings_hrl},
          {"excluded_headings_lrl", c.wiki.excluded_headings_lrl}}},
        {"thresholds",
         {{"title_threshold", c.thresholds.title_threshold},
          {"content_mean", c.thresholds.content_mean},
          {"content_std", c.thresholds.content_std}}},
        {"rag",
         {{"k", c.rag_k},
          {"lambda", c.rag_lambda},
          {"chunk_size", c.chunk_size},
          {"chunk_overlap", c.chunk_overlap}}},
        {"augment", {{"short_word_cutoff", c.short_word_cutoff}, {"top_n", c.top_n}}},
        {"npov",
         {{"mode", npov::mode_name(c.npov_mode)},
          {"exemplar_file", c.exemplar_file},
          {"max_tokens", c.npov_max_tokens},
          {"temperature", c.npov_temperature}}},
        {"eval", {{"page_size_divisor", c.page_size_divisor}}},
        {"paths",
         {{"artifact_dir", c.artifact_dir},
          {"book_dir", c.book_dir},
          {"book_manifest", c.book_manifest},
          {"quality_records", c.quality_records}}},
        {"workers", c.workers},
    };
    return j.dump(2);
}

gateway::Gateway build_gateway(const PipelineConfig& c) {
    gateway::Gateway gw;
    if (c.gateway.mode == "mock") {
        std::map<ProfileId, int> dims;
        for (const auto& [id, prof] : c.gateway.profiles) dims[id] = prof.dimension;
        gw = gateway::make_mock_gateway(dims, c.gateway.mock_hrl_to_lrl,
                                        c.gateway.mock_lrl_to_hrl);
    } else if (c.gateway.mode == "replay") {
        gw = gateway::make_replay_gateway(c.gateway.replay_file);
    } else {
        gateway::HttpOptions opts;
        opts.retry = {c.gateway.retry_attempts, c.gateway.retry_base_ms};
        opts.max_in_flight = c.gateway.max_in_flight;
        opts.timeout_sec = c.gateway.timeout_sec;
        gw.embeddings =
            std::make_shared<gateway::HttpEmbeddingClient>(c.gateway.profiles, opts);
        gw.translator = std::make_shared<gateway::HttpTranslationClient>(
            c.gateway.translate_endpoint, opts);
        gw.generator = std::make_shared<gateway::HttpGenerationClient>(
            c.gateway.generate_endpoint, opts);
    }
    if (!c.gateway.record_file.empty()) {
        gw = gateway::make_recording_gateway(gw, c.gateway.record_file);
    }
    return gw;
}

std::unique_ptr<ingest::WikiClient> build_wiki_client(const PipelineConfig& c) {
    ingest::WikiEndpoints endpoints;
    endpoints.wikidata_endpoint = c.wiki.wikidata_endpoint;
    endpoints.sites = c.wiki.sites;

    std::map<ingest::Language, ingest::ParseOptions> parse_options;
    parse_options[ingest::Language::HRL] =
        ingest::ParseOptions{c.wiki.excluded_headings_hrl, c.wiki.abbreviations};
    parse_options[ingest::Language::LRL] =
        ingest::ParseOptions{c.wiki.excluded_headings_lrl, c.wiki.abbreviations};

    gateway::HttpOptions opts;
    opts.retry = {c.gateway.retry_attempts, c.gateway.retry_base_ms};
    opts.max_in_flight = c.gateway.max_in_flight;
    opts.timeout_sec = c.gateway.timeout_sec;
    return std::make_unique<ingest::WikiClient>(endpoints, c.wiki.cache_dir, parse_options, opts,
                                                c.wiki.offline);
}

}  // namespace wikigap::pipeline
