#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wikigap/gateway.hpp"
#include "wikigap/mapper.hpp"
#include "wikigap/npov.hpp"
#include "wikigap/wiki_client.hpp"

namespace wikigap::pipeline {

struct GatewayConfig {
    std::string mode = "mock";  // mock | http | replay
    std::string translate_endpoint;
    std::string generate_endpoint;
    int max_in_flight = 4;
    int retry_attempts = 3;
    int retry_base_ms = 500;
    int timeout_sec = 30;
    std::map<gateway::ProfileId, gateway::EmbeddingProfile> profiles;
    std::string replay_file;  // required for mode=replay
    std::string record_file;  // when set, traffic is recorded here
    // mock-mode translation table entries (exact text matches)
    std::map<std::string, std::string> mock_hrl_to_lrl;
    std::map<std::string, std::string> mock_lrl_to_hrl;
};

struct WikiConfig {
    std::string wikidata_endpoint;
    std::map<ingest::Language, ingest::WikiSite> sites;
    bool offline = false;
    std::string cache_dir = "cache";
    std::vector<std::string> excluded_headings_hrl;
    std::vector<std::string> excluded_headings_lrl;
    std::vector<std::string> abbreviations;  // sentence splitter guard, optional
};

struct PipelineConfig {
    GatewayConfig gateway;
    WikiConfig wiki;
    mapping::Thresholds thresholds;

    int rag_k = 3;
    double rag_lambda = 0.5;
    int chunk_size = 1000;
    int chunk_overlap = 100;

    int short_word_cutoff = 2;  // translations of <= this many words are discarded
    int top_n = 3;              // band-filtered sentences kept per anchor

    npov::Mode npov_mode = npov::Mode::FewShot;
    std::string exemplar_file = "data/npov_exemplars.tsv";
    int npov_max_tokens = 256;
    double npov_temperature = 0.0;
    int gate_max_tokens = 64;

    double page_size_divisor = 100.0;

    std::string artifact_dir = "runs";
    std::string book_dir;
    std::string book_manifest;
    std::string quality_records;

    int workers = 2;
};

PipelineConfig default_config();
PipelineConfig load_config(const std::string& path);
void validate(const PipelineConfig& config);
std::string config_to_json(const PipelineConfig& config);

gateway::Gateway build_gateway(const PipelineConfig& config);
std::unique_ptr<ingest::WikiClient> build_wiki_client(const PipelineConfig& config);

}  // namespace wikigap::pipeline
