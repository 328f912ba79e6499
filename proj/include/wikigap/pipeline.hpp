#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wikigap/artifacts.hpp"
#include "wikigap/config.hpp"

namespace wikigap::pipeline {

enum class StageStatus { Ok, Skipped, Failed };

const char* stage_status_name(StageStatus status);

struct StageRecord {
    std::string name;
    StageStatus status = StageStatus::Ok;
    std::string note;
    long duration_ms = 0;
};

struct SectionRecord {
    std::string heading;
    StageStatus status = StageStatus::Ok;
    std::string note;
};

struct RunManifest {
    std::string run_id;
    std::string wikidata_id;
    std::string quality_class;
    std::string route;
    std::vector<StageRecord> stages;
    std::vector<SectionRecord> sections;

    bool any_failure() const;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

// Pipeline stages in execution order. Each one reads only the config and
// prior artifacts, so a recorded run can be replayed stage by stage.
inline constexpr const char* kStageNames[] = {"ingest",   "extract",  "neutralize", "map",
                                              "transfer", "evaluate", "report"};

class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    // Full run: ingest -> route -> (extract -> neutralize | skipped) -> map ->
    // transfer -> evaluate -> report, with per-section failure isolation and
    // crash-resume (stages with schema-valid artifacts are not recomputed).
    RunManifest run_enrich(const std::string& wikidata_id);

    // One stage against existing artifacts; `stage` is one of kStageNames.
    StageRecord run_stage(const std::string& wikidata_id, const std::string& stage);

    // Report over a single run directory or a directory of run directories.
    // Computes missing evaluation artifacts first (reverse translation needs
    // the gateway), then aggregates per-article and FA/non-FA group stats and
    // the informativeness bins.
    nlohmann::json run_evaluate(const std::filesystem::path& artifact_dir);

    std::filesystem::path run_dir(const std::string& wikidata_id) const;

    const PipelineConfig& config() const { return config_; }

private:
    struct Ctx;

    StageRecord dispatch_stage(Ctx& ctx, const std::string& stage);
    StageRecord stage_ingest(Ctx& ctx);
    StageRecord stage_extract(Ctx& ctx);
    StageRecord stage_neutralize(Ctx& ctx);
    StageRecord stage_map(Ctx& ctx);
    StageRecord stage_transfer(Ctx& ctx);
    StageRecord stage_evaluate(Ctx& ctx);
    StageRecord stage_report(Ctx& ctx);

    PipelineConfig config_;
    gateway::Gateway gateway_;
    std::unique_ptr<ingest::WikiClient> wiki_;
};

std::string render_report_text(const nlohmann::json& report);

}  // namespace wikigap::pipeline
