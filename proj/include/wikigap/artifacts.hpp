#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wikigap/article.hpp"
#include "wikigap/augmenter.hpp"
#include "wikigap/mapper.hpp"
#include "wikigap/npov.hpp"
#include "wikigap/quality.hpp"
#include "wikigap/rag.hpp"

namespace wikigap::artifacts {

using nlohmann::json;

// Schema tags; bump the version when a layout changes shape.
inline constexpr const char* kArticleSchema = "wikigap/article/v1";
inline constexpr const char* kMappingsSchema = "wikigap/mappings/v1";
inline constexpr const char* kRetrievalSchema = "wikigap/retrieval/v1";
inline constexpr const char* kNpovSchema = "wikigap/npov/v1";
inline constexpr const char* kEnrichedSchema = "wikigap/enriched/v1";
inline constexpr const char* kEvaluationSchema = "wikigap/evaluation/v1";
inline constexpr const char* kManifestSchema = "wikigap/manifest/v1";
inline constexpr const char* kReportSchema = "wikigap/report/v1";

// Deterministic on-disk layout of one enrichment run.
struct RunPaths {
    std::filesystem::path root;

    explicit RunPaths(std::filesystem::path run_dir) : root(std::move(run_dir)) {}

    std::filesystem::path manifest() const { return root / "manifest.json"; }
    std::filesystem::path article(ingest::Language lang) const {
        return root / (std::string("article.") + ingest::language_name(lang) + ".json");
    }
    std::filesystem::path augmented_hrl() const { return root / "augmented_hrl.json"; }
    std::filesystem::path mappings() const { return root / "mappings.json"; }
    std::filesystem::path retrieval(int index, const std::string& heading) const;
    std::filesystem::path npov(int index, const std::string& heading) const;
    std::filesystem::path enriched(int index, const std::string& heading) const;
    std::filesystem::path evaluation() const { return root / "evaluation.json"; }
    std::filesystem::path report_json() const { return root / "report.json"; }
    std::filesystem::path report_text() const { return root / "report.txt"; }
};

std::string section_slug(int index, const std::string& heading);

// Atomic write: schema tag injected, 2-space indent, sorted keys, trailing
// newline; the same payload always produces identical bytes.
void write_artifact(const std::filesystem::path& path, const char* schema, json payload);

// Throws MissingArtifactsError when absent, ParseError when damaged or the
// schema tag mismatches.
json read_artifact(const std::filesystem::path& path, const char* schema);

// True when the file exists, parses, and carries the expected schema tag.
bool artifact_valid(const std::filesystem::path& path, const char* schema);

json article_to_json(const ingest::Article& article);
ingest::Article article_from_json(const json& j);

json mappings_to_json(const std::vector<mapping::SectionMapping>& mappings);
std::vector<mapping::SectionMapping> mappings_from_json(const json& j);

json retrieval_to_json(const rag::RetrievalResult& result);

json neutralization_to_json(const std::string& heading,
                            const std::vector<npov::NeutralizationRecord>& records);
std::vector<npov::NeutralizationRecord> neutralization_records_from_json(const json& j);

struct AnchorAudit {
    int anchor_index = 0;
    std::string anchor_text;
    std::vector<std::string> candidates;   // LRL texts, parallel to similarities
    std::vector<double> similarities;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<std::string> selected;
};

json enriched_to_json(const augment::EnrichedSection& section,
                      const std::vector<AnchorAudit>& audits);
augment::EnrichedSection enriched_from_json(const json& j);

json scores_to_json(const quality::QualityScores& scores);
quality::QualityScores scores_from_json(const json& j);

}  // namespace wikigap::artifacts
