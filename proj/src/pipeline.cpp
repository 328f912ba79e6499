#include "wikigap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "wikigap/errors.hpp"
#include "wikigap/ingest.hpp"
#include "wikigap/text.hpp"

namespace wikigap::pipeline {

namespace fs = std::filesystem;
using artifacts::RunPaths;
using nlohmann::json;

inline constexpr const char* kAugmentedSchema = "wikigap/augmented/v1";

const char* stage_status_name(StageStatus status) {
    switch (status) {
        case StageStatus::Ok: return "ok";
        case StageStatus::Skipped: return "skipped";
        case StageStatus::Failed: return "failed";
    }
    return "?";
}

namespace {

StageStatus stage_status_from_name(const std::string& name) {
    if (name == "ok") return StageStatus::Ok;
    if (name == "skipped") return StageStatus::Skipped;
    if (name == "failed") return StageStatus::Failed;
    throw ParseError("unknown stage status: " + name);
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. fn must not
// throw; per-item failures are the caller's to record.
template <typename Fn>
void parallel_for(size_t count, int workers, Fn&& fn) {
    size_t n_threads = std::min<size_t>(std::max(workers, 1), count);
    if (n_threads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) {
        threads.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < count;) fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

quality::QualityScores score_or_zero(const std::string& hrl_text, double divisor) {
    if (text::trim(hrl_text).empty()) return quality::QualityScores{};
    quality::TextStats stats = quality::compute_stats(hrl_text);
    if (stats.n_words == 0) {
        return quality::composites(stats, quality::ReadabilityIndices{}, divisor);
    }
    return quality::composites(stats, quality::readability_indices(stats), divisor);
}

std::string join_sentences(const std::vector<std::string>& sentences) {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out.push_back(' ');
        out += s;
    }
    return out;
}

}  // namespace

bool RunManifest::any_failure() const {
    for (const auto& s : stages) {
        if (s.status == StageStatus::Failed) return true;
    }
    for (const auto& s : sections) {
        if (s.status == StageStatus::Failed) return true;
    }
    return false;
}

json manifest_to_json(const RunManifest& m) {
    json stages = json::array();
    for (const auto& s : m.stages) {
        stages.push_back({{"name", s.name},
                          {"status", stage_status_name(s.status)},
                          {"note", s.note},
                          {"duration_ms", s.duration_ms}});
    }
    json sections = json::array();
    for (const auto& s : m.sections) {
        sections.push_back({{"heading", s.heading},
                            {"status", stage_status_name(s.status)},
                            {"note", s.note}});
    }
    return json{{"run_id", m.run_id},
                {"wikidata_id", m.wikidata_id},
                {"quality_class", m.quality_class},
                {"route", m.route},
                {"stages", stages},
                {"sections", sections}};
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.wikidata_id = j.at("wikidata_id").get<std::string>();
    m.quality_class = j.value("quality_class", "");
    m.route = j.value("route", "");
    for (const auto& sj : j.value("stages", json::array())) {
        m.stages.push_back(StageRecord{sj.at("name").get<std::string>(),
                                       stage_status_from_name(sj.at("status").get<std::string>()),
                                       sj.value("note", ""), sj.value("duration_ms", 0L)});
    }
    for (const auto& sj : j.value("sections", json::array())) {
        m.sections.push_back(
            SectionRecord{sj.at("heading").get<std::string>(),
                          stage_status_from_name(sj.at("status").get<std::string>()),
                          sj.value("note", "")});
    }
    return m;
}

// --- pipeline ------------------------------------------------------------

struct Pipeline::Ctx {
    std::string wikidata_id;
    RunPaths paths;
    std::optional<ingest::QualityRecord> quality;
    ingest::Route route = ingest::Route::AugmentThenTransfer;
    std::vector<SectionRecord> section_records;

    Ctx(std::string id, fs::path dir) : wikidata_id(std::move(id)), paths(std::move(dir)) {}
};

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    validate(config_);
    gateway_ = build_gateway(config_);
    wiki_ = build_wiki_client(config_);
}

fs::path Pipeline::run_dir(const std::string& wikidata_id) const {
    return fs::path(config_.artifact_dir) / wikidata_id;
}

RunManifest Pipeline::run_enrich(const std::string& wikidata_id) {
    Ctx ctx(wikidata_id, run_dir(wikidata_id));
    fs::create_directories(ctx.paths.root);

    RunManifest manifest;
    manifest.run_id = wikidata_id;
    manifest.wikidata_id = wikidata_id;

    for (const char* stage : kStageNames) {
        manifest.stages.push_back(dispatch_stage(ctx, stage));
        if (stage == std::string("ingest")) {
            manifest.quality_class =
                ctx.quality ? ingest::quality_class_name(ctx.quality->class_hrl) : "unknown";
            manifest.route = ingest::route_name(ctx.route);
        }
    }
    manifest.sections = ctx.section_records;
    artifacts::write_artifact(ctx.paths.manifest(), artifacts::kManifestSchema,
                              manifest_to_json(manifest));
    return manifest;
}

StageRecord Pipeline::run_stage(const std::string& wikidata_id, const std::string& stage) {
    Ctx ctx(wikidata_id, run_dir(wikidata_id));
    fs::create_directories(ctx.paths.root);

    // route context comes from the quality records on every invocation
    if (!config_.quality_records.empty() && fs::exists(config_.quality_records)) {
        ctx.quality = ingest::find_quality_record(
            ingest::load_quality_records(config_.quality_records), wikidata_id);
        if (ctx.quality) ctx.route = ingest::route_by_quality(ctx.quality->class_hrl);
    }

    StageRecord rec = dispatch_stage(ctx, stage);

    RunManifest manifest;
    if (artifacts::artifact_valid(ctx.paths.manifest(), artifacts::kManifestSchema)) {
        manifest = manifest_from_json(
            artifacts::read_artifact(ctx.paths.manifest(), artifacts::kManifestSchema));
    } else {
        manifest.run_id = wikidata_id;
        manifest.wikidata_id = wikidata_id;
    }
    manifest.quality_class =
        ctx.quality ? ingest::quality_class_name(ctx.quality->class_hrl) : "unknown";
    manifest.route = ingest::route_name(ctx.route);

    auto it = std::find_if(manifest.stages.begin(), manifest.stages.end(),
                           [&](const StageRecord& s) { return s.name == stage; });
    if (it != manifest.stages.end()) {
        *it = rec;
    } else {
        manifest.stages.push_back(rec);
    }
    for (const auto& s : ctx.section_records) {
        auto sit = std::find_if(manifest.sections.begin(), manifest.sections.end(),
                                [&](const SectionRecord& r) { return r.heading == s.heading; });
        if (sit != manifest.sections.end()) {
            *sit = s;
        } else {
            manifest.sections.push_back(s);
        }
    }
    artifacts::write_artifact(ctx.paths.manifest(), artifacts::kManifestSchema,
                              manifest_to_json(manifest));
    return rec;
}

StageRecord Pipeline::dispatch_stage(Ctx& ctx, const std::string& stage) {
    auto start = std::chrono::steady_clock::now();
    StageRecord rec;
    rec.name = stage;
    try {
        if (stage == "ingest") rec = stage_ingest(ctx);
        else if (stage == "extract") rec = stage_extract(ctx);
        else if (stage == "neutralize") rec = stage_neutralize(ctx);
        else if (stage == "map") rec = stage_map(ctx);
        else if (stage == "transfer") rec = stage_transfer(ctx);
        else if (stage == "evaluate") rec = stage_evaluate(ctx);
        else if (stage == "report") rec = stage_report(ctx);
        else throw ConfigError("unknown stage: " + stage);
    } catch (const NotFoundError&) {
        throw;  // fatal: the id does not resolve
    } catch (const Error& e) {
        rec.name = stage;
        rec.status = StageStatus::Failed;
        rec.note = e.what();
    }
    rec.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return rec;
}

// --- ingest -------------------------------------------------------------

StageRecord Pipeline::stage_ingest(Ctx& ctx) {
    StageRecord rec;
    rec.name = "ingest";

    if (!config_.quality_records.empty() && fs::exists(config_.quality_records)) {
        ctx.quality = ingest::find_quality_record(
            ingest::load_quality_records(config_.quality_records), ctx.wikidata_id);
    }
    if (ctx.quality) {
        ctx.route = ingest::route_by_quality(ctx.quality->class_hrl);
    } else {
        ctx.route = ingest::Route::AugmentThenTransfer;
        rec.note = "no quality record; assuming non-FA route";
    }

    fs::path lrl_path = ctx.paths.article(ingest::Language::LRL);
    fs::path hrl_path = ctx.paths.article(ingest::Language::HRL);
    if (artifacts::artifact_valid(lrl_path, artifacts::kArticleSchema) &&
        artifacts::artifact_valid(hrl_path, artifacts::kArticleSchema)) {
        rec.note = "resumed from existing artifacts";
        return rec;
    }

    ingest::Article lrl = wiki_->fetch_article(ctx.wikidata_id, ingest::Language::LRL);
    ingest::Article hrl = wiki_->fetch_article(ctx.wikidata_id, ingest::Language::HRL);
    if (ctx.quality) {
        lrl.quality_score = ctx.quality->score_lrl;
        hrl.quality_score = ctx.quality->score_hrl;
        hrl.quality_class = ctx.quality->class_hrl;
    }
    artifacts::write_artifact(lrl_path, artifacts::kArticleSchema, artifacts::article_to_json(lrl));
    artifacts::write_artifact(hrl_path, artifacts::kArticleSchema, artifacts::article_to_json(hrl));
    return rec;
}

// --- extract (RAG retrieval over the external book) ----------------------

StageRecord Pipeline::stage_extract(Ctx& ctx) {
    StageRecord rec;
    rec.name = "extract";
    if (ctx.route == ingest::Route::DirectTransfer) {
        rec.status = StageStatus::Skipped;
        rec.note = "direct-transfer route";
        return rec;
    }

    std::optional<ingest::BookManifestEntry> entry;
    if (!config_.book_manifest.empty() && fs::exists(config_.book_manifest)) {
        entry = ingest::choose_most_recent(ingest::load_book_manifest(config_.book_manifest),
                                           ctx.wikidata_id);
    }
    if (!entry) {
        rec.status = StageStatus::Skipped;
        rec.note = "no book for article; falling back to direct transfer";
        std::fprintf(stderr, "[wikigap] warning: %s\n", rec.note.c_str());
        return rec;
    }

    ingest::Article hrl = artifacts::article_from_json(artifacts::read_artifact(
        ctx.paths.article(ingest::Language::HRL), artifacts::kArticleSchema));

    std::vector<size_t> targets;
    for (size_t i = 0; i < hrl.sections.size(); ++i) {
        if (!hrl.sections[i].raw_text.empty()) targets.push_back(i);
    }
    bool all_valid = !targets.empty();
    for (size_t i : targets) {
        if (!artifacts::artifact_valid(
                ctx.paths.retrieval(static_cast<int>(i), hrl.sections[i].heading),
                artifacts::kRetrievalSchema)) {
            all_valid = false;
            break;
        }
    }
    if (all_valid) {
        rec.note = "resumed from existing artifacts";
        return rec;
    }

    std::string book_dir = config_.book_dir.empty()
                               ? fs::path(config_.book_manifest).parent_path().string()
                               : config_.book_dir;
    ingest::BookDocument book = ingest::load_book(*entry, book_dir);
    auto chunks = rag::split_chunks(book, config_.chunk_size, config_.chunk_overlap);
    rag::VectorIndex index = rag::VectorIndex::build(std::move(chunks), *gateway_.embeddings);

    // per-target outcome slots keep the manifest order deterministic under
    // concurrent section processing
    std::vector<std::optional<SectionRecord>> slots(targets.size());
    parallel_for(targets.size(), config_.workers, [&](size_t t) {
        size_t i = targets[t];
        const ingest::Section& section = hrl.sections[i];
        try {
            rag::RetrievalResult result;
            result.query_section = section.heading;
            result.chunks = rag::mmr_retrieve(index, section.raw_text, config_.rag_k,
                                              config_.rag_lambda, *gateway_.embeddings);
            std::vector<rag::Chunk> candidates;
            candidates.reserve(result.chunks.size());
            for (const auto& [chunk, sim] : result.chunks) candidates.push_back(chunk);
            result.gate = rag::relevance_gate(candidates, section.raw_text, *gateway_.generator,
                                              config_.gate_max_tokens);
            artifacts::write_artifact(
                ctx.paths.retrieval(static_cast<int>(i), section.heading),
                artifacts::kRetrievalSchema, artifacts::retrieval_to_json(result));
        } catch (const Error& e) {
            slots[t] = SectionRecord{section.heading, StageStatus::Failed,
                                     std::string("extract: ") + e.what()};
        }
    });
    for (auto& slot : slots) {
        if (slot) ctx.section_records.push_back(std::move(*slot));
    }
    rec.note = "book: " + entry->file;
    return rec;
}

// --- neutralize (NPOV rewrite of gated chunk sentences) -------------------

StageRecord Pipeline::stage_neutralize(Ctx& ctx) {
    StageRecord rec;
    rec.name = "neutralize";
    if (ctx.route == ingest::Route::DirectTransfer) {
        rec.status = StageStatus::Skipped;
        rec.note = "direct-transfer route";
        return rec;
    }
    if (artifacts::artifact_valid(ctx.paths.augmented_hrl(), kAugmentedSchema)) {
        rec.note = "resumed from existing artifacts";
        return rec;
    }

    ingest::Article hrl = artifacts::article_from_json(artifacts::read_artifact(
        ctx.paths.article(ingest::Language::HRL), artifacts::kArticleSchema));

    struct SectionAppend {
        size_t section_index;
        std::vector<std::tuple<std::string, size_t, size_t>> items;  // text, begin, end
    };
    std::vector<std::optional<SectionAppend>> appends(hrl.sections.size());

    bool any_retrieval = false;
    npov::ExemplarSet exemplars;
    if (config_.npov_mode == npov::Mode::FewShot) {
        exemplars = npov::load_exemplars(config_.exemplar_file);
    }

    std::vector<size_t> gated;
    std::vector<json> retrievals(hrl.sections.size());
    for (size_t i = 0; i < hrl.sections.size(); ++i) {
        fs::path p = ctx.paths.retrieval(static_cast<int>(i), hrl.sections[i].heading);
        if (!artifacts::artifact_valid(p, artifacts::kRetrievalSchema)) continue;
        any_retrieval = true;
        retrievals[i] = artifacts::read_artifact(p, artifacts::kRetrievalSchema);
        if (retrievals[i].contains("gated_chunk_id")) gated.push_back(i);
    }
    if (!any_retrieval) {
        rec.status = StageStatus::Skipped;
        rec.note = "no retrieval artifacts";
        return rec;
    }

    npov::NeutralizeOptions options;
    options.max_tokens = config_.npov_max_tokens;
    options.temperature = config_.npov_temperature;

    std::vector<std::optional<SectionRecord>> slots(gated.size());
    parallel_for(gated.size(), config_.workers, [&](size_t t) {
        size_t i = gated[t];
        const ingest::Section& section = hrl.sections[i];
        try {
            const json& retrieval = retrievals[i];
            int chunk_id = retrieval["gated_chunk_id"].get<int>();
            std::string chunk_text;
            size_t begin = 0, end = 0;
            for (const auto& cj : retrieval["chunks"]) {
                if (cj["id"].get<int>() == chunk_id) {
                    chunk_text = cj["text"].get<std::string>();
                    begin = cj["char_start"].get<size_t>();
                    end = cj["char_end"].get<size_t>();
                    break;
                }
            }
            std::vector<npov::NeutralizationRecord> records;
            for (const auto& sentence : text::split_sentences(chunk_text)) {
                records.push_back(npov::neutralize(sentence, config_.npov_mode, exemplars,
                                                   *gateway_.generator, options));
            }
            artifacts::write_artifact(
                ctx.paths.npov(static_cast<int>(i), section.heading), artifacts::kNpovSchema,
                artifacts::neutralization_to_json(section.heading, records));
            SectionAppend append{i, {}};
            for (const auto& r : records) {
                append.items.emplace_back(r.neutralized, begin, end);
            }
            appends[i] = std::move(append);
        } catch (const Error& e) {
            slots[t] = SectionRecord{section.heading, StageStatus::Failed,
                                     std::string("neutralize: ") + e.what()};
        }
    });
    for (auto& slot : slots) {
        if (slot) ctx.section_records.push_back(std::move(*slot));
    }

    json appended = json::array();
    for (size_t i = 0; i < hrl.sections.size(); ++i) {
        if (!appends[i]) continue;
        ingest::Section& section = hrl.sections[i];
        json items = json::array();
        std::vector<std::string> added;
        for (const auto& [sentence, begin, end] : appends[i]->items) {
            section.sentences.push_back(sentence);
            added.push_back(sentence);
            items.push_back({{"text", sentence}, {"begin", begin}, {"end", end}});
        }
        if (!added.empty()) {
            if (!section.raw_text.empty()) section.raw_text += "\n\n";
            section.raw_text += join_sentences(added);
        }
        appended.push_back({{"section_index", i}, {"items", items}});
    }
    artifacts::write_artifact(
        ctx.paths.augmented_hrl(), kAugmentedSchema,
        json{{"article", artifacts::article_to_json(hrl)}, {"appended", appended}});
    return rec;
}

// --- map ------------------------------------------------------------------

StageRecord Pipeline::stage_map(Ctx& ctx) {
    StageRecord rec;
    rec.name = "map";
    if (artifacts::artifact_valid(ctx.paths.mappings(), artifacts::kMappingsSchema)) {
        rec.note = "resumed from existing artifacts";
        return rec;
    }

    ingest::Article lrl = artifacts::article_from_json(artifacts::read_artifact(
        ctx.paths.article(ingest::Language::LRL), artifacts::kArticleSchema));
    ingest::Article hrl;
    if (artifacts::artifact_valid(ctx.paths.augmented_hrl(), kAugmentedSchema)) {
        hrl = artifacts::article_from_json(
            artifacts::read_artifact(ctx.paths.augmented_hrl(), kAugmentedSchema)["article"]);
        rec.note = "mapped against augmented HRL article";
    } else {
        hrl = artifacts::article_from_json(artifacts::read_artifact(
            ctx.paths.article(ingest::Language::HRL), artifacts::kArticleSchema));
    }

    auto mappings = mapping::map_titles(lrl, hrl, config_.thresholds, gateway_);
    for (auto& m : mappings) {
        if (m.status == mapping::MappingStatus::TitleMapped) {
            m = mapping::confirm_content(m, lrl.sections[m.lrl_index], hrl.sections[m.hrl_index],
                                         config_.thresholds, gateway_);
        }
    }
    artifacts::write_artifact(ctx.paths.mappings(), artifacts::kMappingsSchema,
                              artifacts::mappings_to_json(mappings));
    return rec;
}

// --- transfer ---------------------------------------------------------------

StageRecord Pipeline::stage_transfer(Ctx& ctx) {
    StageRecord rec;
    rec.name = "transfer";
    if (!artifacts::artifact_valid(ctx.paths.mappings(), artifacts::kMappingsSchema)) {
        rec.status = StageStatus::Skipped;
        rec.note = "no mapping artifact";
        return rec;
    }

    ingest::Article lrl = artifacts::article_from_json(artifacts::read_artifact(
        ctx.paths.article(ingest::Language::LRL), artifacts::kArticleSchema));
    ingest::Article hrl;
    std::vector<std::vector<std::tuple<std::string, size_t, size_t>>> appended;
    if (artifacts::artifact_valid(ctx.paths.augmented_hrl(), kAugmentedSchema)) {
        json aug = artifacts::read_artifact(ctx.paths.augmented_hrl(), kAugmentedSchema);
        hrl = artifacts::article_from_json(aug["article"]);
        appended.resize(hrl.sections.size());
        for (const auto& aj : aug.value("appended", json::array())) {
            size_t idx = aj.at("section_index").get<size_t>();
            for (const auto& item : aj.value("items", json::array())) {
                appended[idx].emplace_back(item.at("text").get<std::string>(),
                                           item.at("begin").get<size_t>(),
                                           item.at("end").get<size_t>());
            }
        }
    } else {
        hrl = artifacts::article_from_json(artifacts::read_artifact(
            ctx.paths.article(ingest::Language::HRL), artifacts::kArticleSchema));
        appended.resize(hrl.sections.size());
    }

    auto mappings = artifacts::mappings_from_json(
        artifacts::read_artifact(ctx.paths.mappings(), artifacts::kMappingsSchema));

    struct Job {
        mapping::SectionMapping m;
        bool empty_section = false;
        size_t slot = 0;
    };
    std::vector<std::optional<SectionRecord>> slots(mappings.size());
    std::vector<Job> jobs;
    for (size_t mi = 0; mi < mappings.size(); ++mi) {
        const auto& m = mappings[mi];
        if (m.status == mapping::MappingStatus::ContentConfirmed) {
            jobs.push_back(Job{m, lrl.sections[m.lrl_index].sentences.empty(), mi});
        } else if (m.status == mapping::MappingStatus::TitleMapped &&
                   lrl.sections[m.lrl_index].sentences.empty()) {
            jobs.push_back(Job{m, true, mi});
        } else if (m.status == mapping::MappingStatus::TitleMapped) {
            slots[mi] = SectionRecord{m.lrl_heading, StageStatus::Skipped,
                                      "content similarity below threshold"};
        } else {
            slots[mi] = SectionRecord{m.lrl_heading, StageStatus::Skipped,
                                      "title similarity below threshold"};
        }
    }

    bool all_valid = !jobs.empty();
    for (const auto& job : jobs) {
        if (!artifacts::artifact_valid(
                ctx.paths.enriched(job.m.lrl_index, job.m.lrl_heading),
                artifacts::kEnrichedSchema)) {
            all_valid = false;
            break;
        }
    }
    if (all_valid) {
        rec.note = "resumed from existing artifacts";
        return rec;
    }
    if (jobs.empty()) {
        for (auto& slot : slots) {
            if (slot) ctx.section_records.push_back(std::move(*slot));
        }
        rec.note = "no mapped sections eligible for transfer";
        return rec;
    }

    parallel_for(jobs.size(), config_.workers, [&](size_t j) {
        const Job& job = jobs[j];
        const ingest::Section& lrl_section = lrl.sections[job.m.lrl_index];
        const ingest::Section& hrl_section = hrl.sections[job.m.hrl_index];
        try {
            auto candidates = augment::translate_candidates(
                hrl_section.sentences, *gateway_.translator, config_.short_word_cutoff);
            // tail sentences of an augmented section carry book provenance
            size_t n_book = appended[job.m.hrl_index].size();
            size_t n_total = candidates.size();
            for (size_t c = 0; c < n_total; ++c) {
                if (c + n_book >= n_total) {
                    const auto& [sent, begin, end] = appended[job.m.hrl_index][c + n_book - n_total];
                    candidates[c].origin = augment::Provenance::ExternalBook;
                    candidates[c].source = augment::SourceOffsets{begin, end};
                }
            }

            augment::EnrichedSection enriched;
            std::vector<artifacts::AnchorAudit> audits;
            std::vector<augment::CandidateSentence> accepted;
            for (const auto& c : candidates) {
                if (c.accepted) accepted.push_back(c);
            }
            if (job.empty_section) {
                enriched = augment::enrich_empty_section(job.m, lrl_section, candidates);
            } else {
                std::vector<std::vector<augment::CandidateSentence>> selections;
                for (size_t a = 0; a < lrl_section.sentences.size(); ++a) {
                    const std::string& anchor = lrl_section.sentences[a];
                    auto band = augment::select_band(anchor, accepted, *gateway_.embeddings,
                                                     config_.top_n);
                    selections.push_back(band.selected);
                    artifacts::AnchorAudit audit;
                    audit.anchor_index = static_cast<int>(a);
                    audit.anchor_text = anchor;
                    for (const auto& cand : accepted) audit.candidates.push_back(cand.lrl_text);
                    audit.similarities = band.similarities;
                    audit.mean = band.mean;
                    audit.stddev = band.stddev;
                    for (const auto& s : band.selected) audit.selected.push_back(s.lrl_text);
                    audits.push_back(std::move(audit));
                }
                enriched = augment::assemble(lrl_section, selections);
            }
            artifacts::write_artifact(ctx.paths.enriched(job.m.lrl_index, job.m.lrl_heading),
                                      artifacts::kEnrichedSchema,
                                      artifacts::enriched_to_json(enriched, audits));
            slots[job.slot] = SectionRecord{
                job.m.lrl_heading, StageStatus::Ok,
                "added " + std::to_string(enriched.added.size()) + " sentences"};
        } catch (const Error& e) {
            slots[job.slot] = SectionRecord{job.m.lrl_heading, StageStatus::Failed,
                                            std::string("transfer: ") + e.what()};
        }
    });
    for (auto& slot : slots) {
        if (slot) ctx.section_records.push_back(std::move(*slot));
    }
    return rec;
}

// --- evaluate ----------------------------------------------------------------

StageRecord Pipeline::stage_evaluate(Ctx& ctx) {
    StageRecord rec;
    rec.name = "evaluate";
    if (artifacts::artifact_valid(ctx.paths.evaluation(), artifacts::kEvaluationSchema)) {
        rec.note = "resumed from existing artifacts";
        return rec;
    }

    fs::path enriched_dir = ctx.paths.root / "enriched";
    std::vector<fs::path> files;
    if (fs::exists(enriched_dir)) {
        for (const auto& e : fs::directory_iterator(enriched_dir)) {
            if (e.path().extension() == ".json") files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        rec.status = StageStatus::Skipped;
        rec.note = "no enriched sections to evaluate";
        return rec;
    }

    auto reverse_translate = [&](const std::vector<std::string>& sentences,
                                 int* skipped) -> std::string {
        std::vector<std::string> out;
        for (const auto& s : sentences) {
            try {
                out.push_back(gateway_.translator->translate(s, gateway::Direction::LrlToHrl));
            } catch (const GatewayError&) {
                ++*skipped;  // sentence-level failure: skip and count
            }
        }
        return join_sentences(out);
    };

    json sections = json::array();
    for (const auto& file : files) {
        augment::EnrichedSection s = artifacts::enriched_from_json(
            artifacts::read_artifact(file, artifacts::kEnrichedSchema));
        int skipped = 0;
        std::string c_old_hrl = reverse_translate(s.existing, &skipped);
        std::vector<std::string> all = s.existing;
        all.insert(all.end(), s.added.begin(), s.added.end());
        std::string c_new_hrl = reverse_translate(all, &skipped);

        int from_transfer = 0, from_book = 0;
        for (const auto& prov : s.provenance) {
            if (prov.origin == augment::Provenance::ExternalBook) ++from_book;
            else ++from_transfer;
        }

        quality::QualityScores old_scores = score_or_zero(c_old_hrl, config_.page_size_divisor);
        quality::QualityScores new_scores = score_or_zero(c_new_hrl, config_.page_size_divisor);
        sections.push_back({{"slug", file.stem().string()},
                            {"heading", s.heading},
                            {"existing", s.existing},
                            {"added", s.added},
                            {"provenance",
                             {{"direct_transfer", from_transfer}, {"external_book", from_book}}},
                            {"c_old_hrl", c_old_hrl},
                            {"c_new_hrl", c_new_hrl},
                            {"skipped_translations", skipped},
                            {"scores_old", artifacts::scores_to_json(old_scores)},
                            {"scores_new", artifacts::scores_to_json(new_scores)}});
    }
    artifacts::write_artifact(ctx.paths.evaluation(), artifacts::kEvaluationSchema,
                              json{{"wikidata_id", ctx.wikidata_id}, {"sections", sections}});
    return rec;
}

// --- report -------------------------------------------------------------------

namespace {

struct MetricSeries {
    std::vector<double> old_values;
    std::vector<double> new_values;
};

json series_to_json(const MetricSeries& s) {
    auto [om, os] = quality::mean_stddev(s.old_values);
    auto [nm, ns] = quality::mean_stddev(s.new_values);
    return json{{"old", {{"mean", om}, {"stddev", os}, {"count", s.old_values.size()}}},
                {"new", {{"mean", nm}, {"stddev", ns}, {"count", s.new_values.size()}}},
                {"delta_mean", nm - om}};
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {"informativeness", "readability",
                                                   "understandability", "quality"};
    return names;
}

json build_run_report(const std::string& run_id, const std::string& quality_class,
                      const std::string& route, const json& evaluation) {
    std::map<std::string, MetricSeries> series;
    std::vector<double> info_old_per_section;
    std::vector<double> info_new_per_section;
    json per_section = json::array();
    for (const auto& sec : evaluation.at("sections")) {
        json row = {{"heading", sec.at("heading")},
                    {"added_sentences", sec.at("added").size()},
                    {"provenance", sec.value("provenance", json::object())}};
        for (const auto& name : metric_names()) {
            double old_v = sec.at("scores_old").at(name).get<double>();
            double new_v = sec.at("scores_new").at(name).get<double>();
            series[name].old_values.push_back(old_v);
            series[name].new_values.push_back(new_v);
            row[name] = {{"old", old_v}, {"new", new_v}, {"delta", new_v - old_v}};
        }
        info_old_per_section.push_back(sec.at("scores_old").at("informativeness").get<double>());
        info_new_per_section.push_back(sec.at("scores_new").at("informativeness").get<double>());
        per_section.push_back(std::move(row));
    }

    json metrics;
    for (const auto& name : metric_names()) metrics[name] = series_to_json(series[name]);

    // informativeness ranges keyed by the old score; the same sections'
    // new scores are reported per group
    auto groups = quality::bin_informativeness(info_old_per_section);
    json bins;
    const char* bin_names[] = {"group1_0_50", "group2_50_100", "group3_100_plus"};
    for (int g = 0; g < 3; ++g) {
        std::vector<double> new_in_group;
        for (size_t i = 0; i < info_old_per_section.size(); ++i) {
            double v = info_old_per_section[i];
            int gi = v < 50.0 ? 0 : (v < 100.0 ? 1 : 2);
            if (gi == g) new_in_group.push_back(info_new_per_section[i]);
        }
        auto [nm, ns] = quality::mean_stddev(new_in_group);
        bins[bin_names[g]] = {{"old",
                               {{"mean", groups[g].mean},
                                {"stddev", groups[g].stddev},
                                {"count", groups[g].scores.size()}}},
                              {"new", {{"mean", nm}, {"stddev", ns}, {"count", new_in_group.size()}}}};
    }

    return json{{"run_id", run_id},
                {"quality_class", quality_class},
                {"route", route},
                {"section_count", evaluation.at("sections").size()},
                {"metrics", metrics},
                {"informativeness_bins", bins},
                {"sections", per_section}};
}

}  // namespace

StageRecord Pipeline::stage_report(Ctx& ctx) {
    StageRecord rec;
    rec.name = "report";
    if (!artifacts::artifact_valid(ctx.paths.evaluation(), artifacts::kEvaluationSchema)) {
        rec.status = StageStatus::Skipped;
        rec.note = "no evaluation artifact";
        return rec;
    }
    json evaluation = artifacts::read_artifact(ctx.paths.evaluation(), artifacts::kEvaluationSchema);

    std::string quality_class =
        ctx.quality ? ingest::quality_class_name(ctx.quality->class_hrl) : "unknown";
    json report = build_run_report(ctx.wikidata_id, quality_class, ingest::route_name(ctx.route),
                                   evaluation);
    if (artifacts::artifact_valid(ctx.paths.mappings(), artifacts::kMappingsSchema)) {
        int title_mapped = 0, confirmed = 0, rejected = 0;
        for (const auto& m : artifacts::mappings_from_json(artifacts::read_artifact(
                 ctx.paths.mappings(), artifacts::kMappingsSchema))) {
            switch (m.status) {
                case mapping::MappingStatus::TitleMapped: ++title_mapped; break;
                case mapping::MappingStatus::ContentConfirmed: ++confirmed; break;
                case mapping::MappingStatus::Rejected: ++rejected; break;
            }
        }
        report["mappings"] = {{"title_mapped", title_mapped},
                              {"content_confirmed", confirmed},
                              {"rejected", rejected}};
    }
    artifacts::write_artifact(ctx.paths.report_json(), artifacts::kReportSchema, report);

    std::ofstream txt(ctx.paths.report_text());
    txt << render_report_text(report);
    return rec;
}

// --- run_evaluate (single run dir or a directory of runs) ---------------------

json Pipeline::run_evaluate(const fs::path& artifact_dir) {
    std::vector<fs::path> run_dirs;
    if (fs::exists(artifact_dir / "manifest.json")) {
        run_dirs.push_back(artifact_dir);
    } else if (fs::exists(artifact_dir)) {
        for (const auto& e : fs::directory_iterator(artifact_dir)) {
            if (e.is_directory() && fs::exists(e.path() / "manifest.json")) {
                run_dirs.push_back(e.path());
            }
        }
        std::sort(run_dirs.begin(), run_dirs.end());
    }
    if (run_dirs.empty()) {
        throw MissingArtifactsError("no run manifests under " + artifact_dir.string());
    }

    json runs = json::array();
    std::map<std::string, std::map<std::string, MetricSeries>> group_series;
    std::map<std::string, int> group_counts;
    for (const auto& dir : run_dirs) {
        RunManifest manifest = manifest_from_json(
            artifacts::read_artifact(dir / "manifest.json", artifacts::kManifestSchema));
        Ctx ctx(manifest.wikidata_id, dir);
        if (!config_.quality_records.empty() && fs::exists(config_.quality_records)) {
            ctx.quality = ingest::find_quality_record(
                ingest::load_quality_records(config_.quality_records), manifest.wikidata_id);
            if (ctx.quality) ctx.route = ingest::route_by_quality(ctx.quality->class_hrl);
        }
        stage_evaluate(ctx);
        stage_report(ctx);
        if (!artifacts::artifact_valid(ctx.paths.report_json(), artifacts::kReportSchema)) {
            continue;  // nothing evaluable in this run
        }
        json report = artifacts::read_artifact(ctx.paths.report_json(), artifacts::kReportSchema);
        report["quality_class"] = manifest.quality_class;
        runs.push_back(report);

        std::string group = manifest.quality_class == "FA" ? "FA" : "non-FA";
        ++group_counts[group];
        for (const auto& name : metric_names()) {
            // group statistics over per-article means
            group_series[group][name].old_values.push_back(
                report["metrics"][name]["old"]["mean"].get<double>());
            group_series[group][name].new_values.push_back(
                report["metrics"][name]["new"]["mean"].get<double>());
        }
    }

    json groups;
    for (const auto& [group, metrics] : group_series) {
        json m;
        for (const auto& [name, s] : metrics) m[name] = series_to_json(s);
        groups[group] = {{"articles", group_counts[group]}, {"metrics", m}};
    }
    json summary = {{"runs", runs}, {"groups", groups}};

    if (run_dirs.size() > 1) {
        artifacts::write_artifact(artifact_dir / "report.json", artifacts::kReportSchema, summary);
        std::ofstream txt(artifact_dir / "report.txt");
        txt << render_report_text(summary);
    }
    return summary;
}

std::string render_report_text(const json& report) {
    std::string out;
    char line[256];
    auto add_metrics = [&](const json& metrics) {
        std::snprintf(line, sizeof(line), "  %-18s %12s %12s %12s\n", "metric", "c_old", "c_new",
                      "delta");
        out += line;
        for (const auto& name : metric_names()) {
            if (!metrics.contains(name)) continue;
            double o = metrics[name]["old"]["mean"].get<double>();
            double n = metrics[name]["new"]["mean"].get<double>();
            std::snprintf(line, sizeof(line), "  %-18s %12.4f %12.4f %12.4f\n", name.c_str(), o, n,
                          n - o);
            out += line;
        }
    };

    if (report.contains("runs")) {
        out += "enrichment report (" + std::to_string(report["runs"].size()) + " articles)\n";
        const json groups = report.value("groups", json::object());
        for (const auto& [group, gj] : groups.items()) {
            out += "\ngroup " + group + " (" + std::to_string(gj["articles"].get<int>()) +
                   " articles)\n";
            add_metrics(gj["metrics"]);
        }
        for (const auto& run : report["runs"]) {
            out += "\narticle " + run["run_id"].get<std::string>() + " [" +
                   run.value("quality_class", "?") + "]\n";
            add_metrics(run["metrics"]);
        }
    } else {
        out += "enrichment report for " + report.value("run_id", std::string("?")) + " [" +
               report.value("quality_class", std::string("?")) + "]\n";
        add_metrics(report.value("metrics", json::object()));
        if (report.contains("informativeness_bins")) {
            out += "\ninformativeness ranges (by c_old score)\n";
            for (const auto& [name, bj] : report["informativeness_bins"].items()) {
                std::snprintf(line, sizeof(line),
                              "  %-16s old %8.2f (%.2f) n=%zu | new %8.2f (%.2f)\n",
                              name.c_str(), bj["old"]["mean"].get<double>(),
                              bj["old"]["stddev"].get<double>(),
                              bj["old"]["count"].get<size_t>(), bj["new"]["mean"].get<double>(),
                              bj["new"]["stddev"].get<double>());
                out += line;
            }
        }
    }
    return out;
}

}  // namespace wikigap::pipeline
