// wikigap CLI: enrich low-resource Wikipedia sections from their
// high-resource counterparts, stage by stage or end to end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wikigap/errors.hpp"
#include "wikigap/pipeline.hpp"
#include "wikigap/quality.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

wikigap::pipeline::PipelineConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return wikigap::pipeline::default_config();
    return wikigap::pipeline::load_config(config_path);
}

int cmd_enrich(const std::string& id, const std::string& config_path) {
    wikigap::pipeline::Pipeline pipeline(load_or_default(config_path));
    wikigap::pipeline::RunManifest manifest = pipeline.run_enrich(id);
    for (const auto& stage : manifest.stages) {
        std::printf("%-12s %-8s %s\n", stage.name.c_str(),
                    wikigap::pipeline::stage_status_name(stage.status), stage.note.c_str());
    }
    std::printf("artifacts: %s\n", pipeline.run_dir(id).string().c_str());
    return manifest.any_failure() ? kExitPartial : kExitOk;
}

int cmd_stage(const std::string& stage, const std::string& id, const std::string& config_path) {
    wikigap::pipeline::Pipeline pipeline(load_or_default(config_path));
    wikigap::pipeline::StageRecord rec = pipeline.run_stage(id, stage);
    std::printf("%-12s %-8s %s\n", rec.name.c_str(),
                wikigap::pipeline::stage_status_name(rec.status), rec.note.c_str());
    return rec.status == wikigap::pipeline::StageStatus::Failed ? kExitPartial : kExitOk;
}

int cmd_evaluate(const std::string& run_dir, const std::string& config_path) {
    wikigap::pipeline::Pipeline pipeline(load_or_default(config_path));
    nlohmann::json report = pipeline.run_evaluate(run_dir);
    std::cout << wikigap::pipeline::render_report_text(report);
    return kExitOk;
}

int cmd_score(const std::string& input, double divisor) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw wikigap::IoError("cannot open input file: " + input);
    std::ostringstream buf;
    buf << in.rdbuf();
    wikigap::quality::QualityScores scores = wikigap::quality::score_text(buf.str(), divisor);
    std::cout << wikigap::artifacts::scores_to_json(scores).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wikigap: cross-lingual Wikipedia section enrichment pipeline"};
    app.require_subcommand(1);

    std::string id, config_path, run_dir, input;
    double divisor = 100.0;

    auto* enrich = app.add_subcommand("enrich", "run the full enrichment pipeline for one article");
    enrich->add_option("--id", id, "wikidata id, e.g. Q11459")->required();
    enrich->add_option("--config", config_path, "pipeline config JSON");

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a run directory (or directory of runs)");
    evaluate->add_option("--run", run_dir, "artifact directory")->required();
    evaluate->add_option("--config", config_path, "pipeline config JSON");

    struct StageCmd {
        const char* name;
        const char* stage;
        const char* help;
    };
    const StageCmd stage_cmds[] = {
        {"ingest", "ingest", "fetch and normalize both language editions"},
        {"extract", "extract", "retrieve book chunks per HRL section"},
        {"neutralize", "neutralize", "rewrite gated chunk sentences in neutral style"},
        {"map-sections", "map", "map LRL sections to HRL sections"},
        {"transfer", "transfer", "translate, band-select, and assemble additions"},
        {"report", "report", "render the per-run report"},
    };
    std::vector<CLI::App*> stage_subs;
    for (const auto& sc : stage_cmds) {
        auto* sub = app.add_subcommand(sc.name, sc.help);
        sub->add_option("--id", id, "wikidata id")->required();
        sub->add_option("--config", config_path, "pipeline config JSON");
        stage_subs.push_back(sub);
    }

    auto* score = app.add_subcommand("score", "print quality scores for a text file");
    score->add_option("--in", input, "UTF-8 text file")->required();
    score->add_option("--divisor", divisor, "page-size divisor (default 100)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enrich->parsed()) return cmd_enrich(id, config_path);
        if (evaluate->parsed()) return cmd_evaluate(run_dir, config_path);
        for (size_t i = 0; i < stage_subs.size(); ++i) {
            if (stage_subs[i]->parsed()) return cmd_stage(stage_cmds[i].stage, id, config_path);
        }
        if (score->parsed()) return cmd_score(input, divisor);
    } catch (const wikigap::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFatal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitFatal;
    }
    return kExitOk;
}
