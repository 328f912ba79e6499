#include "wikigap/mapper.hpp"

#include <numeric>

#include "wikigap/errors.hpp"

namespace wikigap::mapping {

using gateway::ProfileId;
using ingest::Article;
using ingest::Section;

const char* mapping_status_name(MappingStatus status) {
    switch (status) {
        case MappingStatus::TitleMapped: return "title_mapped";
        case MappingStatus::ContentConfirmed: return "content_confirmed";
        case MappingStatus::Rejected: return "rejected";
    }
    return "?";
}

MappingStatus mapping_status_from_name(const std::string& name) {
    if (name == "title_mapped") return MappingStatus::TitleMapped;
    if (name == "content_confirmed") return MappingStatus::ContentConfirmed;
    if (name == "rejected") return MappingStatus::Rejected;
    throw ConfigError("unknown mapping status: " + name);
}

std::vector<SectionMapping> map_titles(const Article& lrl, const Article& hrl,
                                       const Thresholds& thresholds, gateway::Gateway& gw) {
    if (lrl.sections.empty() || hrl.sections.empty()) {
        throw EmptyArticleError("map_titles: both articles need at least one section");
    }

    std::vector<std::string> lrl_translated;
    lrl_translated.reserve(lrl.sections.size());
    for (const auto& s : lrl.sections) {
        lrl_translated.push_back(gw.translator->translate(s.heading, gateway::Direction::LrlToHrl));
    }
    std::vector<std::string> hrl_headings;
    hrl_headings.reserve(hrl.sections.size());
    for (const auto& s : hrl.sections) hrl_headings.push_back(s.heading);

    auto lrl_vecs = gw.embeddings->embed(lrl_translated, ProfileId::TitleMap);
    auto hrl_vecs = gw.embeddings->embed(hrl_headings, ProfileId::TitleMap);

    std::vector<SectionMapping> mappings;
    mappings.reserve(lrl.sections.size());
    for (size_t i = 0; i < lrl.sections.size(); ++i) {
        int best = 0;
        double best_sim = -2.0;
        for (size_t j = 0; j < hrl.sections.size(); ++j) {
            double sim = gateway::cosine_similarity(lrl_vecs[i], hrl_vecs[j]);
            if (sim > best_sim) {  // strict: ties keep the earliest HRL section
                best_sim = sim;
                best = static_cast<int>(j);
            }
        }
        SectionMapping m;
        m.lrl_index = static_cast<int>(i);
        m.hrl_index = best;
        m.lrl_heading = lrl.sections[i].heading;
        m.hrl_heading = hrl.sections[best].heading;
        m.title_similarity = best_sim;
        m.status = best_sim >= thresholds.title_threshold ? MappingStatus::TitleMapped
                                                          : MappingStatus::Rejected;
        mappings.push_back(std::move(m));
    }
    return mappings;
}

SectionMapping confirm_content(SectionMapping mapping, const Section& lrl, const Section& hrl,
                               const Thresholds& thresholds, gateway::Gateway& gw) {
    if (mapping.status != MappingStatus::TitleMapped) return mapping;
    if (lrl.raw_text.empty() || hrl.raw_text.empty()) {
        mapping.note = "content similarity skipped: empty section";
        return mapping;
    }
    auto vecs = gw.embeddings->embed({lrl.raw_text, hrl.raw_text}, ProfileId::ContentMap);
    double sim = gateway::cosine_similarity(vecs[0], vecs[1]);
    mapping.content_similarity = sim;
    if (sim >= thresholds.content_threshold()) {
        mapping.status = MappingStatus::ContentConfirmed;
    }
    return mapping;
}

double recompute_title_threshold(const std::vector<double>& similarities) {
    if (similarities.empty()) throw EmptyInputError("recompute_title_threshold: no similarities");
    double sum = std::accumulate(similarities.begin(), similarities.end(), 0.0);
    return sum / static_cast<double>(similarities.size());
}

}  // namespace wikigap::mapping
