#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wikigap/article.hpp"
#include "wikigap/gateway.hpp"

namespace wikigap::mapping {

using ingest::Article;
using ingest::Section;

enum class MappingStatus { TitleMapped, ContentConfirmed, Rejected };

const char* mapping_status_name(MappingStatus status);
MappingStatus mapping_status_from_name(const std::string& name);

struct SectionMapping {
    int lrl_index = -1;
    int hrl_index = -1;
    std::string lrl_heading;
    std::string hrl_heading;
    double title_similarity = 0.0;
    std::optional<double> content_similarity;
    MappingStatus status = MappingStatus::Rejected;
    std::string note;  // e.g. empty-section flag from content confirmation
};

struct Thresholds {
    double title_threshold = 0.44;
    double content_mean = 0.89;
    double content_std = 0.06;

    double content_threshold() const { return content_mean + content_std; }
};

// One mapping per LRL section: the heading is translated LRL->HRL, both sides
// embedded with the TitleMap profile, and the argmax HRL section selected
// (ties break to the earliest HRL section). Status is TitleMapped iff the
// best similarity reaches the title threshold, Rejected otherwise.
std::vector<SectionMapping> map_titles(const Article& lrl, const Article& hrl,
                                       const Thresholds& thresholds, gateway::Gateway& gw);

// Embeds both sections' raw text with the ContentMap profile and promotes the
// mapping to ContentConfirmed iff similarity >= content_mean + content_std.
// An empty side leaves the mapping TitleMapped with a note.
SectionMapping confirm_content(SectionMapping mapping, const Section& lrl, const Section& hrl,
                               const Thresholds& thresholds, gateway::Gateway& gw);

// Corpus-mean utility for recalibrating the title threshold from observed
// similarities.
double recompute_title_threshold(const std::vector<double>& similarities);

}  // namespace wikigap::mapping
