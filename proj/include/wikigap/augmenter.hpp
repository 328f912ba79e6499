#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wikigap/article.hpp"
#include "wikigap/gateway.hpp"
#include "wikigap/mapper.hpp"

namespace wikigap::augment {

using ingest::Section;

enum class Provenance { DirectTransfer, ExternalBook };

const char* provenance_name(Provenance p);

struct SourceOffsets {
    size_t begin = 0;
    size_t end = 0;  // character range in the source book
};

struct CandidateSentence {
    std::string hrl_text;
    std::string lrl_text;
    int word_count = 0;
    bool accepted = false;
    bool translation_failed = false;
    Provenance origin = Provenance::DirectTransfer;
    std::optional<SourceOffsets> source;
    std::set<int> matched_anchors;
};

// Whitespace tokens after dropping punctuation-only tokens.
int count_words(const std::string& s);

// Translates each HRL sentence to LRL; translations of `short_word_cutoff`
// words or fewer are rejected, and per-sentence translation failures are
// flagged rather than aborting the batch.
std::vector<CandidateSentence> translate_candidates(const std::vector<std::string>& hrl_sentences,
                                                    gateway::TranslationClient& translator,
                                                    int short_word_cutoff = 2);

struct BandSelection {
    std::vector<CandidateSentence> selected;  // descending similarity, at most top_n
    std::vector<double> similarities;         // one per input candidate, for the artifact
    double mean = 0.0;
    double stddev = 0.0;  // population
    bool degenerate = false;
};

// Embeds the anchor and all candidate LRL texts with the Augment profile and
// keeps candidates whose similarity s satisfies mean <= s <= mean + stddev,
// sorted descending, first `top_n` returned. Fewer than two candidates make
// the band degenerate: all candidates are returned unfiltered.
BandSelection select_band(const std::string& anchor,
                          const std::vector<CandidateSentence>& candidates,
                          gateway::EmbeddingClient& embedder, int top_n = 3);

struct AddedProvenance {
    Provenance origin = Provenance::DirectTransfer;
    std::optional<SourceOffsets> source;
    std::set<int> anchors;
};

struct EnrichedSection {
    std::string heading;
    std::vector<std::string> existing;
    std::vector<std::string> added;
    std::vector<AddedProvenance> provenance;  // parallel to `added`
};

// Union of the per-anchor selections in first-occurrence order. A sentence
// selected for several anchors is appended once; sentences equal to an
// existing one (after whitespace normalization) are dropped.
EnrichedSection assemble(const Section& section,
                         const std::vector<std::vector<CandidateSentence>>& per_anchor_selections);

// No anchors to match when the LRL section has no sentences: every accepted
// candidate is appended in source order.
EnrichedSection enrich_empty_section(const mapping::SectionMapping& mapping, const Section& lrl,
                                     const std::vector<CandidateSentence>& candidates);

}  // namespace wikigap::augment
