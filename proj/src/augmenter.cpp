#include "wikigap/augmenter.hpp"

#include <algorithm>
#include <cmath>

#include "wikigap/errors.hpp"
#include "wikigap/text.hpp"

namespace wikigap::augment {

using gateway::ProfileId;

const char* provenance_name(Provenance p) {
    return p == Provenance::DirectTransfer ? "direct_transfer" : "external_book";
}

int count_words(const std::string& s) {
    return static_cast<int>(text::word_tokens(s).size());
}

std::vector<CandidateSentence> translate_candidates(const std::vector<std::string>& hrl_sentences,
                                                    gateway::TranslationClient& translator,
                                                    int short_word_cutoff) {
    std::vector<CandidateSentence> out;
    out.reserve(hrl_sentences.size());
    for (const auto& hrl : hrl_sentences) {
        CandidateSentence c;
        c.hrl_text = hrl;
        try {
            c.lrl_text = translator.translate(hrl, gateway::Direction::HrlToLrl);
            c.word_count = count_words(c.lrl_text);
            c.accepted = c.word_count > short_word_cutoff;
        } catch (const GatewayError&) {
            c.translation_failed = true;
            c.accepted = false;
        }
        out.push_back(std::move(c));
    }
    return out;
}

BandSelection select_band(const std::string& anchor,
                          const std::vector<CandidateSentence>& candidates,
                          gateway::EmbeddingClient& embedder, int top_n) {
    if (anchor.empty()) throw InvalidParamsError("select_band: empty anchor");
    for (const auto& c : candidates) {
        if (!c.accepted) throw InvalidParamsError("select_band: candidate not accepted");
    }

    BandSelection result;
    if (candidates.empty()) return result;
    if (candidates.size() < 2) {
        // stddev undefined; return everything
        result.degenerate = true;
        result.selected = candidates;
        auto vecs = embedder.embed({anchor, candidates[0].lrl_text}, ProfileId::Augment);
        result.similarities.push_back(gateway::cosine_similarity(vecs[0], vecs[1]));
        result.mean = result.similarities[0];
        return result;
    }

    std::vector<std::string> texts;
    texts.reserve(candidates.size() + 1);
    texts.push_back(anchor);
    for (const auto& c : candidates) texts.push_back(c.lrl_text);
    auto vecs = embedder.embed(texts, ProfileId::Augment);

    result.similarities.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        result.similarities.push_back(gateway::cosine_similarity(vecs[0], vecs[i + 1]));
    }

    auto [min_it, max_it] =
        std::minmax_element(result.similarities.begin(), result.similarities.end());
    if (*min_it == *max_it) {
        // all scores identical: stddev is zero and the band keeps everything,
        // so the first top_n candidates come back in input order
        result.mean = *min_it;
        result.stddev = 0.0;
        size_t take = std::min(candidates.size(), static_cast<size_t>(top_n));
        result.selected.assign(candidates.begin(), candidates.begin() + take);
        return result;
    }

    double sum = 0.0;
    for (double s : result.similarities) sum += s;
    double mean = sum / static_cast<double>(result.similarities.size());
    double var = 0.0;
    for (double s : result.similarities) var += (s - mean) * (s - mean);
    var /= static_cast<double>(result.similarities.size());
    result.mean = mean;
    result.stddev = std::sqrt(var);

    double lo = mean;
    double hi = mean + result.stddev;
    std::vector<size_t> kept;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (result.similarities[i] >= lo && result.similarities[i] <= hi) kept.push_back(i);
    }
    // descending by similarity; stable so equal scores keep input order
    std::stable_sort(kept.begin(), kept.end(), [&](size_t a, size_t b) {
        return result.similarities[a] > result.similarities[b];
    });
    if (kept.size() > static_cast<size_t>(top_n)) kept.resize(static_cast<size_t>(top_n));
    for (size_t i : kept) result.selected.push_back(candidates[i]);
    return result;
}

namespace {

std::string dedup_key(const std::string& s) {
    return text::normalize_whitespace(s);
}

}  // namespace

EnrichedSection assemble(const Section& section,
                         const std::vector<std::vector<CandidateSentence>>& per_anchor_selections) {
    EnrichedSection out;
    out.heading = section.heading;
    out.existing = section.sentences;

    std::set<std::string> existing_keys;
    for (const auto& s : section.sentences) existing_keys.insert(dedup_key(s));

    std::vector<std::string> added_keys;
    for (size_t anchor = 0; anchor < per_anchor_selections.size(); ++anchor) {
        for (const auto& cand : per_anchor_selections[anchor]) {
            std::string key = dedup_key(cand.lrl_text);
            if (existing_keys.count(key)) continue;
            auto it = std::find(added_keys.begin(), added_keys.end(), key);
            if (it != added_keys.end()) {
                // already appended for an earlier anchor; record the extra match
                out.provenance[static_cast<size_t>(it - added_keys.begin())].anchors.insert(
                    static_cast<int>(anchor));
                continue;
            }
            added_keys.push_back(key);
            out.added.push_back(cand.lrl_text);
            AddedProvenance prov;
            prov.origin = cand.origin;
            prov.source = cand.source;
            prov.anchors.insert(static_cast<int>(anchor));
            out.provenance.push_back(std::move(prov));
        }
    }
    return out;
}

EnrichedSection enrich_empty_section(const mapping::SectionMapping& mapping, const Section& lrl,
                                     const std::vector<CandidateSentence>& candidates) {
    if (!lrl.sentences.empty()) {
        throw InvalidParamsError("enrich_empty_section: LRL section has sentences");
    }
    if (mapping.status == mapping::MappingStatus::Rejected) {
        throw InvalidParamsError("enrich_empty_section: mapping was rejected");
    }
    EnrichedSection out;
    out.heading = lrl.heading;

    std::set<std::string> seen;
    for (const auto& cand : candidates) {
        if (!cand.accepted) continue;
        std::string key = dedup_key(cand.lrl_text);
        if (!seen.insert(key).second) continue;
        out.added.push_back(cand.lrl_text);
        AddedProvenance prov;
        prov.origin = cand.origin;
        prov.source = cand.source;
        out.provenance.push_back(std::move(prov));
    }
    return out;
}

}  // namespace wikigap::augment
