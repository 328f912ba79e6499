#include "wikigap/rag.hpp"

#include <algorithm>
#include <cctype>

#include "wikigap/errors.hpp"
#include "wikigap/prompts.hpp"
#include "wikigap/text.hpp"

namespace wikigap::rag {

using gateway::ProfileId;

namespace {

enum SeparatorLevel { kBlankLine = 0, kNewline, kSentence, kSpace, kCharacter };

// Appends the end offsets of the separator-delimited pieces of [lo, hi),
// recursing to finer separators while a piece exceeds `size`. Separators stay
// attached to the left piece so the pieces partition the span. Oversized
// spans with no separators are emitted whole; assembly cuts them mid-unit.
void atomize(const std::string& s, size_t lo, size_t hi, int level, size_t size,
             std::vector<size_t>& ends) {
    if (hi - lo <= size || level >= kCharacter) {
        ends.push_back(hi);
        return;
    }

    std::vector<size_t> piece_ends;
    if (level == kBlankLine || level == kNewline) {
        size_t min_run = level == kBlankLine ? 2 : 1;
        size_t i = lo;
        while (i < hi) {
            if (s[i] == '\n') {
                size_t run = i;
                while (run < hi && s[run] == '\n') ++run;
                if (run - i >= min_run && run < hi) piece_ends.push_back(run);
                i = run;
            } else {
                ++i;
            }
        }
    } else if (level == kSentence) {
        for (size_t brk : text::sentence_break_offsets(std::string_view(s).substr(lo, hi - lo))) {
            if (lo + brk < hi) piece_ends.push_back(lo + brk);
        }
    } else {  // kSpace
        size_t i = lo;
        while (i < hi) {
            if (s[i] == ' ') {
                size_t run = i;
                while (run < hi && s[run] == ' ') ++run;
                if (run < hi) piece_ends.push_back(run);
                i = run;
            } else {
                ++i;
            }
        }
    }
    piece_ends.push_back(hi);

    if (piece_ends.size() == 1) {
        atomize(s, lo, hi, level + 1, size, ends);
        return;
    }
    size_t piece_lo = lo;
    for (size_t piece_hi : piece_ends) {
        if (piece_hi - piece_lo <= size) {
            ends.push_back(piece_hi);
        } else {
            atomize(s, piece_lo, piece_hi, level + 1, size, ends);
        }
        piece_lo = piece_hi;
    }
}

}  // namespace

std::vector<Chunk> split_chunks(const BookDocument& doc, int size, int overlap) {
    if (size <= 0 || overlap < 0 || overlap >= size) {
        throw InvalidParamsError("split_chunks: require 0 <= overlap < size");
    }
    if (doc.text.empty()) throw InvalidParamsError("split_chunks: empty document");

    const std::string& s = doc.text;
    const size_t n = s.size();
    const size_t chunk_size = static_cast<size_t>(size);
    const size_t chunk_overlap = static_cast<size_t>(overlap);

    std::vector<size_t> boundaries;
    atomize(s, 0, n, kBlankLine, chunk_size, boundaries);

    std::vector<Chunk> chunks;
    size_t start = 0;
    size_t prev_end = 0;
    size_t boundary_lo = 0;  // boundaries are sorted; scan forward once
    while (prev_end < n) {
        // largest atom end <= start + size that still makes progress
        size_t end = 0;
        while (boundary_lo < boundaries.size() && boundaries[boundary_lo] <= prev_end) {
            ++boundary_lo;
        }
        for (size_t b = boundary_lo;
             b < boundaries.size() && boundaries[b] - start <= chunk_size; ++b) {
            end = boundaries[b];
        }
        if (end == 0) end = std::min(start + chunk_size, n);  // forced mid-unit cut

        Chunk c;
        c.id = static_cast<int>(chunks.size());
        c.char_start = start;
        c.char_end = end;
        c.text = s.substr(start, end - start);
        chunks.push_back(std::move(c));

        prev_end = end;
        if (end >= n) break;
        start = end > chunk_overlap ? end - chunk_overlap : 0;
    }
    return chunks;
}

VectorIndex VectorIndex::build(std::vector<Chunk> chunks, gateway::EmbeddingClient& embedder) {
    if (chunks.empty()) throw EmptyIndexError("build_index: no chunks");
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embedder.embed(texts, ProfileId::RagIndex);
    for (size_t i = 0; i < chunks.size(); ++i) chunks[i].embedding = std::move(vectors[i]);
    VectorIndex index;
    index.chunks_ = std::move(chunks);
    return index;
}

const Chunk& VectorIndex::chunk_by_id(int id) const {
    for (const auto& c : chunks_) {
        if (c.id == id) return c;
    }
    throw InvalidParamsError("no chunk with id " + std::to_string(id));
}

std::vector<std::pair<int, double>> VectorIndex::top_k(const gateway::Vector& query,
                                                       int k) const {
    std::vector<std::pair<int, double>> scored;
    scored.reserve(chunks_.size());
    for (const auto& c : chunks_) {
        scored.emplace_back(c.id, gateway::cosine_similarity(query, c.embedding));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (k >= 0 && scored.size() > static_cast<size_t>(k)) scored.resize(static_cast<size_t>(k));
    return scored;
}

std::vector<std::pair<Chunk, double>> mmr_retrieve(const VectorIndex& index,
                                                   const std::string& query, int k, double lambda,
                                                   gateway::EmbeddingClient& embedder) {
    if (k < 1) throw InvalidParamsError("mmr_retrieve: k must be >= 1");
    if (lambda < 0.0 || lambda > 1.0) throw InvalidParamsError("mmr_retrieve: lambda in [0,1]");
    if (index.size() == 0) throw EmptyIndexError("mmr_retrieve: empty index");

    auto query_vec = embedder.embed({query}, ProfileId::RagIndex).at(0);
    const auto& chunks = index.chunks();
    std::vector<double> query_sim(chunks.size());
    for (size_t i = 0; i < chunks.size(); ++i) {
        query_sim[i] = gateway::cosine_similarity(query_vec, chunks[i].embedding);
    }

    size_t want = std::min(static_cast<size_t>(k), chunks.size());
    std::vector<bool> picked(chunks.size(), false);
    std::vector<size_t> selection;
    while (selection.size() < want) {
        double best_score = 0.0;
        size_t best = chunks.size();
        for (size_t i = 0; i < chunks.size(); ++i) {
            if (picked[i]) continue;
            double score;
            if (selection.empty()) {
                score = query_sim[i];  // first pick is the pure query argmax
            } else {
                double max_sel = -2.0;
                for (size_t s : selection) {
                    max_sel = std::max(max_sel, gateway::cosine_similarity(
                                                    chunks[i].embedding, chunks[s].embedding));
                }
                score = lambda * query_sim[i] - (1.0 - lambda) * max_sel;
            }
            if (best == chunks.size() || score > best_score) {  // ties keep the lower id
                best_score = score;
                best = i;
            }
        }
        picked[best] = true;
        selection.push_back(best);
    }

    std::vector<std::pair<Chunk, double>> out;
    out.reserve(selection.size());
    for (size_t i : selection) out.emplace_back(chunks[i], query_sim[i]);
    return out;
}

std::string render_gate_prompt(const std::string& chunk_text, const std::string& section_text) {
    std::string p;
    p += prompts::kGateInstruction;
    p += "\n\n";
    p += prompts::kGateChunkOpen;
    p += "\n";
    p += chunk_text;
    p += "\n";
    p += prompts::kGateChunkClose;
    p += "\n\n";
    p += prompts::kGateCriteria;
    p += "\n\n";
    p += prompts::kGateQueryLabel;
    p += "\n";
    p += section_text;
    p += "\n\n";
    p += prompts::kGateFormatDirective;
    p += "\n";
    return p;
}

namespace {

GateVerdict parse_gate_response(int chunk_id, const std::string& raw) {
    GateVerdict v;
    v.chunk_id = chunk_id;
    v.raw_response = raw;
    std::string lower = text::to_lower_ascii(raw);

    // verdict: first standalone yes/no token
    std::optional<bool> yes;
    for (size_t i = 0; i < lower.size();) {
        if (!std::isalpha(static_cast<unsigned char>(lower[i]))) {
            ++i;
            continue;
        }
        size_t b = i;
        while (i < lower.size() && std::isalpha(static_cast<unsigned char>(lower[i]))) ++i;
        std::string_view word(lower.data() + b, i - b);
        if (word == "yes") {
            yes = true;
            break;
        }
        if (word == "no") {
            yes = false;
            break;
        }
    }

    size_t cpos = lower.find("confidence score");
    if (cpos == std::string::npos) cpos = lower.find("confidence");
    if (cpos != std::string::npos) {
        size_t i = cpos;
        while (i < lower.size() && !(std::isdigit(static_cast<unsigned char>(lower[i])) ||
                                     lower[i] == '.')) {
            ++i;
        }
        if (i < lower.size()) {
            try {
                v.confidence = std::stod(lower.substr(i));
            } catch (const std::exception&) {
            }
        }
    }

    if (!yes.has_value()) {
        // unparseable verdict counts as No and is flagged for the log
        v.accepted = false;
        v.parse_ok = false;
        return v;
    }
    v.accepted = *yes;
    if (v.accepted && !v.confidence.has_value()) v.confidence = 0.5;
    return v;
}

}  // namespace

GateOutcome relevance_gate(const std::vector<Chunk>& candidates, const std::string& section_text,
                           gateway::GenerationClient& generator, int max_tokens) {
    if (candidates.empty()) throw InvalidParamsError("relevance_gate: no candidates");
    GateOutcome outcome;
    for (const auto& c : candidates) {
        gateway::GenerationRequest req;
        req.prompt = render_gate_prompt(c.text, section_text);
        req.max_tokens = max_tokens;
        req.temperature = 0.0;
        outcome.verdicts.push_back(parse_gate_response(c.id, generator.generate(req)));
    }
    for (const auto& v : outcome.verdicts) {
        if (!v.accepted) continue;
        double conf = v.confidence.value_or(0.5);
        if (!outcome.chunk_id || conf > *outcome.confidence) {
            outcome.chunk_id = v.chunk_id;
            outcome.confidence = conf;
        }
    }
    return outcome;
}

}  // namespace wikigap::rag
