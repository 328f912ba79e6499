#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wikigap/article.hpp"
#include "wikigap/gateway.hpp"

namespace wikigap::rag {

using ingest::BookDocument;

struct Chunk {
    int id = 0;
    std::string text;
    size_t char_start = 0;
    size_t char_end = 0;  // exclusive; text equals the source slice
    gateway::Vector embedding;
};

// Recursive splitting on blank line -> newline -> sentence boundary -> space;
// spans that still exceed `size` are cut mid-unit at character granularity,
// with consecutive chunks sharing `overlap` characters. With overlap 0 the
// chunk texts partition the source exactly.
std::vector<Chunk> split_chunks(const BookDocument& doc, int size, int overlap);

// Exact nearest-neighbor store over chunk embeddings; immutable after build.
class VectorIndex {
public:
    static VectorIndex build(std::vector<Chunk> chunks, gateway::EmbeddingClient& embedder);

    size_t size() const { return chunks_.size(); }
    const std::vector<Chunk>& chunks() const { return chunks_; }
    const Chunk& chunk_by_id(int id) const;

    // Linear-scan cosine top-k: (chunk id, similarity), best first,
    // ties to the lower id.
    std::vector<std::pair<int, double>> top_k(const gateway::Vector& query, int k) const;

private:
    std::vector<Chunk> chunks_;
};

// Greedy maximal marginal relevance: the first pick is the query argmax; each
// later pick maximizes lambda*sim(chunk, query) - (1-lambda)*max sim(chunk,
// selected). Returns min(k, index size) chunks in selection order, paired with
// their query similarity.
std::vector<std::pair<Chunk, double>> mmr_retrieve(const VectorIndex& index,
                                                   const std::string& query, int k, double lambda,
                                                   gateway::EmbeddingClient& embedder);

std::string render_gate_prompt(const std::string& chunk_text, const std::string& section_text);

struct GateVerdict {
    int chunk_id = 0;
    bool accepted = false;
    std::optional<double> confidence;
    bool parse_ok = true;
    std::string raw_response;
};

struct GateOutcome {
    std::optional<int> chunk_id;        // accepted chunk with the highest confidence
    std::optional<double> confidence;
    std::vector<GateVerdict> verdicts;  // one per candidate, for the audit artifact
};

// Prompts the model once per candidate and keeps the Yes verdict with the
// highest confidence. A Yes without a parseable score counts as 0.5; output
// matching neither Yes nor No is treated as No with parse_ok=false.
GateOutcome relevance_gate(const std::vector<Chunk>& candidates, const std::string& section_text,
                           gateway::GenerationClient& generator, int max_tokens = 64);

// Per-section retrieval artifact.
struct RetrievalResult {
    std::string query_section;
    std::vector<std::pair<Chunk, double>> chunks;
    GateOutcome gate;
};

}  // namespace wikigap::rag
