#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wikigap/gateway.hpp"

namespace wikigap::npov {

enum class Mode { ZeroShot, FewShot };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct ExemplarSet {
    std::vector<std::pair<std::string, std::string>> pairs;  // (biased, neutral)
};

// Tab-separated biased/neutral pairs, one per line; '#' lines are comments.
ExemplarSet load_exemplars(const std::string& path);

inline constexpr int kFewShotExemplars = 5;

// Instruction, bias definitions, the exemplar block (FewShot only, exactly 5
// pairs), the output-format directive, and the query sentence. Pure: identical
// inputs yield byte-identical prompts.
std::string build_prompt(const std::string& sentence, Mode mode, const ExemplarSet& exemplars);

// First <pad>...</pad> span of a completion, or nullopt.
std::optional<std::string> extract_pad_span(const std::string& completion);

struct NeutralizationRecord {
    std::string original;
    std::string neutralized;
    int exemplars_used = 0;
    bool parse_ok = false;
};

struct NeutralizeOptions {
    int max_tokens = 256;
    double temperature = 0.0;  // reproducible pipeline runs
};

// Rewrites one sentence via the prompt protocol. If the completion carries no
// sentinel span after one retry, the original passes through with
// parse_ok=false so batch use never drops a sentence.
NeutralizationRecord neutralize(const std::string& sentence, Mode mode,
                                const ExemplarSet& exemplars, gateway::GenerationClient& generator,
                                const NeutralizeOptions& options = {});

}  // namespace wikigap::npov
