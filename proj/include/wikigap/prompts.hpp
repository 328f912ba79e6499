#pragma once

namespace wikigap::prompts {

// --- neutral-rewrite prompt -------------------------------------------------

inline constexpr const char* kNeutralInstruction =
    "For each query message, remove framing bias and epistemological bias and do not add any "
    "extra content from your own knowledge.";

inline constexpr const char* kFramingDefinition =
    "Framing bias: subjective words or one-sided words, revealing the author’s stance in a "
    "particular debate.";

inline constexpr const char* kEpistemologicalDefinition =
    "Epistemological bias: propositions that are either commonly agreed to be true or false and "
    "that are subtly presupposed, entailed, asserted or hedged in the text.";

inline constexpr const char* kNeutralExamplesHeader = "Here are some examples:";

inline constexpr const char* kNeutralOutputDirective =
    "Provide only the Output as: <pad>output</pad>";

inline constexpr const char* kPadOpen = "<pad>";
inline constexpr const char* kPadClose = "</pad>";

// --- chunk-relevance prompt -------------------------------------------------

inline constexpr const char* kGateInstruction =
    "For each query text, find out whether the given piece of text is relevant or not.";

inline constexpr const char* kGateChunkOpen = "start(*)";
inline constexpr const char* kGateChunkClose = "end(*)";

inline constexpr const char* kGateCriteria =
    "Evaluate whether the chunk between start(*) and end(*) is relevant to the given section "
    "content. A quality chunk should meet the following criteria: a) It should provide relevant "
    "information as compared with the content, b) it should be well-written.";

inline constexpr const char* kGateQueryLabel = "Query text:";

inline constexpr const char* kGateFormatDirective =
    "Provide the output in the following format: \n\n--Yes/No\n\n-- Confidence score: <score>";

}  // namespace wikigap::prompts
