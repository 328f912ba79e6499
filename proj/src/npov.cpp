#include "wikigap/npov.hpp"

#include <fstream>

#include "wikigap/errors.hpp"
#include "wikigap/prompts.hpp"
#include "wikigap/text.hpp"

namespace wikigap::npov {

const char* mode_name(Mode mode) {
    return mode == Mode::ZeroShot ? "zero_shot" : "few_shot";
}

Mode mode_from_name(const std::string& name) {
    if (name == "zero_shot") return Mode::ZeroShot;
    if (name == "few_shot") return Mode::FewShot;
    throw ConfigError("unknown npov mode: " + name);
}

ExemplarSet load_exemplars(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open exemplar file: " + path);
    ExemplarSet set;
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        size_t tab = trimmed.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("exemplar line missing tab separator: " + trimmed);
        }
        set.pairs.emplace_back(text::trim(trimmed.substr(0, tab)),
                               text::trim(trimmed.substr(tab + 1)));
    }
    return set;
}

std::string build_prompt(const std::string& sentence, Mode mode, const ExemplarSet& exemplars) {
    if (sentence.empty()) throw InvalidParamsError("build_prompt: empty sentence");
    if (mode == Mode::FewShot && static_cast<int>(exemplars.pairs.size()) != kFewShotExemplars) {
        throw MissingExemplarsError("build_prompt: few-shot needs exactly " +
                                    std::to_string(kFewShotExemplars) + " exemplar pairs, got " +
                                    std::to_string(exemplars.pairs.size()));
    }

    std::string p;
    p += prompts::kNeutralInstruction;
    p += "\n\n";
    p += prompts::kFramingDefinition;
    p += "\n\n";
    p += prompts::kEpistemologicalDefinition;
    p += "\n\n";
    if (mode == Mode::FewShot) {
        p += prompts::kNeutralExamplesHeader;
        p += "\n";
        for (const auto& [biased, neutral] : exemplars.pairs) {
            p += "Query: ";
            p += biased;
            p += "\nOutput: ";
            p += prompts::kPadOpen;
            p += neutral;
            p += prompts::kPadClose;
            p += "\n";
        }
        p += "\n";
    }
    p += prompts::kNeutralOutputDirective;
    p += "\n\nQuery: ";
    p += sentence;
    p += "\nOutput:";
    return p;
}

std::optional<std::string> extract_pad_span(const std::string& completion) {
    size_t open = completion.find(prompts::kPadOpen);
    if (open == std::string::npos) return std::nullopt;
    size_t begin = open + std::string_view(prompts::kPadOpen).size();
    size_t close = completion.find(prompts::kPadClose, begin);
    if (close == std::string::npos) return std::nullopt;
    if (close == begin) return std::nullopt;  // empty span is a parse failure
    return completion.substr(begin, close - begin);
}

NeutralizationRecord neutralize(const std::string& sentence, Mode mode,
                                const ExemplarSet& exemplars, gateway::GenerationClient& generator,
                                const NeutralizeOptions& options) {
    if (sentence.empty()) throw InvalidParamsError("neutralize: empty sentence");
    NeutralizationRecord record;
    record.original = sentence;
    record.exemplars_used = mode == Mode::FewShot ? kFewShotExemplars : 0;

    gateway::GenerationRequest req;
    req.prompt = build_prompt(sentence, mode, exemplars);
    req.max_tokens = options.max_tokens;
    req.temperature = options.temperature;

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string completion = generator.generate(req);
        if (auto span = extract_pad_span(completion)) {
            record.neutralized = *span;
            record.parse_ok = true;
            return record;
        }
    }
    record.neutralized = sentence;  // pass through rather than drop content
    record.parse_ok = false;
    return record;
}

}  // namespace wikigap::npov
