#include "wikigap/gateway_mock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>

#include "wikigap/prompts.hpp"
#include "wikigap/text.hpp"

namespace wikigap::gateway {

namespace {

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// lowercase runs of [a-z0-9] plus any multi-byte sequences
std::vector<std::string> hash_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || u >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

// Devanagari "ह" (U+0939), the token marker for the fallback translation.
constexpr const char* kMark = "\xe0\xa4\xb9";
constexpr size_t kMarkLen = 3;

const std::set<std::string>& loaded_words() {
    static const std::set<std::string> words = {
        "bravely", "brilliant", "brilliantly", "legendary", "notorious", "notoriously",
        "unfortunately", "rightly", "sadly", "so-called", "infamous", "greatest",
        "stunning", "remarkable", "remarkably",
    };
    return words;
}

std::string strip_punct_lower(const std::string& tok) {
    size_t b = 0, e = tok.size();
    auto is_p = [](unsigned char c) { return std::ispunct(c) && c != '-'; };
    while (b < e && is_p(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && is_p(static_cast<unsigned char>(tok[e - 1]))) --e;
    return text::to_lower_ascii(tok.substr(b, e - b));
}

std::optional<std::string> slice_between(const std::string& s, const std::string& open,
                                         const std::string& close) {
    size_t b = s.find(open);
    if (b == std::string::npos) return std::nullopt;
    b += open.size();
    size_t e = s.find(close, b);
    if (e == std::string::npos) return std::nullopt;
    return s.substr(b, e - b);
}

}  // namespace

// --- HashingEmbedder ---------------------------------------------------------

HashingEmbedder::HashingEmbedder(std::map<ProfileId, int> dimensions)
    : dimensions_(std::move(dimensions)) {}

Vector HashingEmbedder::embed_one(const std::string& text, ProfileId profile) const {
    auto it = dimensions_.find(profile);
    if (it == dimensions_.end()) throw ConfigError("no dimension configured for profile");
    int dim = it->second;
    std::vector<double> comps(static_cast<size_t>(dim), 0.0);
    auto tokens = hash_tokens(text);
    if (tokens.empty()) tokens.push_back(text);  // keep the norm nonzero
    for (const auto& tok : tokens) {
        comps[fnv1a(tok) % static_cast<uint64_t>(dim)] += 1.0;
    }
    double n = 0.0;
    for (double x : comps) n += x * x;
    n = std::sqrt(n);
    for (double& x : comps) x /= n;
    return Vector{std::move(comps), profile};
}

std::vector<Vector> HashingEmbedder::embed(const std::vector<std::string>& texts,
                                           ProfileId profile) {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        if (t.empty()) throw InvalidParamsError("embed: empty input text");
        out.push_back(embed_one(t, profile));
    }
    return out;
}

// --- TableEmbedder -----------------------------------------------------------

TableEmbedder::TableEmbedder(std::map<ProfileId, int> dimensions)
    : dimensions_(std::move(dimensions)) {}

void TableEmbedder::set(ProfileId profile, const std::string& text,
                        std::vector<double> components) {
    auto it = dimensions_.find(profile);
    if (it != dimensions_.end() && static_cast<int>(components.size()) != it->second) {
        throw DimensionMismatchError("TableEmbedder: wrong component count for profile");
    }
    table_[profile][text] = std::move(components);
}

std::vector<Vector> TableEmbedder::embed(const std::vector<std::string>& texts,
                                         ProfileId profile) {
    std::vector<Vector> out;
    out.reserve(texts.size());
    const auto& entries = table_[profile];
    for (const auto& t : texts) {
        if (t.empty()) throw InvalidParamsError("embed: empty input text");
        auto it = entries.find(t);
        if (it == entries.end()) throw RemoteError("TableEmbedder: no entry for text: " + t);
        out.push_back(Vector{it->second, profile});
    }
    return out;
}

// --- TableTranslator ---------------------------------------------------------

void TableTranslator::set(Direction direction, const std::string& text,
                          const std::string& translation) {
    table_[direction][text] = translation;
}

std::string TableTranslator::mark_tokens(const std::string& text) {
    std::string out;
    for (const auto& tok : text::word_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        out += kMark;
        out += tok;
    }
    return out;
}

std::string TableTranslator::strip_marks(const std::string& text) {
    std::string out;
    for (const auto& tok : text::word_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        if (tok.compare(0, kMarkLen, kMark) == 0) {
            out += tok.substr(kMarkLen);
        } else {
            out += tok;
        }
    }
    return out;
}

std::string TableTranslator::translate(const std::string& text, Direction direction) {
    if (text.empty()) throw InvalidParamsError("translate: empty input text");
    auto dir_it = table_.find(direction);
    if (dir_it != table_.end()) {
        auto it = dir_it->second.find(text);
        if (it != dir_it->second.end()) {
            if (it->second.empty()) throw EmptyTranslationError("translate: empty translation");
            return it->second;
        }
    }
    std::string out = direction == Direction::HrlToLrl ? mark_tokens(text) : strip_marks(text);
    if (out.empty()) throw EmptyTranslationError("translate: empty translation");
    return out;
}

// --- ScriptedGenerator -------------------------------------------------------

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

std::string ScriptedGenerator::generate(const GenerationRequest& request) {
    std::lock_guard<std::mutex> lock(mu_);
    if (responses_.empty()) throw RemoteError("ScriptedGenerator: no responses configured");
    seen_.push_back(request);
    size_t i = std::min(static_cast<size_t>(calls_), responses_.size() - 1);
    ++calls_;
    return responses_[i];
}

// --- MockGenerator -----------------------------------------------------------

std::string MockGenerator::generate(const GenerationRequest& request) {
    if (request.prompt.empty()) throw InvalidParamsError("generate: empty prompt");
    if (request.prompt.size() > prompt_char_limit_) {
        throw TokenLimitError("generate: prompt exceeds token limit");
    }

    const std::string& p = request.prompt;
    if (p.find(prompts::kGateCriteria) != std::string::npos) {
        auto chunk = slice_between(p, std::string(prompts::kGateChunkOpen) + "\n",
                                   std::string("\n") + prompts::kGateChunkClose);
        auto section = slice_between(p, std::string(prompts::kGateQueryLabel) + "\n",
                                     "\n\nProvide the output");
        std::set<std::string> chunk_words, section_words;
        for (const auto& t : hash_tokens(chunk.value_or(""))) {
            if (t.size() >= 4) chunk_words.insert(t);
        }
        for (const auto& t : hash_tokens(section.value_or(""))) {
            if (t.size() >= 4) section_words.insert(t);
        }
        size_t common = 0;
        for (const auto& w : chunk_words) common += section_words.count(w);
        double ratio = chunk_words.empty()
                           ? 0.0
                           : static_cast<double>(common) / static_cast<double>(chunk_words.size());
        double confidence = std::clamp(std::round(ratio * 100.0) / 100.0, 0.05, 0.95);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f", confidence);
        std::string verdict = ratio >= 0.10 ? "--Yes" : "--No";
        return verdict + "\n-- Confidence score: " + buf;
    }

    if (p.find(prompts::kNeutralInstruction) != std::string::npos) {
        size_t q = p.rfind("\nQuery: ");
        std::string sentence;
        if (q != std::string::npos) {
            size_t b = q + 8;
            size_t e = p.find('\n', b);
            sentence = p.substr(b, e == std::string::npos ? std::string::npos : e - b);
        }
        std::string neutral;
        for (const auto& tok : text::word_tokens(sentence)) {
            if (loaded_words().count(strip_punct_lower(tok))) continue;
            if (!neutral.empty()) neutral.push_back(' ');
            neutral += tok;
        }
        if (neutral.empty()) neutral = sentence;
        return std::string(prompts::kPadOpen) + neutral + prompts::kPadClose;
    }

    return "<ok>";
}

Gateway make_mock_gateway(std::map<ProfileId, int> dimensions,
                          std::map<std::string, std::string> hrl_to_lrl_table,
                          std::map<std::string, std::string> lrl_to_hrl_table) {
    auto translator = std::make_shared<TableTranslator>();
    for (auto& [k, v] : hrl_to_lrl_table) translator->set(Direction::HrlToLrl, k, v);
    for (auto& [k, v] : lrl_to_hrl_table) translator->set(Direction::LrlToHrl, k, v);
    return Gateway{
        std::make_shared<HashingEmbedder>(std::move(dimensions)),
        translator,
        std::make_shared<MockGenerator>(),
    };
}

}  // namespace wikigap::gateway
