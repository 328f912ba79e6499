#include "wikigap/text.hpp"

#include <algorithm>
#include <cctype>

namespace wikigap::text {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

// UTF-8 bytes of the Devanagari danda "।" (U+0964).
constexpr char kDanda[] = "\xe0\xa5\xa4";

bool danda_at(std::string_view s, size_t i) {
    return i + 2 < s.size() && s[i] == kDanda[0] && s[i + 1] == kDanda[1] && s[i + 2] == kDanda[2];
}

bool is_closing_mark(std::string_view s, size_t i, size_t* width) {
    if (i >= s.size()) return false;
    char c = s[i];
    if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') {
        *width = 1;
        return true;
    }
    // curly right quotes: U+2019 (e2 80 99), U+201D (e2 80 9d)
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xe2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80) {
        unsigned char b = static_cast<unsigned char>(s[i + 2]);
        if (b == 0x99 || b == 0x9d) {
            *width = 3;
            return true;
        }
    }
    return false;
}

// Last whitespace-delimited token ending at position `end` (exclusive).
std::string_view token_before(std::string_view s, size_t end) {
    size_t b = end;
    while (b > 0 && !is_space(s[b - 1])) --b;
    return s.substr(b, end - b);
}

std::vector<size_t> break_offsets(std::string_view s, const std::vector<std::string>& abbrevs) {
    std::vector<size_t> breaks;
    size_t i = 0;
    while (i < s.size()) {
        size_t punct_width = 0;
        if (s[i] == '.' || s[i] == '!' || s[i] == '?') {
            punct_width = 1;
        } else if (danda_at(s, i)) {
            punct_width = 3;
        } else {
            ++i;
            continue;
        }
        size_t end = i + punct_width;
        if (s[i] == '.') {
            // decimals: digit '.' digit
            if (i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                ++i;
                continue;
            }
            std::string_view tok = token_before(s, end);
            bool guarded = false;
            for (const auto& a : abbrevs) {
                if (tok == a) {
                    guarded = true;
                    break;
                }
            }
            // single-letter initials: "J." in "J. K. Rowling"
            if (!guarded && tok.size() == 2 && std::isupper(static_cast<unsigned char>(tok[0]))) {
                guarded = true;
            }
            if (guarded) {
                ++i;
                continue;
            }
            // collapse runs of dots (ellipsis) into one break at the end
            while (end < s.size() && s[end] == '.') ++end;
        }
        size_t w;
        while (is_closing_mark(s, end, &w)) end += w;
        if (end >= s.size() || is_space(s[end])) {
            breaks.push_back(end);
            i = end;
        } else {
            i = end;
        }
    }
    if (breaks.empty() || breaks.back() < s.size()) breaks.push_back(s.size());
    return breaks;
}

}  // namespace

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true;  // swallow leading whitespace
    for (char c : s) {
        if (is_space(c)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_valid_utf8(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t n;
        if (c < 0x80) n = 0;
        else if ((c & 0xe0) == 0xc0) n = 1;
        else if ((c & 0xf0) == 0xe0) n = 2;
        else if ((c & 0xf8) == 0xf0) n = 3;
        else return false;
        if (n == 1 && c < 0xc2) return false;  // overlong 2-byte form
        if (i + n >= s.size() && n > 0) return false;
        for (size_t k = 1; k <= n; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80) return false;
        }
        i += n + 1;
    }
    return true;
}

std::string normalize_line_endings(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        size_t b = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i == b) break;
        std::string_view tok = s.substr(b, i - b);
        bool has_word_char = false;
        for (char c : tok) {
            unsigned char u = static_cast<unsigned char>(c);
            if (std::isalnum(u) || u >= 0x80) {
                has_word_char = true;
                break;
            }
        }
        if (has_word_char) tokens.emplace_back(tok);
    }
    return tokens;
}

const std::vector<std::string>& default_abbreviations() {
    static const std::vector<std::string> abbr = {
        "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "Jr.", "Sr.",
        "etc.", "e.g.", "i.e.", "vs.", "cf.", "No.", "Vol.", "pp.",
    };
    return abbr;
}

std::vector<size_t> sentence_break_offsets(std::string_view prose) {
    return break_offsets(prose, default_abbreviations());
}

std::vector<std::string> split_sentences(std::string_view prose,
                                         const std::vector<std::string>& abbreviations) {
    std::vector<std::string> sentences;
    size_t start = 0;
    for (size_t brk : break_offsets(prose, abbreviations)) {
        std::string sent = trim(prose.substr(start, brk - start));
        if (!sent.empty()) sentences.push_back(std::move(sent));
        start = brk;
    }
    return sentences;
}

}  // namespace wikigap::text
