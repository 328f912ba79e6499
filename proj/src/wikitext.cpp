#include "wikigap/wikitext.hpp"

#include <cctype>

#include "wikigap/errors.hpp"
#include "wikigap/text.hpp"

namespace wikigap::ingest {

namespace {

bool starts_with(std::string_view s, size_t i, std::string_view prefix) {
    return s.size() - i >= prefix.size() && s.compare(i, prefix.size(), prefix) == 0;
}

// Removes balanced {{...}} / {| ... |} spans, tolerating nesting.
std::string drop_balanced(const std::string& s, std::string_view open, std::string_view close) {
    std::string out;
    out.reserve(s.size());
    int depth = 0;
    for (size_t i = 0; i < s.size();) {
        if (starts_with(s, i, open)) {
            ++depth;
            i += open.size();
        } else if (depth > 0 && starts_with(s, i, close)) {
            --depth;
            i += close.size();
        } else {
            if (depth == 0) out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

std::string drop_span(const std::string& s, std::string_view open, std::string_view close) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        if (starts_with(s, i, open)) {
            size_t end = s.find(close, i + open.size());
            if (end == std::string::npos) break;  // unterminated span: drop the tail
            i = end + close.size();
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

bool is_media_or_category_link(std::string_view target) {
    static const char* prefixes[] = {"File:",  "Image:", "Category:", "Media:",
                                     "चित्र:", "श्रेणी:"};
    for (const char* p : prefixes) {
        if (target.substr(0, std::string_view(p).size()) == p) return true;
    }
    return false;
}

// [[a|b]] -> b, [[a]] -> a, [[File:...]] -> "", [http://x label] -> label
std::string resolve_links(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        if (starts_with(s, i, "[[")) {
            size_t end = s.find("]]", i + 2);
            if (end == std::string::npos) {
                out.push_back(s[i]);
                ++i;
                continue;
            }
            std::string_view inner(s.data() + i + 2, end - i - 2);
            if (!is_media_or_category_link(inner)) {
                size_t pipe = inner.rfind('|');
                out.append(pipe == std::string_view::npos ? inner : inner.substr(pipe + 1));
            }
            i = end + 2;
        } else if (s[i] == '[' && (starts_with(s, i, "[http://") || starts_with(s, i, "[https://"))) {
            size_t end = s.find(']', i + 1);
            if (end == std::string::npos) {
                out.push_back(s[i]);
                ++i;
                continue;
            }
            std::string_view inner(s.data() + i + 1, end - i - 1);
            size_t sp = inner.find(' ');
            if (sp != std::string_view::npos) out.append(inner.substr(sp + 1));
            i = end + 1;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

std::string drop_html_tags(const std::string& s) {
    // ref/gallery content is citation apparatus, not prose
    std::string out = drop_span(s, "<!--", "-->");
    out = drop_span(out, "<ref", "</ref>");
    out = drop_span(out, "<gallery", "</gallery>");
    // self-closing refs and remaining tags: keep inner text, drop the tag itself
    std::string res;
    res.reserve(out.size());
    for (size_t i = 0; i < out.size();) {
        if (out[i] == '<') {
            size_t end = out.find('>', i + 1);
            if (end != std::string::npos && end - i <= 128) {
                i = end + 1;
                continue;
            }
        }
        res.push_back(out[i]);
        ++i;
    }
    return res;
}

std::string drop_emphasis(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        if (starts_with(s, i, "'''")) {
            i += 3;
        } else if (starts_with(s, i, "''")) {
            i += 2;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

// Line-level cleanup: list markers, magic words, leftover table rows.
std::string clean_lines(const std::string& s) {
    std::string out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t nl = s.find('\n', pos);
        std::string line =
            s.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        size_t b = 0;
        while (b < line.size() && (line[b] == '*' || line[b] == '#' || line[b] == ':' ||
                                   line[b] == ';')) {
            ++b;
        }
        line = text::trim(line.substr(b));
        bool magic = line.size() >= 4 && line.substr(0, 2) == "__" &&
                     line.substr(line.size() - 2) == "__";
        bool table_row = !line.empty() && (line[0] == '|' || line[0] == '!');
        if (!magic && !table_row) {
            out += line;
            out.push_back('\n');
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

std::string collapse_blank_lines(const std::string& s) {
    std::string out;
    int blanks = 0;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t nl = s.find('\n', pos);
        std::string line =
            s.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (text::trim(line).empty()) {
            ++blanks;
        } else {
            if (!out.empty() && blanks > 0) out += "\n\n";
            else if (!out.empty()) out.push_back('\n');
            blanks = 0;
            out += line;
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

struct RawSection {
    std::string heading;
    std::string body;
};

// ==Heading== lines (level 2..6). Returns the heading text, or nullopt.
std::optional<std::string> heading_text(const std::string& line) {
    std::string t = text::trim(line);
    if (t.size() < 5 || t[0] != '=') return std::nullopt;
    size_t level = 0;
    while (level < t.size() && t[level] == '=') ++level;
    if (level < 2 || level > 6) return std::nullopt;
    size_t tail = t.size();
    size_t closing = 0;
    while (tail > 0 && t[tail - 1] == '=') {
        --tail;
        ++closing;
    }
    if (closing < level || tail <= level) return std::nullopt;
    return text::trim(t.substr(level, tail - level));
}

std::vector<RawSection> split_raw_sections(const std::string& wikitext) {
    std::vector<RawSection> sections;
    std::string normalized = text::normalize_line_endings(wikitext);
    size_t pos = 0;
    RawSection current;  // heading empty => untitled lead, dropped below
    while (pos <= normalized.size()) {
        size_t nl = normalized.find('\n', pos);
        std::string line = normalized.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (auto h = heading_text(line)) {
            if (!current.heading.empty()) sections.push_back(current);
            current = RawSection{*h, ""};
        } else if (!current.heading.empty()) {
            current.body += line;
            current.body.push_back('\n');
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (!current.heading.empty()) sections.push_back(current);
    return sections;
}

}  // namespace

std::string normalize_heading(const std::string& heading) {
    return text::to_lower_ascii(text::normalize_whitespace(heading));
}

std::string strip_markup(const std::string& wikitext) {
    std::string s = drop_span(wikitext, "<!--", "-->");
    s = drop_balanced(s, "{{", "}}");
    s = drop_balanced(s, "{|", "|}");
    s = drop_html_tags(s);
    s = resolve_links(s);
    s = drop_emphasis(s);
    s = clean_lines(s);
    return collapse_blank_lines(s);
}

std::vector<Section> parse_sections(const std::string& wikitext, const ParseOptions& options) {
    std::vector<std::string> excluded;
    excluded.reserve(options.excluded_headings.size());
    for (const auto& h : options.excluded_headings) excluded.push_back(normalize_heading(h));

    const auto& abbrevs =
        options.abbreviations.empty() ? text::default_abbreviations() : options.abbreviations;

    std::vector<Section> sections;
    for (const auto& raw : split_raw_sections(wikitext)) {
        std::string heading = text::normalize_whitespace(strip_markup(raw.heading));
        if (heading.empty()) continue;
        std::string key = normalize_heading(heading);
        bool is_excluded = false;
        for (const auto& ex : excluded) {
            if (key == ex) {
                is_excluded = true;
                break;
            }
        }
        if (is_excluded) continue;

        std::string prose = text::trim(strip_markup(raw.body));
        // duplicate headings merge into the first occurrence
        Section* target = nullptr;
        for (auto& existing : sections) {
            if (normalize_heading(existing.heading) == key) {
                target = &existing;
                break;
            }
        }
        if (target == nullptr) {
            sections.push_back(Section{heading, {}, ""});
            target = &sections.back();
        }
        if (!prose.empty()) {
            if (!target->raw_text.empty()) target->raw_text += "\n\n";
            target->raw_text += prose;
            target->sentences = text::split_sentences(target->raw_text, abbrevs);
        }
    }
    return sections;
}

}  // namespace wikigap::ingest
