#pragma once

#include <string>
#include <vector>

#include "wikigap/article.hpp"

namespace wikigap::ingest {

struct ParseOptions {
    std::vector<std::string> excluded_headings;  // normalized comparison
    std::vector<std::string> abbreviations;      // sentence splitter guard
};

// Heading comparison key: trimmed, whitespace-collapsed, ASCII-lowercased.
std::string normalize_heading(const std::string& heading);

// Strips non-prose wikitext markup: templates, tables, refs, comments, HTML
// tags, file/image/category links, link targets, emphasis quotes, list and
// magic-word markers. Keeps link labels and list item text.
std::string strip_markup(const std::string& wikitext);

// Titled (==...==) sections only, in order: excluded headings removed,
// duplicate headings merged into the first occurrence, prose cleaned and
// segmented into sentences. Untitled lead prose is not a section.
std::vector<Section> parse_sections(const std::string& wikitext, const ParseOptions& options);

}  // namespace wikigap::ingest
