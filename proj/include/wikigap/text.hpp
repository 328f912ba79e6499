#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wikigap::text {

std::string trim(std::string_view s);

// Collapses runs of [ \t\r\n] to a single space and trims the ends.
std::string normalize_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

bool is_valid_utf8(std::string_view s);

// CRLF / lone CR -> LF.
std::string normalize_line_endings(std::string_view s);

// Whitespace tokens. Tokens carrying no alphanumeric byte and no multi-byte
// character (i.e. pure ASCII punctuation) are dropped.
std::vector<std::string> word_tokens(std::string_view s);

// Default abbreviation guard for the sentence splitter.
const std::vector<std::string>& default_abbreviations();

// Rule-based sentence segmentation. A sentence ends at '.', '!', '?' or the
// Devanagari danda, optionally followed by closing quotes/brackets, when the
// next character is whitespace or end of text. Guards: abbreviations from the
// list, single-letter initials ("J."), and digit.digit decimals.
std::vector<std::string> split_sentences(std::string_view prose,
                                         const std::vector<std::string>& abbreviations
                                             = default_abbreviations());

// Byte offsets one past each sentence end, in order; used by the chunker.
std::vector<size_t> sentence_break_offsets(std::string_view prose);

}  // namespace wikigap::text
