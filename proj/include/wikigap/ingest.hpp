#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wikigap/article.hpp"

namespace wikigap::ingest {

enum class Route { DirectTransfer, AugmentThenTransfer };

const char* route_name(Route route);

// Articles whose LRL score is strictly lower than the HRL score, original
// order preserved.
std::vector<QualityRecord> select_candidates(const std::vector<QualityRecord>& records);

// FA -> DirectTransfer, everything else -> AugmentThenTransfer.
Route route_by_quality(QualityClass class_hrl);

// UTF-8 text file with line endings normalized to LF. Empty file is an error.
BookDocument load_book(const std::string& path);

struct BookManifestEntry {
    std::string article_id;
    std::string file;  // relative to the manifest's directory
    std::string source_uri;
    std::optional<std::string> order_key;
};

// JSONL manifest: {"article_id": ..., "file": ..., "source_uri": ..., "order_key": ...}
std::vector<BookManifestEntry> load_book_manifest(const std::string& path);

// Lexicographically greatest order key wins; entries without a key lose ties.
std::optional<BookManifestEntry> choose_most_recent(
    const std::vector<BookManifestEntry>& entries, const std::string& article_id);

BookDocument load_book(const BookManifestEntry& entry, const std::string& base_dir);

// JSONL records: {"wikidata_id": ..., "score_hrl": ..., "score_lrl": ..., "class_hrl": ...}
std::vector<QualityRecord> load_quality_records(const std::string& path);

std::optional<QualityRecord> find_quality_record(const std::vector<QualityRecord>& records,
                                                 const std::string& wikidata_id);

}  // namespace wikigap::ingest
