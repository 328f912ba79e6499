#include "wikigap/ingest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wikigap/errors.hpp"
#include "wikigap/text.hpp"

namespace wikigap::ingest {

using nlohmann::json;

const char* language_name(Language lang) {
    return lang == Language::HRL ? "hrl" : "lrl";
}

Language language_from_name(const std::string& name) {
    if (name == "hrl") return Language::HRL;
    if (name == "lrl") return Language::LRL;
    throw ConfigError("unknown language: " + name);
}

const char* quality_class_name(QualityClass qc) {
    switch (qc) {
        case QualityClass::FA: return "FA";
        case QualityClass::A: return "A";
        case QualityClass::GA: return "GA";
        case QualityClass::B: return "B";
        case QualityClass::C: return "C";
        case QualityClass::Start: return "Start";
        case QualityClass::Stub: return "Stub";
    }
    return "?";
}

QualityClass quality_class_from_name(const std::string& name) {
    if (name == "FA") return QualityClass::FA;
    if (name == "A") return QualityClass::A;
    if (name == "GA") return QualityClass::GA;
    if (name == "B") return QualityClass::B;
    if (name == "C") return QualityClass::C;
    if (name == "Start") return QualityClass::Start;
    if (name == "Stub") return QualityClass::Stub;
    throw ConfigError("unknown quality class: " + name);
}

const char* route_name(Route route) {
    return route == Route::DirectTransfer ? "direct_transfer" : "augment_then_transfer";
}

std::vector<QualityRecord> select_candidates(const std::vector<QualityRecord>& records) {
    std::vector<QualityRecord> out;
    for (const auto& r : records) {
        if (r.score_lrl < r.score_hrl) out.push_back(r);
    }
    return out;
}

Route route_by_quality(QualityClass class_hrl) {
    return class_hrl == QualityClass::FA ? Route::DirectTransfer : Route::AugmentThenTransfer;
}

BookDocument load_book(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open book file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string raw = buf.str();
    if (!text::is_valid_utf8(raw)) throw EncodingError("book file is not valid UTF-8: " + path);
    std::string normalized = text::normalize_line_endings(raw);
    if (text::trim(normalized).empty()) throw IoError("book file is empty: " + path);
    BookDocument doc;
    doc.source_uri = path;
    doc.text = std::move(normalized);
    return doc;
}

std::vector<BookManifestEntry> load_book_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open book manifest: " + path);
    std::vector<BookManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError("malformed manifest line: " + line);
        BookManifestEntry e;
        e.article_id = j.at("article_id").get<std::string>();
        e.file = j.at("file").get<std::string>();
        e.source_uri = j.value("source_uri", "");
        if (j.contains("order_key") && !j["order_key"].is_null()) {
            e.order_key = j["order_key"].get<std::string>();
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::optional<BookManifestEntry> choose_most_recent(
    const std::vector<BookManifestEntry>& entries, const std::string& article_id) {
    std::optional<BookManifestEntry> best;
    for (const auto& e : entries) {
        if (e.article_id != article_id) continue;
        if (!best) {
            best = e;
            continue;
        }
        bool newer = false;
        if (e.order_key && best->order_key) {
            newer = *e.order_key > *best->order_key;
        } else if (e.order_key && !best->order_key) {
            newer = true;  // keyless entries lose ties
        }
        if (newer) best = e;
    }
    return best;
}

BookDocument load_book(const BookManifestEntry& entry, const std::string& base_dir) {
    std::filesystem::path p = std::filesystem::path(base_dir) / entry.file;
    BookDocument doc = load_book(p.string());
    doc.article_id = entry.article_id;
    doc.source_uri = entry.source_uri.empty() ? p.string() : entry.source_uri;
    doc.publication_order_key = entry.order_key;
    return doc;
}

std::vector<QualityRecord> load_quality_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open quality records: " + path);
    std::vector<QualityRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError("malformed quality record: " + line);
        QualityRecord r;
        r.wikidata_id = j.at("wikidata_id").get<std::string>();
        r.score_hrl = j.at("score_hrl").get<double>();
        r.score_lrl = j.at("score_lrl").get<double>();
        r.class_hrl = quality_class_from_name(j.at("class_hrl").get<std::string>());
        if (r.score_hrl < 0.0 || r.score_hrl > 1.0 || r.score_lrl < 0.0 || r.score_lrl > 1.0) {
            throw ParseError("quality score out of [0,1]: " + line);
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::optional<QualityRecord> find_quality_record(const std::vector<QualityRecord>& records,
                                                 const std::string& wikidata_id) {
    for (const auto& r : records) {
        if (r.wikidata_id == wikidata_id) return r;
    }
    return std::nullopt;
}

}  // namespace wikigap::ingest
