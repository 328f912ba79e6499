#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wikigap::ingest {

enum class Language { HRL, LRL };

const char* language_name(Language lang);
Language language_from_name(const std::string& name);

// English Wikipedia quality classes; FA routes to direct transfer.
enum class QualityClass { FA, A, GA, B, C, Start, Stub };

const char* quality_class_name(QualityClass qc);
QualityClass quality_class_from_name(const std::string& name);

struct Section {
    std::string heading;
    std::vector<std::string> sentences;
    std::string raw_text;
};

struct Article {
    std::string wikidata_id;
    Language language = Language::HRL;
    std::string title;
    std::vector<Section> sections;
    std::optional<double> quality_score;
    std::optional<QualityClass> quality_class;  // HRL only
};

struct QualityRecord {
    std::string wikidata_id;
    double score_hrl = 0.0;
    double score_lrl = 0.0;
    QualityClass class_hrl = QualityClass::Stub;
};

struct BookDocument {
    std::string article_id;
    std::string source_uri;
    std::string text;
    std::optional<std::string> publication_order_key;
};

}  // namespace wikigap::ingest
