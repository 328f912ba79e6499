#include "wikigap/artifacts.hpp"

#include <cctype>
#include <fstream>

#include "wikigap/errors.hpp"

namespace wikigap::artifacts {

namespace fs = std::filesystem;

std::string section_slug(int index, const std::string& heading) {
    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "%03d", index);
    std::string slug = prefix;
    slug.push_back('_');
    for (char c : heading) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            slug.push_back(static_cast<char>(std::tolower(u)));
        } else if (u < 0x80 && !slug.empty() && slug.back() != '-') {
            slug.push_back('-');
        }
        if (slug.size() >= 48) break;
    }
    while (!slug.empty() && slug.back() == '-') slug.pop_back();
    return slug;
}

fs::path RunPaths::retrieval(int index, const std::string& heading) const {
    return root / "retrieval" / (section_slug(index, heading) + ".json");
}

fs::path RunPaths::npov(int index, const std::string& heading) const {
    return root / "npov" / (section_slug(index, heading) + ".json");
}

fs::path RunPaths::enriched(int index, const std::string& heading) const {
    return root / "enriched" / (section_slug(index, heading) + ".json");
}

void write_artifact(const fs::path& path, const char* schema, json payload) {
    payload["schema"] = schema;
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write artifact: " + path.string());
        out << payload.dump(2) << '\n';
    }
    fs::rename(tmp, path);
}

json read_artifact(const fs::path& path, const char* schema) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactsError("missing artifact: " + path.string());
    json payload = json::parse(in, nullptr, false);
    if (payload.is_discarded()) throw ParseError("damaged artifact: " + path.string());
    if (payload.value("schema", "") != schema) {
        throw ParseError("artifact schema mismatch in " + path.string());
    }
    return payload;
}

bool artifact_valid(const fs::path& path, const char* schema) {
    std::ifstream in(path);
    if (!in) return false;
    json payload = json::parse(in, nullptr, false);
    return !payload.is_discarded() && payload.value("schema", "") == schema;
}

// --- article -----------------------------------------------------------------

json article_to_json(const ingest::Article& article) {
    json sections = json::array();
    for (const auto& s : article.sections) {
        sections.push_back(
            {{"heading", s.heading}, {"sentences", s.sentences}, {"raw_text", s.raw_text}});
    }
    json j = {{"wikidata_id", article.wikidata_id},
              {"language", ingest::language_name(article.language)},
              {"title", article.title},
              {"sections", sections}};
    if (article.quality_score) j["quality_score"] = *article.quality_score;
    if (article.quality_class) {
        j["quality_class"] = ingest::quality_class_name(*article.quality_class);
    }
    return j;
}

ingest::Article article_from_json(const json& j) {
    ingest::Article a;
    a.wikidata_id = j.at("wikidata_id").get<std::string>();
    a.language = ingest::language_from_name(j.at("language").get<std::string>());
    a.title = j.value("title", "");
    for (const auto& sj : j.at("sections")) {
        ingest::Section s;
        s.heading = sj.at("heading").get<std::string>();
        s.sentences = sj.at("sentences").get<std::vector<std::string>>();
        s.raw_text = sj.at("raw_text").get<std::string>();
        a.sections.push_back(std::move(s));
    }
    if (j.contains("quality_score")) a.quality_score = j["quality_score"].get<double>();
    if (j.contains("quality_class")) {
        a.quality_class = ingest::quality_class_from_name(j["quality_class"].get<std::string>());
    }
    return a;
}

// --- mappings ----------------------------------------------------------------

json mappings_to_json(const std::vector<mapping::SectionMapping>& mappings) {
    json rows = json::array();
    for (const auto& m : mappings) {
        json row = {{"lrl_index", m.lrl_index},
                    {"hrl_index", m.hrl_index},
                    {"lrl_heading", m.lrl_heading},
                    {"hrl_heading", m.hrl_heading},
                    {"title_similarity", m.title_similarity},
                    {"status", mapping::mapping_status_name(m.status)}};
        if (m.content_similarity) row["content_similarity"] = *m.content_similarity;
        if (!m.note.empty()) row["note"] = m.note;
        rows.push_back(std::move(row));
    }
    return json{{"mappings", rows}};
}

std::vector<mapping::SectionMapping> mappings_from_json(const json& j) {
    std::vector<mapping::SectionMapping> out;
    for (const auto& row : j.at("mappings")) {
        mapping::SectionMapping m;
        m.lrl_index = row.at("lrl_index").get<int>();
        m.hrl_index = row.at("hrl_index").get<int>();
        m.lrl_heading = row.at("lrl_heading").get<std::string>();
        m.hrl_heading = row.at("hrl_heading").get<std::string>();
        m.title_similarity = row.at("title_similarity").get<double>();
        m.status = mapping::mapping_status_from_name(row.at("status").get<std::string>());
        if (row.contains("content_similarity")) {
            m.content_similarity = row["content_similarity"].get<double>();
        }
        m.note = row.value("note", "");
        out.push_back(std::move(m));
    }
    return out;
}

// --- retrieval ---------------------------------------------------------------

json retrieval_to_json(const rag::RetrievalResult& result) {
    json chunks = json::array();
    for (const auto& [chunk, relevance] : result.chunks) {
        chunks.push_back({{"id", chunk.id},
                          {"char_start", chunk.char_start},
                          {"char_end", chunk.char_end},
                          {"text", chunk.text},
                          {"relevance", relevance}});
    }
    json verdicts = json::array();
    for (const auto& v : result.gate.verdicts) {
        json row = {{"chunk_id", v.chunk_id},
                    {"accepted", v.accepted},
                    {"parse_ok", v.parse_ok},
                    {"raw_response", v.raw_response}};
        if (v.confidence) row["confidence"] = *v.confidence;
        verdicts.push_back(std::move(row));
    }
    json j = {{"query_section", result.query_section},
              {"chunks", chunks},
              {"verdicts", verdicts}};
    if (result.gate.chunk_id) j["gated_chunk_id"] = *result.gate.chunk_id;
    if (result.gate.confidence) j["gate_confidence"] = *result.gate.confidence;
    return j;
}

// --- npov --------------------------------------------------------------------

json neutralization_to_json(const std::string& heading,
                            const std::vector<npov::NeutralizationRecord>& records) {
    json rows = json::array();
    for (const auto& r : records) {
        rows.push_back({{"original", r.original},
                        {"neutralized", r.neutralized},
                        {"exemplars_used", r.exemplars_used},
                        {"parse_ok", r.parse_ok}});
    }
    return json{{"heading", heading}, {"records", rows}};
}

std::vector<npov::NeutralizationRecord> neutralization_records_from_json(const json& j) {
    std::vector<npov::NeutralizationRecord> out;
    for (const auto& row : j.at("records")) {
        npov::NeutralizationRecord r;
        r.original = row.at("original").get<std::string>();
        r.neutralized = row.at("neutralized").get<std::string>();
        r.exemplars_used = row.value("exemplars_used", 0);
        r.parse_ok = row.value("parse_ok", false);
        out.push_back(std::move(r));
    }
    return out;
}

// --- enriched ----------------------------------------------------------------

json enriched_to_json(const augment::EnrichedSection& section,
                      const std::vector<AnchorAudit>& audits) {
    json added = json::array();
    for (size_t i = 0; i < section.added.size(); ++i) {
        const auto& prov = section.provenance[i];
        json row = {{"text", section.added[i]},
                    {"origin", augment::provenance_name(prov.origin)},
                    {"anchors", std::vector<int>(prov.anchors.begin(), prov.anchors.end())}};
        if (prov.source) {
            row["source"] = {{"begin", prov.source->begin}, {"end", prov.source->end}};
        }
        added.push_back(std::move(row));
    }
    json audit_rows = json::array();
    for (const auto& a : audits) {
        audit_rows.push_back({{"anchor_index", a.anchor_index},
                              {"anchor_text", a.anchor_text},
                              {"candidates", a.candidates},
                              {"similarities", a.similarities},
                              {"mean", a.mean},
                              {"stddev", a.stddev},
                              {"selected", a.selected}});
    }
    return json{{"heading", section.heading},
                {"existing", section.existing},
                {"added", added},
                {"anchor_audits", audit_rows}};
}

augment::EnrichedSection enriched_from_json(const json& j) {
    augment::EnrichedSection s;
    s.heading = j.at("heading").get<std::string>();
    s.existing = j.at("existing").get<std::vector<std::string>>();
    for (const auto& row : j.at("added")) {
        s.added.push_back(row.at("text").get<std::string>());
        augment::AddedProvenance prov;
        prov.origin = row.at("origin").get<std::string>() == "external_book"
                          ? augment::Provenance::ExternalBook
                          : augment::Provenance::DirectTransfer;
        if (row.contains("source")) {
            prov.source = augment::SourceOffsets{row["source"].at("begin").get<size_t>(),
                                                 row["source"].at("end").get<size_t>()};
        }
        for (int a : row.value("anchors", std::vector<int>{})) prov.anchors.insert(a);
        s.provenance.push_back(std::move(prov));
    }
    return s;
}

// --- quality scores ----------------------------------------------------------

json scores_to_json(const quality::QualityScores& s) {
    return json{
        {"informativeness", s.informativeness},
        {"readability", s.readability},
        {"understandability", s.understandability},
        {"quality", s.quality},
        {"page_size_scaled", s.page_size_scaled},
        {"stats",
         {{"page_size_bytes", s.stats.page_size_bytes},
          {"n_sentences", s.stats.n_sentences},
          {"n_words", s.stats.n_words},
          {"n_complex_words", s.stats.n_complex_words},
          {"n_chars", s.stats.n_chars},
          {"n_letters", s.stats.n_letters},
          {"n_syllables", s.stats.n_syllables},
          {"n_polysyllables", s.stats.n_polysyllables}}},
        {"indices",
         {{"fk_grade", s.indices.fk_grade},
          {"coleman_liau", s.indices.coleman_liau},
          {"gunning_fog", s.indices.gunning_fog},
          {"smog", s.indices.smog},
          {"ari", s.indices.ari}}},
    };
}

quality::QualityScores scores_from_json(const json& j) {
    quality::QualityScores s;
    s.informativeness = j.at("informativeness").get<double>();
    s.readability = j.at("readability").get<double>();
    s.understandability = j.at("understandability").get<double>();
    s.quality = j.at("quality").get<double>();
    s.page_size_scaled = j.value("page_size_scaled", 0.0);
    const json& st = j.at("stats");
    s.stats.page_size_bytes = st.at("page_size_bytes").get<size_t>();
    s.stats.n_sentences = st.at("n_sentences").get<int>();
    s.stats.n_words = st.at("n_words").get<int>();
    s.stats.n_complex_words = st.at("n_complex_words").get<int>();
    s.stats.n_chars = st.at("n_chars").get<long>();
    s.stats.n_letters = st.at("n_letters").get<long>();
    s.stats.n_syllables = st.at("n_syllables").get<long>();
    s.stats.n_polysyllables = st.at("n_polysyllables").get<int>();
    const json& ix = j.at("indices");
    s.indices.fk_grade = ix.at("fk_grade").get<double>();
    s.indices.coleman_liau = ix.at("coleman_liau").get<double>();
    s.indices.gunning_fog = ix.at("gunning_fog").get<double>();
    s.indices.smog = ix.at("smog").get<double>();
    s.indices.ari = ix.at("ari").get<double>();
    return s;
}

}  // namespace wikigap::artifacts
