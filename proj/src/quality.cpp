#include "wikigap/quality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "wikigap/errors.hpp"
#include "wikigap/text.hpp"

namespace wikigap::quality {

namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

double safe_div(double a, double b) {
    return b == 0.0 ? 0.0 : a / b;
}

}  // namespace

int syllable_count(const std::string& word) {
    std::string w;
    for (char c : word) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (w.empty()) return 1;

    int groups = 0;
    bool in_group = false;
    for (char c : w) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }

    size_t n = w.size();
    if (groups > 1 && n >= 2 && w[n - 1] == 'e' && !is_vowel(w[n - 2])) {
        if (w[n - 2] == 'l') {
            // "-le": silent only when a vowel precedes the 'l' ("whale" vs "able")
            if (n >= 3 && is_vowel(w[n - 3])) --groups;
        } else {
            --groups;
        }
    } else if (groups > 1 && n >= 3 && w[n - 1] == 'd' && w[n - 2] == 'e' &&
               !is_vowel(w[n - 3]) && w[n - 3] != 't' && w[n - 3] != 'd') {
        --groups;
    }
    return std::max(groups, 1);
}

TextStats compute_stats(const std::string& text) {
    if (text.empty()) throw EmptyTextError("compute_stats: empty text");

    TextStats stats;
    stats.page_size_bytes = text.size();
    stats.n_sentences = std::max<int>(1, static_cast<int>(text::split_sentences(text).size()));

    for (const auto& word : text::word_tokens(text)) {
        ++stats.n_words;
        for (char c : word) {
            unsigned char u = static_cast<unsigned char>(c);
            if (std::isalpha(u)) {
                ++stats.n_letters;
                ++stats.n_chars;
            } else if (std::isdigit(u)) {
                ++stats.n_chars;
            }
        }
        int syll = syllable_count(word);
        stats.n_syllables += syll;
        if (syll >= 3) {
            ++stats.n_complex_words;
            ++stats.n_polysyllables;
        }
    }
    return stats;
}

ReadabilityIndices readability_indices(const TextStats& stats) {
    if (stats.n_words < 1 || stats.n_sentences < 1) {
        throw DegenerateStatsError("readability_indices: need at least one word and sentence");
    }
    double words = stats.n_words;
    double sentences = stats.n_sentences;
    double words_per_sentence = words / sentences;

    ReadabilityIndices idx;
    idx.fk_grade = 0.39 * words_per_sentence +
                   11.8 * (static_cast<double>(stats.n_syllables) / words) - 15.59;
    double letters_per_100 = 100.0 * static_cast<double>(stats.n_letters) / words;
    double sentences_per_100 = 100.0 * sentences / words;
    idx.coleman_liau = 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
    idx.gunning_fog =
        0.4 * (words_per_sentence + 100.0 * static_cast<double>(stats.n_complex_words) / words);
    idx.smog = 1.0430 * std::sqrt(static_cast<double>(stats.n_polysyllables) * 30.0 / sentences) +
               3.1291;
    idx.ari = 4.71 * (static_cast<double>(stats.n_chars) / words) + 0.5 * words_per_sentence -
              21.43;
    return idx;
}

QualityScores composites(const TextStats& stats, const ReadabilityIndices& indices,
                         double page_size_divisor) {
    if (page_size_divisor <= 0.0) throw InvalidParamsError("page_size_divisor must be positive");
    QualityScores q;
    q.stats = stats;
    q.indices = indices;
    q.page_size_scaled = static_cast<double>(stats.page_size_bytes) / page_size_divisor;

    double words = stats.n_words;
    q.informativeness = 0.12 * q.page_size_scaled + 0.151 * stats.n_sentences +
                        0.154 * stats.n_words + 0.155 * stats.n_complex_words;
    q.readability = 0.213 * indices.fk_grade + 0.185 * indices.coleman_liau +
                    0.26 * safe_div(stats.n_complex_words, words) +
                    0.253 * safe_div(static_cast<double>(stats.n_syllables), words);
    q.understandability = 0.393 * indices.gunning_fog + 0.352 * indices.smog +
                          0.181 * indices.ari +
                          0.344 * safe_div(words, static_cast<double>(stats.n_sentences));
    q.quality = 0.255 * q.informativeness + 0.654 * q.readability + 0.557 * q.understandability;
    return q;
}

QualityScores score_text(const std::string& text, double page_size_divisor) {
    TextStats stats = compute_stats(text);
    ReadabilityIndices indices = readability_indices(stats);
    return composites(stats, indices, page_size_divisor);
}

double bleu(const std::string& candidate, const std::vector<std::string>& references, int max_n) {
    if (max_n < 1) throw InvalidParamsError("bleu: max_n must be >= 1");
    auto cand = text::word_tokens(candidate);
    if (cand.empty()) throw EmptyInputError("bleu: empty candidate");
    std::vector<std::vector<std::string>> refs;
    for (const auto& r : references) {
        auto toks = text::word_tokens(r);
        if (!toks.empty()) refs.push_back(std::move(toks));
    }
    if (refs.empty()) throw EmptyInputError("bleu: no nonempty references");

    auto ngram_counts = [](const std::vector<std::string>& toks, int n) {
        std::map<std::string, int> counts;
        if (static_cast<int>(toks.size()) < n) return counts;
        for (size_t i = 0; i + n <= toks.size(); ++i) {
            std::string key;
            for (int j = 0; j < n; ++j) {
                key += toks[i + j];
                key.push_back('\x1f');
            }
            ++counts[key];
        }
        return counts;
    };

    double log_precision = 0.0;
    int used_orders = 0;
    for (int n = 1; n <= max_n; ++n) {
        auto cand_counts = ngram_counts(cand, n);
        long total = 0;
        for (const auto& [k, c] : cand_counts) total += c;
        if (total == 0) break;  // candidate too short for this order

        std::map<std::string, int> max_ref;
        for (const auto& ref : refs) {
            for (const auto& [k, c] : ngram_counts(ref, n)) {
                max_ref[k] = std::max(max_ref[k], c);
            }
        }
        long matched = 0;
        for (const auto& [k, c] : cand_counts) {
            auto it = max_ref.find(k);
            if (it != max_ref.end()) matched += std::min(c, it->second);
        }
        if (matched == 0) return 0.0;
        log_precision += std::log(static_cast<double>(matched) / static_cast<double>(total));
        ++used_orders;
    }

    // closest reference length; ties prefer the shorter
    size_t c_len = cand.size();
    size_t r_len = refs[0].size();
    for (const auto& ref : refs) {
        size_t d_new = ref.size() > c_len ? ref.size() - c_len : c_len - ref.size();
        size_t d_old = r_len > c_len ? r_len - c_len : c_len - r_len;
        if (d_new < d_old || (d_new == d_old && ref.size() < r_len)) r_len = ref.size();
    }
    double brevity = c_len >= r_len
                         ? 1.0
                         : std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len));
    return brevity * std::exp(log_precision / used_orders);
}

double fleiss_kappa(const AnnotationMatrix& m) {
    size_t subjects = m.counts.size();
    if (subjects < 2) throw DegenerateMatrixError("fleiss_kappa: need at least 2 subjects");
    int raters = m.raters_per_subject;
    if (raters < 2) throw DegenerateMatrixError("fleiss_kappa: need at least 2 raters");
    size_t categories = m.counts[0].size();
    if (categories < 2) throw DegenerateMatrixError("fleiss_kappa: need at least 2 categories");

    std::vector<double> category_share(categories, 0.0);
    double agreement_sum = 0.0;
    for (const auto& row : m.counts) {
        if (row.size() != categories) throw DegenerateMatrixError("fleiss_kappa: ragged matrix");
        int row_sum = 0;
        double sq = 0.0;
        for (size_t j = 0; j < categories; ++j) {
            row_sum += row[j];
            sq += static_cast<double>(row[j]) * row[j];
            category_share[j] += row[j];
        }
        if (row_sum != raters) {
            throw DegenerateMatrixError("fleiss_kappa: row sum != raters_per_subject");
        }
        agreement_sum += (sq - raters) / (static_cast<double>(raters) * (raters - 1));
    }
    double observed = agreement_sum / static_cast<double>(subjects);
    double expected = 0.0;
    double total = static_cast<double>(subjects) * raters;
    for (double share : category_share) {
        double p = share / total;
        expected += p * p;
    }
    if (1.0 - expected < 1e-12) {
        // all mass in one category forces perfect per-subject agreement
        if (observed >= 1.0 - 1e-12) return 1.0;
        throw DegenerateMatrixError("fleiss_kappa: degenerate marginals without agreement");
    }
    return (observed - expected) / (1.0 - expected);
}

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return {mean, std::sqrt(var)};
}

std::array<GroupStats, 3> bin_informativeness(const std::vector<double>& scores) {
    std::array<GroupStats, 3> groups;
    for (double s : scores) {
        if (s < 0.0) throw InvalidParamsError("bin_informativeness: negative score");
        size_t g = s < 50.0 ? 0 : (s < 100.0 ? 1 : 2);
        groups[g].scores.push_back(s);
    }
    for (auto& g : groups) {
        auto [mean, stddev] = mean_stddev(g.scores);
        g.mean = mean;
        g.stddev = stddev;
    }
    return groups;
}

}  // namespace wikigap::quality
