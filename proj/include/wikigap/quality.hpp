#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace wikigap::quality {

struct TextStats {
    size_t page_size_bytes = 0;  // UTF-8 byte length
    int n_sentences = 0;
    int n_words = 0;
    int n_complex_words = 0;  // >= 3 syllables
    long n_chars = 0;         // alphanumeric characters
    long n_letters = 0;       // alphabetic characters
    long n_syllables = 0;
    int n_polysyllables = 0;  // same rule as complex words
};

// Deterministic rule-based syllable count of a single word:
//   1. keep ASCII letters only, lowercased; a letterless word counts 1;
//   2. count maximal groups of consecutive vowels (a e i o u y);
//   3. final silent 'e' (own group after a consonant) subtracts one, except a
//      syllabic "-le" after a consonant ("able");
//   4. final "-ed" whose 'e' is its own group after a consonant other than
//      t/d subtracts one ("walked", but not "wanted");
//   5. never below one.
int syllable_count(const std::string& word);

TextStats compute_stats(const std::string& text);

struct ReadabilityIndices {
    double fk_grade = 0.0;
    double coleman_liau = 0.0;
    double gunning_fog = 0.0;
    double smog = 0.0;
    double ari = 0.0;
};

// Canonical published formulas:
//   FK   = 0.39*(W/S) + 11.8*(Syll/W) - 15.59
//   CL   = 0.0588*L - 0.296*Sc - 15.8   (L, Sc per 100 words)
//   GF   = 0.4*((W/S) + 100*(complex/W))
//   SMOG = 1.0430*sqrt(polysyllables*30/S) + 3.1291
//   ARI  = 4.71*(chars/W) + 0.5*(W/S) - 21.43
ReadabilityIndices readability_indices(const TextStats& stats);

struct QualityScores {
    double informativeness = 0.0;
    double readability = 0.0;
    double understandability = 0.0;
    double quality = 0.0;
    TextStats stats;
    ReadabilityIndices indices;
    double page_size_scaled = 0.0;  // bytes / page_size_divisor
};

// Weighted composites:
//   Info = 0.12*page_size + 0.151*S + 0.154*W + 0.155*complex
//   Read = 0.213*FK + 0.185*CL + 0.26*(complex/W) + 0.253*(Syll/W)
//   Und  = 0.393*GF + 0.352*SMOG + 0.181*ARI + 0.344*(W/S)
//   Qual = 0.255*Info + 0.654*Read + 0.557*Und
// page_size is the byte length divided by `page_size_divisor`; the raw bytes
// stay available in stats.
QualityScores composites(const TextStats& stats, const ReadabilityIndices& indices,
                         double page_size_divisor = 100.0);

QualityScores score_text(const std::string& text, double page_size_divisor = 100.0);

// Sentence BLEU: geometric mean of modified n-gram precisions (orders with no
// candidate n-grams are skipped) times the brevity penalty. Whitespace tokens.
double bleu(const std::string& candidate, const std::vector<std::string>& references,
            int max_n = 4);

struct AnnotationMatrix {
    std::vector<std::vector<int>> counts;  // subjects x categories
    int raters_per_subject = 0;
};

double fleiss_kappa(const AnnotationMatrix& m);

struct GroupStats {
    std::vector<double> scores;
    double mean = 0.0;
    double stddev = 0.0;  // population
};

// Partition into [0,50), [50,100), [100,inf); boundaries assign rightward.
std::array<GroupStats, 3> bin_informativeness(const std::vector<double>& scores);

// Population mean/stddev helper shared with the report.
std::pair<double, double> mean_stddev(const std::vector<double>& values);

}  // namespace wikigap::quality
