#pragma once

#include "cfceval/ngram.hpp"
#include "cfceval/token.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfceval {

/// Combination weights for the four sub-metrics. Must be non-negative and sum
/// to 1.
struct ElrmWeights {
    double alpha = 0.10;  // BLEU
    double beta = 0.05;   // weighted BLEU
    double lambda = 0.80; // keyword/operator BLEU
    double mu = 0.05;     // string-literal similarity

    void validate() const; // throws ConfigError
};

/// The four sub-metric scores and their combination, all on the 0-100 scale.
struct MetricBreakdown {
    double bleu = 0.0;
    double weighted_bleu = 0.0;
    double kwop_bleu = 0.0;
    double literal_sim = 0.0;
    double elrm = 0.0;
    /// Set when the candidate failed to lex; all components are 0.
    bool lex_failed = false;
};

struct MetricConfig {
    NgramConfig ngram;
    TokenWeights token_weights;
    ElrmWeights elrm_weights;
    /// Literal component when neither side declares any string literal.
    /// 0 keeps the no-literals-means-no-credit behavior; set to 100 to treat
    /// the vacuous case as a match.
    double vacuous_literal_score = 0.0;

    void validate() const; // throws ConfigError
};

/// Exact linear combination of the four components (each in [0, 100]).
double combine(double bleu_score, double weighted_bleu_score, double kwop_bleu_score,
               double literal_sim_score, const ElrmWeights& weights);

/// Tokenize candidate and references, compute all four components
/// (multi-reference aware) and combine. A candidate that fails to lex yields
/// an all-zero breakdown with lex_failed set; if every reference fails to lex
/// an InputError is thrown.
MetricBreakdown elrm_score(std::string_view candidate, const std::vector<std::string>& references,
                           LanguageId language, const MetricConfig& config);

/// BLEU over the coarse (whitespace) and fine token streams, for correlation
/// studies against the combined metric. Returns {coarse, fine}.
std::pair<double, double> baseline_bleu_scores(std::string_view candidate,
                                               const std::vector<std::string>& references,
                                               LanguageId language, const NgramConfig& config);

} // namespace cfceval
