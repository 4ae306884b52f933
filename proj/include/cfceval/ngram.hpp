#pragma once

#include "cfceval/token.hpp"

#include <cstddef>
#include <vector>

namespace cfceval {

enum class SmoothingScheme {
    None,    // zero clipped count at any order zeroes the score
    Epsilon, // zero numerator at order n becomes epsilon/denominator
};

struct SmoothingPolicy {
    SmoothingScheme scheme = SmoothingScheme::Epsilon;
    double epsilon = 0.1;
};

/// How the keyword-weighted n-gram score aggregates matches.
///
/// RecallFullRange matches CodeBLEU's weighted n-gram component: clipped
/// counts are taken over reference n-grams (coverage of the reference), token
/// weights apply at the unigram order, all orders combine under Eq.-4 style
/// geometric averaging with the brevity penalty. This is the calibrated
/// default; the precision flavors are kept for comparison runs.
enum class WeightedMode {
    RecallFullRange,
    PrecisionFullRange,
    PrecisionUnigram,
};

/// Which reference length feeds the brevity penalty. Shortest keeps scores
/// monotone under added references (adding one can only help); Closest is the
/// other common convention.
enum class EffectiveRefMode { Shortest, Closest };

struct NgramConfig {
    int max_n = 4;
    /// Per-order weights w_n; must have max_n entries summing to 1. Orders
    /// with no n-gram windows on short sequences are skipped and the
    /// remaining weights renormalized, so identical sequences always score
    /// 100 regardless of length.
    std::vector<double> order_weights = {0.25, 0.25, 0.25, 0.25};
    SmoothingPolicy smoothing;
    WeightedMode weighted_mode = WeightedMode::RecallFullRange;
    EffectiveRefMode effective_ref = EffectiveRefMode::Shortest;
    /// kwop_bleu result when candidate and all references have no
    /// keyword/operator tokens at all.
    double empty_kwop_score = 0.0;

    void validate() const; // throws ConfigError
};

struct TokenWeights {
    double keyword_weight = 1.0;
    double default_weight = 0.2;

    void validate() const; // throws ConfigError
};

/// Eq.-3 style brevity penalty: 1 when the candidate is longer than the
/// effective reference, e^(1 - r/c) otherwise, 0 for an empty candidate.
double brevity_penalty(std::size_t candidate_len, std::size_t effective_ref_len);

/// Shortest mode: the minimum reference length. Closest mode: the reference
/// length closest to the candidate length, ties toward the shorter.
std::size_t effective_reference_length(std::size_t candidate_len,
                                       const std::vector<std::size_t>& reference_lens,
                                       EffectiveRefMode mode);

using TokenTextSeq = std::vector<std::string>;

/// Standard BLEU over token texts, scaled 0-100. Clipped counts take the
/// maximum over all references. Empty candidate scores 0; an empty reference
/// list is a configuration error.
double bleu(const TokenTextSeq& candidate, const std::vector<TokenTextSeq>& references,
            const NgramConfig& config);

/// Keyword-weighted n-gram score over fine tokens (kinds decide keyword
/// membership), scaled 0-100. Aggregation per config.weighted_mode.
double weighted_bleu(const std::vector<Token>& candidate,
                     const std::vector<std::vector<Token>>& references,
                     const TokenWeights& weights, const NgramConfig& config);

/// BLEU over keyword/operator subsequences. When the candidate and every
/// reference are empty, returns config.empty_kwop_score.
double kwop_bleu(const TokenTextSeq& candidate_kwops,
                 const std::vector<TokenTextSeq>& reference_kwops, const NgramConfig& config);

} // namespace cfceval
