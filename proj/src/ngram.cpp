#include "cfceval/ngram.hpp"

#include "cfceval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <unordered_map>

namespace cfceval {

namespace {

// Separator for building n-gram keys from token texts. Source tokens never
// contain control bytes.
constexpr char kGramSep = '\x1F';

/// N-gram counts with deterministic first-appearance iteration order, so
/// float accumulation never depends on hash layout.
struct GramCounts {
    std::vector<std::string> keys;
    std::vector<long> counts;
    std::vector<TokenKind> kinds; // kind of first token of first occurrence; unigrams only
    std::unordered_map<std::string, std::size_t> index;

    void add(std::string key, TokenKind kind) {
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, keys.size());
            keys.push_back(std::move(key));
            counts.push_back(1);
            kinds.push_back(kind);
        } else {
            ++counts[it->second];
        }
    }

    long count_of(const std::string& key) const {
        auto it = index.find(key);
        return it == index.end() ? 0 : counts[it->second];
    }

    std::size_t size() const { return keys.size(); }
};

std::string gram_key(const std::vector<std::string>& texts, std::size_t begin, int n) {
    std::string key;
    for (int j = 0; j < n; ++j) {
        if (j > 0) key.push_back(kGramSep);
        key += texts[begin + j];
    }
    return key;
}

GramCounts count_grams(const std::vector<std::string>& texts, int n,
                       const std::vector<TokenKind>* token_kinds = nullptr) {
    GramCounts gc;
    if (texts.size() < static_cast<std::size_t>(n)) return gc;
    for (std::size_t i = 0; i + n <= texts.size(); ++i) {
        gc.add(gram_key(texts, i, n),
               token_kinds ? (*token_kinds)[i] : TokenKind::Other);
    }
    return gc;
}

long window_count(std::size_t len, int n) {
    return len >= static_cast<std::size_t>(n) ? static_cast<long>(len) - n + 1 : 0;
}

double smoothed_or_zero(double numerator, double denominator, const SmoothingPolicy& smoothing,
                        bool& zeroed) {
    if (numerator > 0) return numerator / denominator;
    if (smoothing.scheme == SmoothingScheme::Epsilon)
        return smoothing.epsilon / denominator;
    zeroed = true;
    return 0.0;
}

/// One per-order score together with its configured weight. Orders without
/// any n-gram window are never added, and the weights of the remaining
/// orders are renormalized, so identical short sequences still reach 100.
struct OrderScores {
    std::vector<double> values;
    std::vector<double> weights;

    void add(double value, double weight) {
        values.push_back(value);
        weights.push_back(weight);
    }
};

double finish_score(const OrderScores& orders, double bp) {
    double weight_sum = 0.0;
    for (double w : orders.weights) weight_sum += w;
    if (weight_sum <= 0.0) return 0.0;
    double log_sum = 0.0;
    for (std::size_t i = 0; i < orders.values.size(); ++i) {
        if (orders.weights[i] == 0.0) continue;
        log_sum += orders.weights[i] / weight_sum * std::log(orders.values[i]);
    }
    return std::clamp(100.0 * bp * std::exp(log_sum), 0.0, 100.0);
}

struct TokenView {
    std::vector<std::string> texts;
    std::vector<TokenKind> kinds;
};

TokenView view_of(const std::vector<Token>& tokens) {
    TokenView v;
    v.texts.reserve(tokens.size());
    v.kinds.reserve(tokens.size());
    for (const Token& t : tokens) {
        v.texts.push_back(t.text);
        v.kinds.push_back(t.kind);
    }
    return v;
}

} // namespace

void NgramConfig::validate() const {
    if (max_n < 1) throw ConfigError("max_n must be >= 1");
    if (order_weights.size() != static_cast<std::size_t>(max_n))
        throw ConfigError("order_weights must have max_n entries");
    double sum = 0.0;
    for (double w : order_weights) {
        if (w < 0.0) throw ConfigError("order_weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("order_weights must sum to 1");
    if (smoothing.scheme == SmoothingScheme::Epsilon &&
        !(smoothing.epsilon > 0.0 && smoothing.epsilon <= 1.0))
        throw ConfigError("smoothing epsilon must be in (0, 1]");
    if (empty_kwop_score < 0.0 || empty_kwop_score > 100.0)
        throw ConfigError("empty_kwop_score must be in [0, 100]");
}

void TokenWeights::validate() const {
    if (keyword_weight <= 0.0 || default_weight <= 0.0)
        throw ConfigError("token weights must be strictly positive");
}

double brevity_penalty(std::size_t candidate_len, std::size_t effective_ref_len) {
    if (candidate_len == 0) return 0.0;
    if (candidate_len > effective_ref_len) return 1.0;
    return std::exp(1.0 - static_cast<double>(effective_ref_len) /
                              static_cast<double>(candidate_len));
}

std::size_t effective_reference_length(std::size_t candidate_len,
                                       const std::vector<std::size_t>& reference_lens,
                                       EffectiveRefMode mode) {
    std::size_t best = 0;
    bool have = false;
    for (std::size_t len : reference_lens) {
        if (!have) {
            best = len;
            have = true;
            continue;
        }
        if (mode == EffectiveRefMode::Shortest) {
            best = std::min(best, len);
            continue;
        }
        const auto dist = [&](std::size_t l) {
            return l > candidate_len ? l - candidate_len : candidate_len - l;
        };
        if (dist(len) < dist(best) || (dist(len) == dist(best) && len < best)) best = len;
    }
    return best;
}

double bleu(const TokenTextSeq& candidate, const std::vector<TokenTextSeq>& references,
            const NgramConfig& config) {
    config.validate();
    if (references.empty()) throw ConfigError("bleu requires at least one reference");
    if (candidate.empty()) return 0.0;

    OrderScores orders;
    for (int n = 1; n <= config.max_n; ++n) {
        const long denominator = window_count(candidate.size(), n);
        if (denominator == 0) break; // candidate too short for this order
        GramCounts cand_counts = count_grams(candidate, n);
        std::vector<long> max_ref(cand_counts.size(), 0);
        for (const TokenTextSeq& ref : references) {
            GramCounts ref_counts = count_grams(ref, n);
            for (std::size_t i = 0; i < cand_counts.size(); ++i)
                max_ref[i] = std::max(max_ref[i], ref_counts.count_of(cand_counts.keys[i]));
        }
        long numerator = 0;
        for (std::size_t i = 0; i < cand_counts.size(); ++i)
            numerator += std::min(cand_counts.counts[i], max_ref[i]);
        if (n == 1 && numerator == 0) return 0.0;
        bool zeroed = false;
        orders.add(smoothed_or_zero(static_cast<double>(numerator),
                                    static_cast<double>(denominator), config.smoothing, zeroed),
                   config.order_weights[n - 1]);
        if (zeroed) return 0.0;
    }

    std::vector<std::size_t> ref_lens;
    ref_lens.reserve(references.size());
    for (const TokenTextSeq& ref : references) ref_lens.push_back(ref.size());
    const double bp = brevity_penalty(
        candidate.size(),
        effective_reference_length(candidate.size(), ref_lens, config.effective_ref));
    return finish_score(orders, bp);
}

double weighted_bleu(const std::vector<Token>& candidate,
                     const std::vector<std::vector<Token>>& references,
                     const TokenWeights& weights, const NgramConfig& config) {
    config.validate();
    weights.validate();
    if (references.empty()) throw ConfigError("weighted_bleu requires at least one reference");
    if (candidate.empty()) return 0.0;

    const TokenView cand = view_of(candidate);
    std::vector<TokenView> refs;
    refs.reserve(references.size());
    for (const auto& r : references) refs.push_back(view_of(r));

    std::vector<std::size_t> ref_lens;
    ref_lens.reserve(refs.size());
    for (const auto& r : refs) ref_lens.push_back(r.texts.size());
    const double bp = brevity_penalty(
        cand.texts.size(),
        effective_reference_length(cand.texts.size(), ref_lens, config.effective_ref));

    const auto token_weight = [&](TokenKind kind) {
        return kind == TokenKind::Keyword ? weights.keyword_weight : weights.default_weight;
    };
    const bool recall = config.weighted_mode == WeightedMode::RecallFullRange;
    const int max_order = config.weighted_mode == WeightedMode::PrecisionUnigram ? 1 : config.max_n;

    OrderScores orders;
    for (int n = 1; n <= max_order; ++n) {
        // Orders with no window on the counted side carry no information.
        long windows = 0;
        if (recall) {
            for (const TokenView& ref : refs) windows += window_count(ref.texts.size(), n);
        } else {
            windows = window_count(cand.texts.size(), n);
        }
        if (windows == 0) break;

        double numerator = 0.0;
        double denominator = 0.0;
        if (recall) {
            GramCounts cand_counts = count_grams(cand.texts, n);
            for (const TokenView& ref : refs) {
                GramCounts ref_counts = count_grams(ref.texts, n, &ref.kinds);
                for (std::size_t i = 0; i < ref_counts.size(); ++i) {
                    const long clipped =
                        std::min(ref_counts.counts[i], cand_counts.count_of(ref_counts.keys[i]));
                    const double w = n == 1 ? token_weight(ref_counts.kinds[i]) : 1.0;
                    numerator += w * static_cast<double>(clipped);
                    denominator += w * static_cast<double>(ref_counts.counts[i]);
                }
            }
        } else {
            GramCounts cand_counts = count_grams(cand.texts, n, &cand.kinds);
            std::vector<long> max_ref(cand_counts.size(), 0);
            for (const TokenView& ref : refs) {
                GramCounts ref_counts = count_grams(ref.texts, n);
                for (std::size_t i = 0; i < cand_counts.size(); ++i)
                    max_ref[i] = std::max(max_ref[i], ref_counts.count_of(cand_counts.keys[i]));
            }
            for (std::size_t i = 0; i < cand_counts.size(); ++i) {
                const long clipped = std::min(cand_counts.counts[i], max_ref[i]);
                const double w = n == 1 ? token_weight(cand_counts.kinds[i]) : 1.0;
                numerator += w * static_cast<double>(clipped);
                denominator += w * static_cast<double>(cand_counts.counts[i]);
            }
        }
        if (denominator <= 0.0) denominator = 1.0;
        if (n == 1 && numerator <= 0.0) return 0.0;
        bool zeroed = false;
        orders.add(smoothed_or_zero(numerator, denominator, config.smoothing, zeroed),
                   config.order_weights[n - 1]);
        if (zeroed) return 0.0;
    }
    if (orders.values.empty()) return 0.0;

    if (config.weighted_mode == WeightedMode::PrecisionUnigram)
        return std::clamp(100.0 * bp * orders.values[0], 0.0, 100.0);
    return finish_score(orders, bp);
}

double kwop_bleu(const TokenTextSeq& candidate_kwops,
                 const std::vector<TokenTextSeq>& reference_kwops, const NgramConfig& config) {
    config.validate();
    if (reference_kwops.empty()) throw ConfigError("kwop_bleu requires at least one reference");
    const bool refs_all_empty =
        std::all_of(reference_kwops.begin(), reference_kwops.end(),
                    [](const TokenTextSeq& r) { return r.empty(); });
    if (candidate_kwops.empty() && refs_all_empty) return config.empty_kwop_score;
    return bleu(candidate_kwops, reference_kwops, config);
}

} // namespace cfceval
