#include "cfceval/elrm.hpp"

#include "cfceval/errors.hpp"
#include "cfceval/lexer.hpp"
#include "cfceval/strsim.hpp"

#include <algorithm>
#include <cmath>

namespace cfceval {

void ElrmWeights::validate() const {
    if (alpha < 0 || beta < 0 || lambda < 0 || mu < 0)
        throw ConfigError("elrm weights must be non-negative");
    if (std::abs(alpha + beta + lambda + mu - 1.0) > 1e-9)
        throw ConfigError("elrm weights must sum to 1");
}

void MetricConfig::validate() const {
    ngram.validate();
    token_weights.validate();
    elrm_weights.validate();
    if (vacuous_literal_score < 0.0 || vacuous_literal_score > 100.0)
        throw ConfigError("vacuous_literal_score must be in [0, 100]");
}

double combine(double bleu_score, double weighted_bleu_score, double kwop_bleu_score,
               double literal_sim_score, const ElrmWeights& weights) {
    weights.validate();
    for (double c : {bleu_score, weighted_bleu_score, kwop_bleu_score, literal_sim_score}) {
        if (c < 0.0 || c > 100.0) throw InputError("metric component outside [0, 100]");
    }
    return weights.alpha * bleu_score + weights.beta * weighted_bleu_score +
           weights.lambda * kwop_bleu_score + weights.mu * literal_sim_score;
}

namespace {

std::vector<std::vector<Token>> lex_references(const std::vector<std::string>& references,
                                               LanguageId language) {
    std::vector<std::vector<Token>> streams;
    std::size_t failed = 0;
    for (const std::string& ref : references) {
        LexResult lexed = tokenize_fine(ref, language);
        if (lexed.ok()) {
            streams.push_back(std::move(lexed.tokens));
        } else {
            ++failed;
        }
    }
    if (streams.empty())
        throw InputError("no reference could be tokenized (" + std::to_string(failed) +
                         " lexical failure(s))");
    return streams;
}

} // namespace

MetricBreakdown elrm_score(std::string_view candidate, const std::vector<std::string>& references,
                           LanguageId language, const MetricConfig& config) {
    config.validate();
    if (references.empty()) throw ConfigError("elrm_score requires at least one reference");

    LexResult cand_lexed = tokenize_fine(candidate, language);
    if (!cand_lexed.ok()) {
        MetricBreakdown failed;
        failed.lex_failed = true;
        return failed;
    }
    const std::vector<Token>& cand_tokens = cand_lexed.tokens;
    const std::vector<std::vector<Token>> ref_tokens = lex_references(references, language);

    std::vector<TokenTextSeq> ref_texts;
    std::vector<TokenTextSeq> ref_kwops;
    ref_texts.reserve(ref_tokens.size());
    ref_kwops.reserve(ref_tokens.size());
    for (const auto& ref : ref_tokens) {
        ref_texts.push_back(token_texts(ref));
        ref_kwops.push_back(token_texts(extract_keywords_ops(ref)));
    }

    MetricBreakdown b;
    b.bleu = bleu(token_texts(cand_tokens), ref_texts, config.ngram);
    b.weighted_bleu = weighted_bleu(cand_tokens, ref_tokens, config.token_weights, config.ngram);
    b.kwop_bleu =
        kwop_bleu(token_texts(extract_keywords_ops(cand_tokens)), ref_kwops, config.ngram);

    const std::vector<std::string> cand_literals = extract_string_literals(cand_tokens);
    bool any_ref_literal = false;
    double best_literal = 0.0;
    for (const auto& ref : ref_tokens) {
        const std::vector<std::string> ref_literals = extract_string_literals(ref);
        if (!ref_literals.empty()) any_ref_literal = true;
        best_literal = std::max(best_literal, literal_similarity(cand_literals, ref_literals));
    }
    b.literal_sim = (cand_literals.empty() && !any_ref_literal) ? config.vacuous_literal_score
                                                                : best_literal;

    b.elrm = combine(b.bleu, b.weighted_bleu, b.kwop_bleu, b.literal_sim, config.elrm_weights);
    return b;
}

std::pair<double, double> baseline_bleu_scores(std::string_view candidate,
                                               const std::vector<std::string>& references,
                                               LanguageId language, const NgramConfig& config) {
    if (references.empty())
        throw ConfigError("baseline_bleu_scores requires at least one reference");

    std::vector<TokenTextSeq> coarse_refs;
    coarse_refs.reserve(references.size());
    for (const std::string& ref : references) coarse_refs.push_back(token_texts(tokenize_coarse(ref)));
    const double coarse = bleu(token_texts(tokenize_coarse(candidate)), coarse_refs, config);

    LexResult cand_lexed = tokenize_fine(candidate, language);
    double fine = 0.0;
    if (cand_lexed.ok()) {
        std::vector<TokenTextSeq> fine_refs;
        fine_refs.reserve(references.size());
        for (const auto& ref : lex_references(references, language))
            fine_refs.push_back(token_texts(ref));
        fine = bleu(token_texts(cand_lexed.tokens), fine_refs, config);
    }
    return {coarse, fine};
}

} // namespace cfceval
