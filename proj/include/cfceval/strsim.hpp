#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cfceval {

/// The three string-literal similarity primitives for one candidate/reference
/// literal pair, plus their arithmetic mean. All values in [0, 1].
struct LiteralPairScore {
    double levenshtein_sim = 0.0;
    double matching_blocks_ratio = 0.0;
    double jaccard_sim = 0.0;
    double mean = 0.0;
};

/// 1 - editdistance(a,b) / max(|a|,|b|); 1 when both empty.
double levenshtein_sim(std::string_view a, std::string_view b);

/// Ratcliff/Obershelp ratio 2M / (|a|+|b|): M counts characters matched by
/// recursively taking the longest common contiguous block and recursing on
/// both flanks. 1 when both empty.
double matching_blocks_ratio(std::string_view a, std::string_view b);

/// |A∩B| / |A∪B| over whitespace-delimited word sets; 1 when both empty.
double jaccard_sim(std::string_view a, std::string_view b);

LiteralPairScore literal_pair_score(std::string_view a, std::string_view b);

/// Aggregate literal similarity on the 0-100 scale. Both lists empty -> 0;
/// one side empty -> 0; otherwise literals are greedily paired by best mean
/// score and the average is taken over max(|candidate|,|reference|), so
/// unpaired literals contribute 0.
double literal_similarity(const std::vector<std::string>& candidate_literals,
                          const std::vector<std::string>& reference_literals);

} // namespace cfceval
