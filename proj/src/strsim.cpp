#include "cfceval/strsim.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <vector>

namespace cfceval {

namespace {

std::size_t edit_distance(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<std::size_t> row(a.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t diag = row[0];
        row[0] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[i];
            row[i] = std::min({row[i] + 1, row[i - 1] + 1, subst});
        }
    }
    return row[a.size()];
}

struct Block {
    std::size_t a_pos = 0;
    std::size_t b_pos = 0;
    std::size_t len = 0;
};

/// Longest common contiguous block, earliest in `a` then in `b` on ties.
Block longest_block(std::string_view a, std::string_view b) {
    Block best;
    if (a.empty() || b.empty()) return best;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
            if (cur[j] > best.len) {
                best.len = cur[j];
                best.a_pos = i - cur[j];
                best.b_pos = j - cur[j];
            }
        }
        std::swap(prev, cur);
    }
    return best;
}

std::size_t matched_chars(std::string_view a, std::string_view b) {
    const Block block = longest_block(a, b);
    if (block.len == 0) return 0;
    return block.len +
           matched_chars(a.substr(0, block.a_pos), b.substr(0, block.b_pos)) +
           matched_chars(a.substr(block.a_pos + block.len), b.substr(block.b_pos + block.len));
}

std::set<std::string, std::less<>> word_set(std::string_view s) {
    std::set<std::string, std::less<>> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t begin = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > begin) words.emplace(s.substr(begin, i - begin));
    }
    return words;
}

} // namespace

double levenshtein_sim(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    const double longest = static_cast<double>(std::max(a.size(), b.size()));
    return 1.0 - static_cast<double>(edit_distance(a, b)) / longest;
}

double matching_blocks_ratio(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    // Greedy block selection is order-sensitive on ties; canonicalize the
    // argument order so the ratio is symmetric.
    if (b < a) std::swap(a, b);
    return 2.0 * static_cast<double>(matched_chars(a, b)) /
           static_cast<double>(a.size() + b.size());
}

double jaccard_sim(std::string_view a, std::string_view b) {
    const auto wa = word_set(a);
    const auto wb = word_set(b);
    if (wa.empty() && wb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& w : wa) inter += wb.count(w);
    const std::size_t uni = wa.size() + wb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

LiteralPairScore literal_pair_score(std::string_view a, std::string_view b) {
    LiteralPairScore s;
    s.levenshtein_sim = levenshtein_sim(a, b);
    s.matching_blocks_ratio = matching_blocks_ratio(a, b);
    s.jaccard_sim = jaccard_sim(a, b);
    s.mean = (s.levenshtein_sim + s.matching_blocks_ratio + s.jaccard_sim) / 3.0;
    return s;
}

double literal_similarity(const std::vector<std::string>& candidate_literals,
                          const std::vector<std::string>& reference_literals) {
    if (candidate_literals.empty() || reference_literals.empty()) return 0.0;

    struct Pair {
        double mean;
        std::size_t ci, ri;
    };
    std::vector<Pair> pairs;
    pairs.reserve(candidate_literals.size() * reference_literals.size());
    for (std::size_t ci = 0; ci < candidate_literals.size(); ++ci)
        for (std::size_t ri = 0; ri < reference_literals.size(); ++ri)
            pairs.push_back(
                {literal_pair_score(candidate_literals[ci], reference_literals[ri]).mean, ci, ri});
    // Best mean first; ties resolve by position so the pairing is deterministic.
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        if (a.ci != b.ci) return a.ci < b.ci;
        return a.ri < b.ri;
    });

    std::vector<bool> cand_used(candidate_literals.size(), false);
    std::vector<bool> ref_used(reference_literals.size(), false);
    double total = 0.0;
    std::size_t paired = 0;
    const std::size_t max_pairs = std::min(candidate_literals.size(), reference_literals.size());
    for (const Pair& p : pairs) {
        if (paired == max_pairs) break;
        if (cand_used[p.ci] || ref_used[p.ri]) continue;
        cand_used[p.ci] = ref_used[p.ri] = true;
        total += p.mean;
        ++paired;
    }
    const std::size_t denom = std::max(candidate_literals.size(), reference_literals.size());
    return 100.0 * total / static_cast<double>(denom);
}

} // namespace cfceval
