#pragma once

#include "cfceval/dimensions.hpp"
#include "cfceval/token.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cfceval {

/// Ordered, injective identifier-to-identifier mapping. Values never collide
/// with keywords, operators, or any other identifier in the stream the map
/// was built for.
struct RenameMap {
    std::vector<std::pair<std::string, std::string>> pairs;

    const std::string* find(const std::string& key) const;
    bool empty() const { return pairs.empty(); }
    RenameMap inverted() const;
};

/// Deterministic map over Identifier tokens not in `preserve`, in
/// first-appearance order, to fresh names "v1", "v2", ... that collide with
/// nothing in the stream, the keyword table, `preserve`, or `avoid`.
RenameMap build_rename_map(const std::vector<Token>& tokens, LanguageId language,
                           const std::set<std::string>& preserve = {},
                           const std::set<std::string>& avoid = {});

/// Replace every Identifier token whose text is mapped; counts, kinds, order
/// and literals are unchanged. Throws ConfigError when a map key collides
/// with a non-identifier token text.
std::vector<Token> apply_rename(const std::vector<Token>& tokens, const RenameMap& map);

/// Build one rename map from the instance's function and apply it
/// consistently to the function, the vulnerable code, and every reference.
/// The result is tagged Renamed; a generated output, if present, is carried
/// over untouched. Requires transform == Original.
EvalInstance transform_instance(const EvalInstance& instance,
                                const std::set<std::string>& preserve = {});

} // namespace cfceval
