#pragma once

#include "cfceval/elrm.hpp"
#include "cfceval/token.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfceval {

enum class TransformTag { Original, Renamed, Restructured, RenamedRestructured };

const char* to_string(TransformTag tag);
std::optional<TransformTag> transform_from_string(const std::string& name);

/// One evaluation unit: the vulnerable function, the vulnerable code inside
/// it, the secure reference fixes, and (optionally) a model-generated fix.
struct EvalInstance {
    std::string id;
    LanguageId language = LanguageId::Python;
    std::string cwe;
    TransformTag transform = TransformTag::Original;
    std::string function_source; // F
    std::string vulnerable_code; // C_v
    std::vector<std::string> references; // C_r, non-empty
    std::optional<std::string> generated; // C_g; absent = model produced nothing
};

enum class Dimension { PLanQul, FixCap, PTFixCap, ELeRelv };
const char* to_string(Dimension d);

enum class PlanQulVerdict { Poor, Good };
enum class FixVerdict { NotFixed, Fixed };
enum class ResolveVerdict { Unresolved, Resolved };
enum class RelevanceVerdict { Irrelevant, Relevant };

const char* to_string(PlanQulVerdict v);
const char* to_string(FixVerdict v);
const char* to_string(ResolveVerdict v);
const char* to_string(RelevanceVerdict v);

/// Per-instance verdicts. PLanQul gates everything: a Poor verdict leaves the
/// other fields absent. FixCap is populated for Original instances, PTFixCap
/// for transformed ones. ELeRelv (and its evidence breakdown) is populated
/// only when the repair verdict is NotFixed/Unresolved.
struct DimensionReport {
    PlanQulVerdict planqul = PlanQulVerdict::Poor;
    std::optional<FixVerdict> fixcap;
    std::optional<ResolveVerdict> ptfixcap;
    std::optional<RelevanceVerdict> elerelv;
    std::optional<MetricBreakdown> breakdown;
};

struct DimensionConfig {
    MetricConfig metric;
    double elerelv_threshold = 50.0;
};

/// Poor when the generation is absent or empty, fails to lex (unbalanced
/// quote), has unbalanced brackets, or ends in a character the language
/// tables list as an invalid terminal.
PlanQulVerdict check_planqul(const std::optional<std::string>& generated, LanguageId language);

/// Token-level exact match: the fine token stream of `generated` equals that
/// of some reference (whitespace- and comment-insensitive).
bool check_exact_match(std::string_view generated, const std::vector<std::string>& references,
                       LanguageId language);

/// Relevant iff breakdown.elrm >= threshold.
RelevanceVerdict check_elerelv(const MetricBreakdown& breakdown, double threshold);

/// Full per-instance evaluation: PLanQul gate, then exact-match repair
/// verdict, then metric breakdown and relevance for non-matching outputs.
/// Input errors are rethrown with the instance id attached.
DimensionReport evaluate_instance(const EvalInstance& instance, const DimensionConfig& config);

} // namespace cfceval
