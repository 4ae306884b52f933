#include "cfceval/dimensions.hpp"

#include "cfceval/errors.hpp"
#include "cfceval/lang_tables.hpp"
#include "cfceval/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace cfceval {

const char* to_string(TransformTag tag) {
    switch (tag) {
    case TransformTag::Original: return "original";
    case TransformTag::Renamed: return "renamed";
    case TransformTag::Restructured: return "restructured";
    case TransformTag::RenamedRestructured: return "renamed_restructured";
    }
    return "original";
}

std::optional<TransformTag> transform_from_string(const std::string& name) {
    if (name == "original") return TransformTag::Original;
    if (name == "renamed") return TransformTag::Renamed;
    if (name == "restructured") return TransformTag::Restructured;
    if (name == "renamed_restructured") return TransformTag::RenamedRestructured;
    return std::nullopt;
}

const char* to_string(Dimension d) {
    switch (d) {
    case Dimension::PLanQul: return "planqul";
    case Dimension::FixCap: return "fixcap";
    case Dimension::PTFixCap: return "ptfixcap";
    case Dimension::ELeRelv: return "elerelv";
    }
    return "planqul";
}

const char* to_string(PlanQulVerdict v) { return v == PlanQulVerdict::Good ? "good" : "poor"; }
const char* to_string(FixVerdict v) { return v == FixVerdict::Fixed ? "fixed" : "not_fixed"; }
const char* to_string(ResolveVerdict v) {
    return v == ResolveVerdict::Resolved ? "resolved" : "unresolved";
}
const char* to_string(RelevanceVerdict v) {
    return v == RelevanceVerdict::Relevant ? "relevant" : "irrelevant";
}

namespace {

bool brackets_balanced(const std::vector<Token>& tokens) {
    std::vector<char> stack;
    for (const Token& t : tokens) {
        if (t.text.size() != 1) continue;
        if (t.kind != TokenKind::Delimiter && t.kind != TokenKind::Operator) continue;
        const char c = t.text[0];
        switch (c) {
        case '(': stack.push_back(')'); break;
        case '[': stack.push_back(']'); break;
        case '{': stack.push_back('}'); break;
        case ')':
        case ']':
        case '}':
            if (stack.empty() || stack.back() != c) return false;
            stack.pop_back();
            break;
        default: break;
        }
    }
    return stack.empty();
}

} // namespace

PlanQulVerdict check_planqul(const std::optional<std::string>& generated, LanguageId language) {
    if (!generated) return PlanQulVerdict::Poor;
    LexResult lexed = tokenize_fine(*generated, language);
    if (!lexed.ok()) return PlanQulVerdict::Poor; // unbalanced quote
    if (lexed.tokens.empty()) return PlanQulVerdict::Poor;
    if (!brackets_balanced(lexed.tokens)) return PlanQulVerdict::Poor;
    const std::string& last = lexed.tokens.back().text;
    if (!last.empty() && LangTables::get(language).is_invalid_terminal(last.back()))
        return PlanQulVerdict::Poor;
    return PlanQulVerdict::Good;
}

bool check_exact_match(std::string_view generated, const std::vector<std::string>& references,
                       LanguageId language) {
    LexResult cand = tokenize_fine(generated, language);
    if (!cand.ok()) return false;
    const std::vector<std::string> cand_texts = token_texts(cand.tokens);
    for (const std::string& ref : references) {
        LexResult lexed = tokenize_fine(ref, language);
        if (!lexed.ok()) continue;
        if (token_texts(lexed.tokens) == cand_texts) return true;
    }
    return false;
}

RelevanceVerdict check_elerelv(const MetricBreakdown& breakdown, double threshold) {
    return breakdown.elrm >= threshold ? RelevanceVerdict::Relevant
                                       : RelevanceVerdict::Irrelevant;
}

DimensionReport evaluate_instance(const EvalInstance& instance, const DimensionConfig& config) {
    if (instance.references.empty())
        throw InputError(instance.id + ": instance has no references");

    DimensionReport report;
    report.planqul = check_planqul(instance.generated, instance.language);
    if (report.planqul == PlanQulVerdict::Poor) return report;

    const bool matched =
        check_exact_match(*instance.generated, instance.references, instance.language);
    if (instance.transform == TransformTag::Original) {
        report.fixcap = matched ? FixVerdict::Fixed : FixVerdict::NotFixed;
    } else {
        report.ptfixcap = matched ? ResolveVerdict::Resolved : ResolveVerdict::Unresolved;
    }
    if (!matched) {
        try {
            report.breakdown = elrm_score(*instance.generated, instance.references,
                                          instance.language, config.metric);
        } catch (const InputError& e) {
            throw InputError(instance.id + ": " + e.what());
        }
        report.elerelv = check_elerelv(*report.breakdown, config.elerelv_threshold);
    }
    return report;
}

} // namespace cfceval
