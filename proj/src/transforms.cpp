#include "cfceval/transforms.hpp"

#include "cfceval/errors.hpp"
#include "cfceval/lang_tables.hpp"
#include "cfceval/lexer.hpp"

#include <unordered_set>

namespace cfceval {

const std::string* RenameMap::find(const std::string& key) const {
    for (const auto& [from, to] : pairs)
        if (from == key) return &to;
    return nullptr;
}

RenameMap RenameMap::inverted() const {
    RenameMap inv;
    inv.pairs.reserve(pairs.size());
    for (const auto& [from, to] : pairs) inv.pairs.emplace_back(to, from);
    return inv;
}

RenameMap build_rename_map(const std::vector<Token>& tokens, LanguageId language,
                           const std::set<std::string>& preserve,
                           const std::set<std::string>& avoid) {
    const LangTables& tables = LangTables::get(language);
    std::unordered_set<std::string> taken;
    for (const Token& t : tokens) taken.insert(t.text);
    taken.insert(avoid.begin(), avoid.end());
    taken.insert(preserve.begin(), preserve.end());

    RenameMap map;
    std::unordered_set<std::string> mapped;
    std::size_t next = 1;
    for (const Token& t : tokens) {
        if (t.kind != TokenKind::Identifier) continue;
        if (preserve.count(t.text) || mapped.count(t.text)) continue;
        std::string fresh;
        do {
            fresh = "v" + std::to_string(next++);
        } while (taken.count(fresh) || tables.is_keyword(fresh));
        taken.insert(fresh);
        mapped.insert(t.text);
        map.pairs.emplace_back(t.text, fresh);
    }
    return map;
}

std::vector<Token> apply_rename(const std::vector<Token>& tokens, const RenameMap& map) {
    for (const Token& t : tokens) {
        if (t.kind != TokenKind::Identifier && map.find(t.text) != nullptr)
            throw ConfigError("rename map key '" + t.text +
                              "' collides with a non-identifier token");
    }
    std::vector<Token> out = tokens;
    for (Token& t : out) {
        if (t.kind != TokenKind::Identifier) continue;
        if (const std::string* to = map.find(t.text)) t.text = *to;
    }
    return out;
}

namespace {

std::vector<Token> lex_or_throw(const std::string& source, LanguageId language,
                                const std::string& what) {
    LexResult lexed = tokenize_fine(source, language);
    if (!lexed.ok())
        throw InputError(what + ": lexical error at offset " +
                         std::to_string(lexed.error->offset) + ": " + lexed.error->message);
    return std::move(lexed.tokens);
}

} // namespace

EvalInstance transform_instance(const EvalInstance& instance,
                                const std::set<std::string>& preserve) {
    if (instance.transform != TransformTag::Original)
        throw InputError(instance.id + ": only original instances can be transformed");

    const LanguageId lang = instance.language;
    const std::vector<Token> func = lex_or_throw(instance.function_source, lang,
                                                 instance.id + ": function");
    const std::vector<Token> vuln = lex_or_throw(instance.vulnerable_code, lang,
                                                 instance.id + ": vulnerable_code");
    std::vector<std::vector<Token>> refs;
    refs.reserve(instance.references.size());
    for (std::size_t i = 0; i < instance.references.size(); ++i)
        refs.push_back(lex_or_throw(instance.references[i], lang,
                                    instance.id + ": reference " + std::to_string(i)));

    // Fresh names must be collision-free across all three artifacts, so the
    // same map stays valid everywhere it is applied.
    std::set<std::string> avoid;
    for (const Token& t : vuln) avoid.insert(t.text);
    for (const auto& ref : refs)
        for (const Token& t : ref) avoid.insert(t.text);
    const RenameMap map = build_rename_map(func, lang, preserve, avoid);

    EvalInstance out = instance;
    out.transform = TransformTag::Renamed;
    out.function_source = join_tokens(apply_rename(func, map));
    out.vulnerable_code = join_tokens(apply_rename(vuln, map));
    for (std::size_t i = 0; i < refs.size(); ++i)
        out.references[i] = join_tokens(apply_rename(refs[i], map));
    return out;
}

} // namespace cfceval
