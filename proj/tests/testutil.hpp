// Shared helpers for the test suites: a seeded RNG and a generator of small,
// well-formed code snippets per language. Generated snippets are balanced by
// construction, lex cleanly, contain no comments, and end in a character that
// is a valid snippet terminal, so they always pass the quality gate.
#pragma once

#include "cfceval/lexer.hpp"
#include "cfceval/token.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testutil {

using cfceval::LanguageId;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    int range(int lo, int hi) { // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }

    bool chance(double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p;
    }

    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    template <typename T>
    const T& pick(const std::vector<T>& pool) {
        return pool[static_cast<std::size_t>(range(0, static_cast<int>(pool.size()) - 1))];
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

struct SnippetOptions {
    bool want_literal = false;
    bool forbid_literal = false;
};

inline const std::vector<std::string>& ident_pool() {
    static const std::vector<std::string> pool = {
        "count", "total", "items",  "user",  "name",  "value", "data",   "result", "index",
        "node",  "path",  "flag",   "score", "buffer", "key",  "limit",  "token",  "status",
        "entry", "cache", "window", "row",   "col",    "size",
    };
    return pool;
}

inline const std::vector<std::string>& literal_pool() {
    static const std::vector<std::string> pool = {
        "ok",        "error",     "invalid input", "access denied",
        "not found", "add",       "retry later",   "username too long",
    };
    return pool;
}

class SnippetGen {
  public:
    SnippetGen(Rng& rng, LanguageId lang, SnippetOptions opts)
        : rng_(rng), lang_(lang), opts_(opts) {}

    std::string statement() {
        std::string out;
        switch (rng_.range(0, 2)) {
        case 0: out = assignment(); break;
        case 1: out = if_statement(); break;
        default: out = return_statement(); break;
        }
        if (opts_.want_literal && !emitted_literal_) {
            // Guarantee the literal by appending a second assignment of one.
            out += separator();
            out += ident() + " = " + literal();
        }
        return out;
    }

  private:
    Rng& rng_;
    LanguageId lang_;
    SnippetOptions opts_;
    bool emitted_literal_ = false;

    std::string separator() const {
        switch (lang_) {
        case LanguageId::Python: return "\n";
        case LanguageId::Ruby: return "\n";
        default: return " ";
        }
    }

    std::string ident() { return rng_.pick(ident_pool()); }

    std::string number() { return std::to_string(rng_.range(0, 999)); }

    std::string literal() {
        emitted_literal_ = true;
        const std::string& content = rng_.pick(literal_pool());
        const bool single = lang_ != LanguageId::Java && rng_.chance(0.5);
        const char quote = single ? '\'' : '"';
        return quote + content + quote;
    }

    std::string expr(int depth = 0) {
        const int max_case = depth >= 2 ? 2 : 6;
        switch (rng_.range(0, max_case)) {
        case 0: return ident();
        case 1: return number();
        case 2:
            if (!opts_.forbid_literal && (depth > 0 || rng_.chance(0.5))) return literal();
            return ident();
        case 3: return ident() + "(" + expr(depth + 1) + ")";
        case 4: return ident() + "." + ident() + "(" + expr(depth + 1) + ")";
        case 5: return "[" + expr(depth + 1) + ", " + expr(depth + 1) + "]";
        default: return expr(depth + 1) + " + " + expr(depth + 1);
        }
    }

    std::string condition() {
        const char* op = rng_.chance(0.5) ? " == " : " < ";
        return ident() + op + expr(1);
    }

    std::string assignment() {
        switch (lang_) {
        case LanguageId::Java:
            return std::string(rng_.chance(0.5) ? "int " : "long ") + ident() + " = " + expr() +
                   " ;";
        case LanguageId::Cpp:
            return std::string(rng_.chance(0.5) ? "auto " : "int ") + ident() + " = " + expr() +
                   " ;";
        default: return ident() + " = " + expr();
        }
    }

    std::string if_statement() {
        switch (lang_) {
        case LanguageId::Python: return "if " + condition() + ": " + assignment();
        case LanguageId::Ruby: return "if " + condition() + " then " + assignment() + " end";
        default: return "if ( " + condition() + " ) { " + assignment() + " }";
        }
    }

    std::string return_statement() {
        switch (lang_) {
        case LanguageId::Java:
        case LanguageId::Cpp: return "return " + expr() + " ;";
        default: return "return " + expr();
        }
    }
};

inline std::string random_snippet(Rng& rng, LanguageId lang, SnippetOptions opts = {}) {
    return SnippetGen(rng, lang, opts).statement();
}

inline const std::vector<LanguageId>& all_languages() {
    static const std::vector<LanguageId> langs = {LanguageId::Python, LanguageId::Java,
                                                  LanguageId::Cpp, LanguageId::Ruby};
    return langs;
}

/// Insert exactly one unbalanced bracket at a token boundary, or append an
/// unterminated quote. Either way the result must fail the quality gate.
inline std::string mutate_unbalanced(Rng& rng, const std::string& snippet, LanguageId lang) {
    if (rng.chance(0.25)) return snippet + (rng.chance(0.5) ? " '" : " \"");
    const auto lexed = cfceval::tokenize_fine(snippet, lang);
    std::vector<std::string> texts;
    for (const auto& t : lexed.tokens) texts.push_back(t.text);
    static const std::vector<std::string> brackets = {"(", ")", "[", "]", "{", "}"};
    const std::string& bracket = rng.pick(brackets);
    const int pos = rng.range(0, static_cast<int>(texts.size()));
    std::string out;
    for (int i = 0; i <= static_cast<int>(texts.size()); ++i) {
        if (i == pos) {
            if (!out.empty()) out += " ";
            out += bracket;
        }
        if (i < static_cast<int>(texts.size())) {
            if (!out.empty()) out += " ";
            out += texts[i];
        }
    }
    return out;
}

} // namespace testutil
