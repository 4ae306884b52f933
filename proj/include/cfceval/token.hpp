#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cfceval {

enum class LanguageId { Python, Java, Cpp, Ruby };

const char* to_string(LanguageId lang);
std::optional<LanguageId> language_from_string(const std::string& name);

enum class TokenKind {
    Identifier,
    Keyword,
    Operator,
    Delimiter,
    StringLiteral,
    NumberLiteral,
    Comment,
    Other,
};

const char* to_string(TokenKind kind);

/// One lexical unit of source code. `text` holds the exact source characters,
/// `index` the 0-based position in its token stream.
struct Token {
    std::string text;
    TokenKind kind = TokenKind::Other;
    std::size_t index = 0;

    bool operator==(const Token& other) const {
        return text == other.text && kind == other.kind && index == other.index;
    }
};

struct LexError {
    std::size_t offset = 0;
    std::string message;
};

/// Token stream plus an optional lexical error. On error the tokens lexed
/// before the offending offset are retained.
struct LexResult {
    std::vector<Token> tokens;
    std::optional<LexError> error;

    bool ok() const { return !error.has_value(); }
};

} // namespace cfceval
