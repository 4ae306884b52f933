#pragma once

#include "cfceval/token.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cfceval {

struct LexOptions {
    /// Emit Comment tokens instead of dropping them. Metric computations
    /// always run with comments dropped.
    bool keep_comments = false;
};

/// Split source into fine-grained classified tokens: identifiers, keywords,
/// operators, delimiters and literals become separate tokens even with no
/// whitespace between them ("x==1" -> "x", "==", "1").
///
/// Lexing is heuristic, not a full grammar; ambiguity resolves by maximal
/// munch over the per-language operator table. An unterminated string yields
/// a LexError carrying the offset of the opening quote; tokens lexed before
/// the error are retained.
LexResult tokenize_fine(std::string_view source, LanguageId language, LexOptions options = {});

/// Maximal whitespace-separated runs, each of kind Other ("x==1" stays one
/// token). Never fails.
std::vector<Token> tokenize_coarse(std::string_view source);

/// Subsequence of tokens whose kind is Keyword, Operator or Delimiter, in
/// order, with indexes re-numbered.
std::vector<Token> extract_keywords_ops(const std::vector<Token>& tokens);

/// Contents of StringLiteral tokens in order of appearance, quotes (and any
/// literal prefix letters) stripped. Escape sequences are kept verbatim, so
/// quote style does not affect the returned content.
std::vector<std::string> extract_string_literals(const std::vector<Token>& tokens);

/// Token texts in stream order.
std::vector<std::string> token_texts(const std::vector<Token>& tokens);

/// Token texts joined with single spaces. Re-tokenizing the result yields an
/// identical stream.
std::string join_tokens(const std::vector<Token>& tokens);

} // namespace cfceval
