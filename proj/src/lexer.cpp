#include "cfceval/lexer.hpp"

#include "cfceval/lang_tables.hpp"

#include <cctype>

namespace cfceval {

namespace {

bool is_ident_start(unsigned char c, LanguageId lang) {
    if (std::isalpha(c) || c == '_' || c >= 0x80) return true;
    if (lang == LanguageId::Java && c == '$') return true;
    return false;
}

bool is_ident_cont(unsigned char c, LanguageId lang) {
    return is_ident_start(c, lang) || std::isdigit(c);
}

bool is_python_string_prefix(std::string_view s) {
    if (s.empty() || s.size() > 2) return false;
    for (char c : s) {
        switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'r':
        case 'b':
        case 'u':
        case 'f': break;
        default: return false;
        }
    }
    return true;
}

bool is_delimiter_text(const std::string& text) {
    if (text.size() != 1) return false;
    switch (text[0]) {
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
    case ',':
    case ';':
    case ':':
    case '.': return true;
    default: return false;
    }
}

class Scanner {
  public:
    Scanner(std::string_view src, LanguageId lang, LexOptions opts)
        : src_(src), lang_(lang), opts_(opts), tables_(LangTables::get(lang)) {}

    LexResult run() {
        while (pos_ < src_.size() && !result_.error) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                at_line_start_ = (c == '\n');
                ++pos_;
                continue;
            }
            if (try_comment()) continue;
            if (try_string()) continue;
            if (try_number()) continue;
            if (try_identifier()) continue;
            lex_operator();
        }
        for (std::size_t i = 0; i < result_.tokens.size(); ++i) result_.tokens[i].index = i;
        return std::move(result_);
    }

  private:
    std::string_view src_;
    LanguageId lang_;
    LexOptions opts_;
    const LangTables& tables_;
    std::size_t pos_ = 0;
    bool at_line_start_ = true;
    LexResult result_;

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    bool starts_with(std::string_view prefix) const {
        return src_.substr(pos_, prefix.size()) == prefix;
    }

    void emit(std::size_t begin, TokenKind kind) {
        at_line_start_ = false;
        result_.tokens.push_back({std::string(src_.substr(begin, pos_ - begin)), kind, 0});
    }

    void fail(std::size_t offset, std::string message) {
        result_.error = LexError{offset, std::move(message)};
        pos_ = src_.size();
    }

    void consume_to_eol() {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }

    bool try_comment() {
        const std::size_t begin = pos_;
        if (lang_ == LanguageId::Python || lang_ == LanguageId::Ruby) {
            if (peek() == '#') {
                consume_to_eol();
                if (opts_.keep_comments) emit(begin, TokenKind::Comment);
                return true;
            }
            if (lang_ == LanguageId::Ruby && at_line_start_ && starts_with("=begin")) {
                // Block comment runs until a line starting with "=end".
                consume_to_eol();
                while (pos_ < src_.size()) {
                    ++pos_; // step over the newline
                    if (starts_with("=end")) {
                        consume_to_eol();
                        break;
                    }
                    consume_to_eol();
                }
                if (opts_.keep_comments) emit(begin, TokenKind::Comment);
                return true;
            }
            return false;
        }
        if (starts_with("//")) {
            consume_to_eol();
            if (opts_.keep_comments) emit(begin, TokenKind::Comment);
            return true;
        }
        if (starts_with("/*")) {
            pos_ += 2;
            while (pos_ < src_.size() && !starts_with("*/")) ++pos_;
            if (pos_ < src_.size()) pos_ += 2;
            if (opts_.keep_comments) emit(begin, TokenKind::Comment);
            return true;
        }
        return false;
    }

    bool is_quote(char c) const { return c == '"' || c == '\''; }

    bool try_string() {
        if (!is_quote(peek())) return false;
        lex_string_from(pos_);
        return true;
    }

    /// Lex a string whose opening quote sits at `begin` (any prefix letters
    /// already consumed by the caller are included in the token text).
    void lex_string_from(std::size_t begin) {
        const std::size_t quote_pos = pos_;
        const char quote = src_[pos_];
        const bool triple =
            lang_ == LanguageId::Python && peek(1) == quote && peek(2) == quote;
        const bool newline_ok = triple || lang_ == LanguageId::Ruby;
        pos_ += triple ? 3 : 1;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\' && pos_ + 1 < src_.size()) {
                pos_ += 2;
                continue;
            }
            if (c == '\n' && !newline_ok) break;
            if (c == quote) {
                if (!triple) {
                    ++pos_;
                    emit(begin, TokenKind::StringLiteral);
                    return;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    pos_ += 3;
                    emit(begin, TokenKind::StringLiteral);
                    return;
                }
            }
            ++pos_;
        }
        fail(quote_pos, "unterminated string literal");
    }

    bool digit_sep(char c) const {
        if (c == '_') return lang_ != LanguageId::Cpp;
        if (c == '\'') return lang_ == LanguageId::Cpp;
        return false;
    }

    bool valid_number_suffix(std::string_view run) const {
        if (run.empty()) return true;
        auto all_in = [&](std::string_view set) {
            for (char c : run)
                if (set.find(static_cast<char>(std::tolower(static_cast<unsigned char>(c)))) ==
                    std::string_view::npos)
                    return false;
            return true;
        };
        switch (lang_) {
        case LanguageId::Python: return run.size() == 1 && all_in("j");
        case LanguageId::Java: return run.size() == 1 && all_in("lfd");
        case LanguageId::Cpp: return run.size() <= 3 && all_in("ulf");
        case LanguageId::Ruby: return run.size() <= 2 && all_in("ri");
        }
        return false;
    }

    bool try_number() {
        const char c = peek();
        const bool leading_dot = c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)));
        if (!std::isdigit(static_cast<unsigned char>(c)) && !leading_dot) return false;

        const std::size_t begin = pos_;
        auto digits = [&](auto pred) {
            while (pos_ < src_.size() &&
                   (pred(static_cast<unsigned char>(src_[pos_])) || digit_sep(src_[pos_])))
                ++pos_;
        };
        auto is_dec = [](unsigned char ch) { return std::isdigit(ch) != 0; };
        auto is_hex = [](unsigned char ch) { return std::isxdigit(ch) != 0; };

        if (c == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'b' || peek(1) == 'B' ||
                         peek(1) == 'o' || peek(1) == 'O')) {
            pos_ += 2;
            digits(is_hex);
        } else {
            if (leading_dot) ++pos_;
            digits(is_dec);
            // A '.' joins the number only when a digit follows, so "1..5"
            // lexes as "1", "..", "5".
            if (!leading_dot && peek() == '.' &&
                std::isdigit(static_cast<unsigned char>(peek(1)))) {
                ++pos_;
                digits(is_dec);
            }
            if ((peek() == 'e' || peek() == 'E')) {
                std::size_t exp = pos_ + 1;
                if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
                if (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) {
                    pos_ = exp;
                    digits(is_dec);
                }
            }
        }
        // Fold a trailing alpha run only when it is a valid numeric suffix;
        // otherwise "5x" lexes as "5", "x".
        std::size_t suffix_end = pos_;
        while (suffix_end < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[suffix_end])))
            ++suffix_end;
        if (suffix_end > pos_ &&
            (suffix_end >= src_.size() ||
             !is_ident_cont(static_cast<unsigned char>(src_[suffix_end]), lang_))) {
            if (valid_number_suffix(src_.substr(pos_, suffix_end - pos_))) pos_ = suffix_end;
        }
        emit(begin, TokenKind::NumberLiteral);
        return true;
    }

    bool try_identifier() {
        const std::size_t begin = pos_;
        if (lang_ == LanguageId::Ruby && (peek() == '@' || peek() == '$')) {
            std::size_t ahead = peek() == '@' && peek(1) == '@' ? 2 : 1;
            if (is_ident_start(static_cast<unsigned char>(peek(ahead)), lang_)) {
                pos_ += ahead;
                while (pos_ < src_.size() &&
                       is_ident_cont(static_cast<unsigned char>(src_[pos_]), lang_))
                    ++pos_;
                emit(begin, TokenKind::Identifier);
                return true;
            }
            return false;
        }
        if (!is_ident_start(static_cast<unsigned char>(peek()), lang_)) return false;
        while (pos_ < src_.size() && is_ident_cont(static_cast<unsigned char>(src_[pos_]), lang_))
            ++pos_;
        const std::string_view word = src_.substr(begin, pos_ - begin);
        if (lang_ == LanguageId::Python && is_python_string_prefix(word) && is_quote(peek())) {
            lex_string_from(begin);
            return true;
        }
        emit(begin, tables_.is_keyword(std::string(word)) ? TokenKind::Keyword
                                                          : TokenKind::Identifier);
        return true;
    }

    void lex_operator() {
        const std::size_t begin = pos_;
        for (const std::string& op : tables_.operators()) {
            if (starts_with(op)) {
                pos_ += op.size();
                emit(begin, is_delimiter_text(op) ? TokenKind::Delimiter : TokenKind::Operator);
                return;
            }
        }
        // Unknown byte: consume one UTF-8 sequence as Other.
        ++pos_;
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80)
            ++pos_;
        emit(begin, TokenKind::Other);
    }
};

} // namespace

LexResult tokenize_fine(std::string_view source, LanguageId language, LexOptions options) {
    return Scanner(source, language, options).run();
}

std::vector<Token> tokenize_coarse(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < source.size()) {
        while (i < source.size() && std::isspace(static_cast<unsigned char>(source[i]))) ++i;
        std::size_t begin = i;
        while (i < source.size() && !std::isspace(static_cast<unsigned char>(source[i]))) ++i;
        if (i > begin)
            tokens.push_back(
                {std::string(source.substr(begin, i - begin)), TokenKind::Other, tokens.size()});
    }
    return tokens;
}

std::vector<Token> extract_keywords_ops(const std::vector<Token>& tokens) {
    std::vector<Token> out;
    for (const Token& t : tokens) {
        if (t.kind == TokenKind::Keyword || t.kind == TokenKind::Operator ||
            t.kind == TokenKind::Delimiter) {
            out.push_back({t.text, t.kind, out.size()});
        }
    }
    return out;
}

std::vector<std::string> extract_string_literals(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const Token& t : tokens) {
        if (t.kind != TokenKind::StringLiteral) continue;
        std::string_view text = t.text;
        // Skip literal prefix letters (Python r"", f'', ...).
        std::size_t q = 0;
        while (q < text.size() && text[q] != '"' && text[q] != '\'') ++q;
        if (q >= text.size()) continue;
        text.remove_prefix(q);
        const char quote = text[0];
        if (text.size() >= 6 && text[1] == quote && text[2] == quote) {
            out.emplace_back(text.substr(3, text.size() - 6));
        } else if (text.size() >= 2) {
            out.emplace_back(text.substr(1, text.size() - 2));
        }
    }
    return out;
}

std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
    std::vector<std::string> texts;
    texts.reserve(tokens.size());
    for (const Token& t : tokens) texts.push_back(t.text);
    return texts;
}

std::string join_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (const Token& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t.text;
    }
    return out;
}

} // namespace cfceval
