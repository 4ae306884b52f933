#include "cfceval/lexer.hpp"

#include "cfceval/lang_tables.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cfceval;

namespace {

std::vector<std::string> fine_texts(const std::string& src, LanguageId lang) {
    const LexResult r = tokenize_fine(src, lang);
    REQUIRE(r.ok());
    return token_texts(r.tokens);
}

std::size_t non_ws_count(const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](unsigned char c) { return !std::isspace(c); }));
}

} // namespace

TEST_CASE("fine tokenization splits compact expressions") {
    CHECK(fine_texts("permission_classes=[permissions.IsAuthenticated, IsSuperUser]",
                     LanguageId::Python) ==
          std::vector<std::string>{"permission_classes", "=", "[", "permissions", ".",
                                   "IsAuthenticated", ",", "IsSuperUser", "]"});
    CHECK(fine_texts("x==1", LanguageId::Python) == std::vector<std::string>{"x", "==", "1"});
    CHECK(fine_texts("", LanguageId::Python).empty());
}

TEST_CASE("coarse tokenization splits on whitespace only") {
    auto texts = [](const std::string& src) { return token_texts(tokenize_coarse(src)); };
    CHECK(texts("a = b") == std::vector<std::string>{"a", "=", "b"});
    CHECK(texts("x==1") == std::vector<std::string>{"x==1"});
    CHECK(texts("").empty());
    for (const Token& t : tokenize_coarse("foo bar==1 baz")) CHECK(t.kind == TokenKind::Other);
}

TEST_CASE("keyword and operator extraction") {
    auto kwops = [](const std::string& src, LanguageId lang) {
        const LexResult r = tokenize_fine(src, lang);
        REQUIRE(r.ok());
        return token_texts(extract_keywords_ops(r.tokens));
    };
    CHECK(kwops("permission_classes = [IsAuthenticated]", LanguageId::Python) ==
          std::vector<std::string>{"=", "[", "]"});
    CHECK(kwops("permission_classes = [IsAuthenticated, get_ipython_package_dir()]",
                LanguageId::Python) ==
          std::vector<std::string>{"=", "[", ",", "(", ")", "]"});
    CHECK(kwops("if action == 'add' and user.is_authenticated():", LanguageId::Python) ==
          std::vector<std::string>{"if", "==", "and", ".", "(", ")", ":"});
    CHECK(extract_keywords_ops({}).empty());
}

TEST_CASE("string literal extraction strips quotes, keeps content verbatim") {
    auto literals = [](const std::string& src, LanguageId lang) {
        const LexResult r = tokenize_fine(src, lang);
        REQUIRE(r.ok());
        return extract_string_literals(r.tokens);
    };
    CHECK(literals("setMessage(\"Invalid input format\")", LanguageId::Java) ==
          std::vector<std::string>{"Invalid input format"});
    CHECK(literals("if action == \"add\" and user.is_authenticated():", LanguageId::Python) ==
          std::vector<std::string>{"add"});
    CHECK(literals("permission_classes = [IsAuthenticated, get_ipython_package_dir()]",
                   LanguageId::Python)
              .empty());
    // Quote style does not change the content.
    CHECK(literals("x = 'add'", LanguageId::Python) == literals("x = \"add\"", LanguageId::Python));
    CHECK(literals("x = '''multi\nline'''", LanguageId::Python) ==
          std::vector<std::string>{"multi\nline"});
    CHECK(literals("x = f'pre{var}post'", LanguageId::Python) ==
          std::vector<std::string>{"pre{var}post"});
    CHECK(literals("x = 'a\\'b'", LanguageId::Python) == std::vector<std::string>{"a\\'b"});
}

TEST_CASE("token kinds") {
    const LexResult r = tokenize_fine("if limit < 10: name = 'x'", LanguageId::Python);
    REQUIRE(r.ok());
    REQUIRE(r.tokens.size() == 8);
    CHECK(r.tokens[0].kind == TokenKind::Keyword);
    CHECK(r.tokens[1].kind == TokenKind::Identifier);
    CHECK(r.tokens[2].kind == TokenKind::Operator);
    CHECK(r.tokens[3].kind == TokenKind::NumberLiteral);
    CHECK(r.tokens[4].kind == TokenKind::Delimiter);
    CHECK(r.tokens[6].kind == TokenKind::Operator);
    CHECK(r.tokens[7].kind == TokenKind::StringLiteral);
    // Keyword classification is exact table membership.
    CHECK(tokenize_fine("if2", LanguageId::Python).tokens[0].kind == TokenKind::Identifier);
    CHECK(tokenize_fine("new", LanguageId::Java).tokens[0].kind == TokenKind::Keyword);
    CHECK(tokenize_fine("new", LanguageId::Python).tokens[0].kind == TokenKind::Identifier);
}

TEST_CASE("comments are excluded from metric token streams") {
    CHECK(fine_texts("x = 1 # trailing note", LanguageId::Python) ==
          std::vector<std::string>{"x", "=", "1"});
    CHECK(fine_texts("x = 1; // note\ny = 2;", LanguageId::Cpp) ==
          std::vector<std::string>{"x", "=", "1", ";", "y", "=", "2", ";"});
    CHECK(fine_texts("a /* mid */ = 1;", LanguageId::Java) ==
          std::vector<std::string>{"a", "=", "1", ";"});
    CHECK(fine_texts("=begin\nblock\n=end\nx = 1", LanguageId::Ruby) ==
          std::vector<std::string>{"x", "=", "1"});
    // '#' inside a string is content, not a comment.
    CHECK(fine_texts("x = 'a#b'", LanguageId::Python) ==
          std::vector<std::string>{"x", "=", "'a#b'"});

    LexOptions keep;
    keep.keep_comments = true;
    const LexResult r = tokenize_fine("x = 1 # note", LanguageId::Python, keep);
    REQUIRE(r.ok());
    CHECK(r.tokens.back().kind == TokenKind::Comment);
    CHECK(r.tokens.back().text == "# note");
}

TEST_CASE("unterminated string literal reports the opening offset") {
    const LexResult r = tokenize_fine("x = 'oops", LanguageId::Python);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->offset == 4);
    CHECK(token_texts(r.tokens) == std::vector<std::string>{"x", "="});
    CHECK_FALSE(tokenize_fine("s = \"unclosed", LanguageId::Java).ok());
    // A newline ends a single-quoted Python string.
    CHECK_FALSE(tokenize_fine("x = 'a\nb'", LanguageId::Python).ok());
    // Ruby strings may span lines.
    CHECK(tokenize_fine("x = 'a\nb'", LanguageId::Ruby).ok());
}

TEST_CASE("language-specific lexemes") {
    // Maximal munch picks the longest operator.
    CHECK(fine_texts("a<<=b", LanguageId::Cpp) == std::vector<std::string>{"a", "<<=", "b"});
    CHECK(fine_texts("a>>>=b", LanguageId::Java) == std::vector<std::string>{"a", ">>>=", "b"});
    CHECK(fine_texts("a<=>b", LanguageId::Ruby) == std::vector<std::string>{"a", "<=>", "b"});
    CHECK(fine_texts("x:=f(1)", LanguageId::Python) ==
          std::vector<std::string>{"x", ":=", "f", "(", "1", ")"});
    // C++ digit separators stay inside one number.
    CHECK(fine_texts("n = 1'000'000;", LanguageId::Cpp) ==
          std::vector<std::string>{"n", "=", "1'000'000", ";"});
    // Ranges do not swallow the dots.
    CHECK(fine_texts("1..5", LanguageId::Ruby) == std::vector<std::string>{"1", "..", "5"});
    CHECK(fine_texts("1.5e3", LanguageId::Python) == std::vector<std::string>{"1.5e3"});
    CHECK(fine_texts("0xFF_A0", LanguageId::Java) == std::vector<std::string>{"0xFF_A0"});
    // Ruby sigiled variables are single identifiers.
    CHECK(fine_texts("@user = @@cache + $path", LanguageId::Ruby) ==
          std::vector<std::string>{"@user", "=", "@@cache", "+", "$path"});
    CHECK(fine_texts("total$ = a$b;", LanguageId::Java) ==
          std::vector<std::string>{"total$", "=", "a$b", ";"});
    // Number suffixes fold only when valid for the language.
    CHECK(fine_texts("x = 10L;", LanguageId::Java) ==
          std::vector<std::string>{"x", "=", "10L", ";"});
    CHECK(fine_texts("x = 3ULL;", LanguageId::Cpp) ==
          std::vector<std::string>{"x", "=", "3ULL", ";"});
    CHECK(fine_texts("x = 5if", LanguageId::Python) ==
          std::vector<std::string>{"x", "=", "5", "if"});
}

TEST_CASE("every non-whitespace character lands in exactly one token") {
    testutil::Rng rng(20240817);
    for (LanguageId lang : testutil::all_languages()) {
        for (int i = 0; i < 300; ++i) {
            const std::string snippet = testutil::random_snippet(rng, lang);
            const LexResult r = tokenize_fine(snippet, lang);
            REQUIRE(r.ok());
            std::size_t covered = 0;
            for (const Token& t : r.tokens) {
                CHECK_FALSE(t.text.empty());
                covered += non_ws_count(t.text);
            }
            CHECK(covered == non_ws_count(snippet));
        }
    }
}

TEST_CASE("retokenizing the space-joined stream reproduces it") {
    testutil::Rng rng(987654321);
    for (LanguageId lang : testutil::all_languages()) {
        for (int i = 0; i < 300; ++i) {
            testutil::SnippetOptions opts;
            opts.want_literal = rng.chance(0.4);
            const std::string snippet = testutil::random_snippet(rng, lang, opts);
            const LexResult first = tokenize_fine(snippet, lang);
            REQUIRE(first.ok());
            const LexResult second = tokenize_fine(join_tokens(first.tokens), lang);
            REQUIRE(second.ok());
            CHECK(first.tokens == second.tokens);
        }
    }
}

TEST_CASE("coarse tokenizer preserves non-whitespace runs") {
    testutil::Rng rng(5150);
    for (int i = 0; i < 200; ++i) {
        const std::string snippet = testutil::random_snippet(rng, LanguageId::Python);
        std::string joined;
        for (const Token& t : tokenize_coarse(snippet)) {
            CHECK(t.text.find(' ') == std::string::npos);
            CHECK(t.text.find('\t') == std::string::npos);
            if (!joined.empty()) joined += " ";
            joined += t.text;
        }
        CHECK(non_ws_count(joined) == non_ws_count(snippet));
    }
}

TEST_CASE("index numbering is dense and zero-based") {
    const LexResult r = tokenize_fine("a = b + c", LanguageId::Python);
    REQUIRE(r.ok());
    for (std::size_t i = 0; i < r.tokens.size(); ++i) CHECK(r.tokens[i].index == i);
}
