#include "cfceval/lang_tables.hpp"

#include "cfceval/embedded_tables.hpp"
#include "cfceval/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace cfceval {

const char* to_string(LanguageId lang) {
    switch (lang) {
    case LanguageId::Python: return "python";
    case LanguageId::Java: return "java";
    case LanguageId::Cpp: return "cpp";
    case LanguageId::Ruby: return "ruby";
    }
    return "unknown";
}

std::optional<LanguageId> language_from_string(const std::string& name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "python" || lower == "py") return LanguageId::Python;
    if (lower == "java") return LanguageId::Java;
    if (lower == "cpp" || lower == "c++" || lower == "c") return LanguageId::Cpp;
    if (lower == "ruby" || lower == "rb") return LanguageId::Ruby;
    return std::nullopt;
}

const char* to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Operator: return "operator";
    case TokenKind::Delimiter: return "delimiter";
    case TokenKind::StringLiteral: return "string";
    case TokenKind::NumberLiteral: return "number";
    case TokenKind::Comment: return "comment";
    case TokenKind::Other: return "other";
    }
    return "other";
}

namespace {

std::vector<std::string> parse_lines(const std::string& text) {
    std::vector<std::string> entries;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) entries.push_back(line);
    }
    return entries;
}

} // namespace

LangTables make_tables(const std::string& keywords, const std::string& operators,
                       const std::string& terminals) {
    LangTables t;
    for (auto& kw : parse_lines(keywords)) t.keywords_.insert(kw);
    t.operators_ = parse_lines(operators);
    // Longest lexeme first so "==" wins over "=".
    std::stable_sort(t.operators_.begin(), t.operators_.end(),
                     [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    for (auto& term : parse_lines(terminals)) {
        if (term.size() == 1) t.invalid_terminals_.insert(term[0]);
    }
    return t;
}

namespace {

std::string read_file_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read table file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TableSet {
    std::array<LangTables, 4> tables;
};

TableSet build_embedded() {
    TableSet s;
    using namespace embedded;
    s.tables[static_cast<int>(LanguageId::Python)] =
        make_tables(kKeywordsPython, kOperatorsPython, kTerminalsPython);
    s.tables[static_cast<int>(LanguageId::Java)] =
        make_tables(kKeywordsJava, kOperatorsJava, kTerminalsJava);
    s.tables[static_cast<int>(LanguageId::Cpp)] =
        make_tables(kKeywordsCpp, kOperatorsCpp, kTerminalsCpp);
    s.tables[static_cast<int>(LanguageId::Ruby)] =
        make_tables(kKeywordsRuby, kOperatorsRuby, kTerminalsRuby);
    return s;
}

TableSet& current_tables() {
    static TableSet tables = build_embedded();
    return tables;
}

} // namespace

const LangTables& LangTables::get(LanguageId lang) {
    return current_tables().tables[static_cast<int>(lang)];
}

void LangTables::set_data_dir(const std::filesystem::path& dir) {
    TableSet fresh;
    for (LanguageId lang :
         {LanguageId::Python, LanguageId::Java, LanguageId::Cpp, LanguageId::Ruby}) {
        const std::string name = to_string(lang);
        fresh.tables[static_cast<int>(lang)] =
            make_tables(read_file_or_throw(dir / "keywords" / (name + ".txt")),
                        read_file_or_throw(dir / "operators" / (name + ".txt")),
                        read_file_or_throw(dir / "terminals" / (name + ".txt")));
    }
    current_tables() = std::move(fresh);
}

bool LangTables::is_invalid_terminal(char c) const {
    return invalid_terminals_.count(c) > 0;
}

} // namespace cfceval
