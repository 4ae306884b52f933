#pragma once

#include "cfceval/token.hpp"

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace cfceval {

/// Per-language lexical tables: reserved words, operator/delimiter lexemes,
/// and the characters a well-formed snippet must not end with.
///
/// The tables ship as plain-text data files (one entry per line, UTF-8) and
/// are embedded at build time. set_data_dir() re-loads them from disk instead,
/// so edited tables take effect without a rebuild.
class LangTables {
  public:
    static const LangTables& get(LanguageId lang);

    /// Override the embedded tables with files under `dir` (expects
    /// keywords/<lang>.txt, operators/<lang>.txt, terminals/<lang>.txt).
    /// Not thread-safe; call once at startup before any lexing.
    static void set_data_dir(const std::filesystem::path& dir);

    bool is_keyword(const std::string& word) const { return keywords_.count(word) > 0; }
    const std::unordered_set<std::string>& keywords() const { return keywords_; }

    /// Operators and delimiters, sorted by descending length for maximal munch.
    const std::vector<std::string>& operators() const { return operators_; }

    bool is_invalid_terminal(char c) const;

  private:
    std::unordered_set<std::string> keywords_;
    std::vector<std::string> operators_;
    std::unordered_set<char> invalid_terminals_;

    friend LangTables make_tables(const std::string& keywords, const std::string& operators,
                                  const std::string& terminals);
};

} // namespace cfceval
