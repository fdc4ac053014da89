#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cca {

/// Tokens whose trailing period never ends a sentence ("e.g.", "et al.", ...).
/// Matching is ASCII case-insensitive and anchored at a word boundary.
class AbbreviationList {
 public:
  AbbreviationList() = default;

  /// The list shipped in data/abbreviations.txt.
  static AbbreviationList defaults();
  /// One token per line; blank lines and `#` comments ignored.
  static AbbreviationList parse(std::string_view text);
  static AbbreviationList load(const std::filesystem::path& path);

  void add(std::string_view token);
  const std::vector<std::string>& entries() const { return entries_; }

  /// True when `text` (ending with the candidate period) ends with a listed
  /// abbreviation that starts at a word boundary.
  bool protects(std::string_view text) const;

 private:
  std::vector<std::string> entries_;
};

/// Splits text at sentence-final punctuation that is followed by whitespace,
/// is outside parentheses and brackets, and is not a protected abbreviation.
/// Returned sentences have internal whitespace collapsed.
std::vector<std::string> segment_sentences(std::string_view text, const AbbreviationList& abbreviations);

}  // namespace cca
