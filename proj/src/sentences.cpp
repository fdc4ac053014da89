#include "cca/sentences.hpp"

#include <fstream>
#include <sstream>

#include "cca/error.hpp"
#include "cca/text.hpp"

namespace cca {

namespace {

constexpr std::string_view kDefaultAbbreviations =
    "e.g.\ni.e.\net al.\ncf.\nvs.\nFig.\nFigs.\nEq.\nEqs.\np.\npp.\nvol.\nno.\ned.\neds.\nDr.\nProf.\n";

bool is_word_byte(char c) { return text::is_alpha(c) || static_cast<unsigned char>(c) >= 0x80; }

// Closing quote characters that may trail a terminator: ASCII plus the
// UTF-8 encodings of U+2019 and U+201D.
std::size_t closing_quote_length(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (i + 2 < s.size() + 0 && static_cast<unsigned char>(c) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const auto b = static_cast<unsigned char>(s[i + 2]);
    if (b == 0x99 || b == 0x9D) return 3;
  }
  return 0;
}

}  // namespace

AbbreviationList AbbreviationList::defaults() { return parse(kDefaultAbbreviations); }

AbbreviationList AbbreviationList::parse(std::string_view text) {
  AbbreviationList list;
  for (const auto& raw_line : text::split(text, '\n')) {
    const std::string line = text::trim(raw_line);
    if (line.empty() || line[0] == '#') continue;
    list.add(line);
  }
  return list;
}

AbbreviationList AbbreviationList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read abbreviation list " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void AbbreviationList::add(std::string_view token) {
  std::string t = text::trim(token);
  if (t.empty()) return;
  for (const auto& existing : entries_) {
    if (text::iequals(existing, t)) return;
  }
  entries_.push_back(std::move(t));
}

bool AbbreviationList::protects(std::string_view text) const {
  for (const auto& abbr : entries_) {
    if (abbr.size() > text.size()) continue;
    const std::size_t start = text.size() - abbr.size();
    if (!text::iequals(text.substr(start), abbr)) continue;
    if (start == 0 || !is_word_byte(text[start - 1])) return true;
  }
  return false;
}

std::vector<std::string> segment_sentences(std::string_view text, const AbbreviationList& abbreviations) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  int paren_depth = 0;
  int bracket_depth = 0;
  auto emit = [&](std::size_t end) {
    std::string s = text::collapse_whitespace(text.substr(start, end - start));
    if (!s.empty()) sentences.push_back(std::move(s));
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') {
      ++paren_depth;
    } else if (c == ')') {
      if (paren_depth > 0) --paren_depth;
    } else if (c == '[') {
      ++bracket_depth;
    } else if (c == ']') {
      if (bracket_depth > 0) --bracket_depth;
    } else if ((c == '.' || c == '!' || c == '?') && paren_depth == 0 && bracket_depth == 0) {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
      while (j < text.size()) {
        const std::size_t len = closing_quote_length(text, j);
        if (len == 0) break;
        j += len;
      }
      if (j < text.size() && !text::is_space(text[j])) continue;
      if (c == '.' && j == i + 1 && abbreviations.protects(text.substr(start, i + 1 - start))) continue;
      emit(j);
      i = j - 1;
    }
  }
  emit(text.size());
  return sentences;
}

}  // namespace cca
