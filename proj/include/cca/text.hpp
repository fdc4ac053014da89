#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by every parser in the library. All scanning for
// markers, cues and names runs over an ASCII fold of the input so that rules
// stay byte-oriented while spans can still be mapped back to the source.
namespace cca::text {

bool is_valid_utf8(std::string_view bytes);

/// ASCII transliteration of a UTF-8 string. `source_offset[i]` is the byte
/// offset in the source of the code point that produced `ascii[i]`; the
/// vector carries one extra trailing entry equal to the source length.
struct Folded {
  std::string ascii;
  std::vector<std::size_t> source_offset;
};

/// Transliterates with the fixed table in text.cpp. Curly quotes and dashes
/// become their ASCII forms, unknown code points are dropped, and invalid
/// bytes are skipped.
Folded fold(std::string_view utf8);
std::string fold_ascii(std::string_view utf8);

std::string to_lower(std::string_view ascii);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

/// Lowercase alphanumeric word tokens of an ASCII-folded string.
std::vector<std::string> word_tokens(std::string_view ascii);

bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);

}  // namespace cca::text
