#include "cca/codebook.hpp"

namespace cca {

namespace {

constexpr std::array<int, kCategoryCount> kValueCounts = {6, 2, 3, 7, 3, 3, 6, 2, 4, 4, 4, 4};

}  // namespace

char letter(Category c) { return static_cast<char>('A' + static_cast<int>(c)); }

std::optional<Category> parse_category(std::string_view s) {
  if (s.size() != 1) return std::nullopt;
  char ch = s[0];
  if (ch >= 'a' && ch <= 'l') ch = static_cast<char>(ch - 'a' + 'A');
  if (ch < 'A' || ch > 'L') return std::nullopt;
  return static_cast<Category>(ch - 'A');
}

int value_count(Category c) { return kValueCounts[static_cast<std::size_t>(c)]; }

std::string label(Category c, int value) {
  if (value <= 0) return std::string(kUncodable);
  return std::string(1, letter(c)) + std::to_string(value);
}

std::vector<std::string> labels(Category c) {
  std::vector<std::string> out;
  for (int v = 1; v <= value_count(c); ++v) out.push_back(label(c, v));
  out.emplace_back(kUncodable);
  return out;
}

std::optional<int> parse_label(Category c, std::string_view s) {
  if (s == kUncodable) return 0;
  if (s.size() != 2 || (s[0] != letter(c) && s[0] != letter(c) - 'A' + 'a')) return std::nullopt;
  const int v = s[1] - '0';
  if (v < 1 || v > value_count(c)) return std::nullopt;
  return v;
}

Code Code::uncodable(Category c, std::string reason, std::string rule) {
  Code code;
  code.category = c;
  code.value = 0;
  code.reason = std::move(reason);
  code.rules.push_back(std::move(rule));
  return code;
}

}  // namespace cca
