#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// The twelve categories of the citation codebook and the value type shared by
// all coders. Values are 1-based as in the printed codebook ("A1" .. "L4").
namespace cca {

enum class Category { A, B, C, D, E, F, G, H, I, J, K, L };

inline constexpr std::size_t kCategoryCount = 12;
inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::A, Category::B, Category::C, Category::D, Category::E, Category::F,
    Category::G, Category::H, Category::I, Category::J, Category::K, Category::L};

inline constexpr std::string_view kUncodable = "uncodable";

char letter(Category c);
std::optional<Category> parse_category(std::string_view s);
/// Number of values defined for a category (A has six, B two, ...).
int value_count(Category c);
/// "A1", "D7", ...; value 0 renders as "uncodable".
std::string label(Category c, int value);
/// All value labels of a category followed by "uncodable".
std::vector<std::string> labels(Category c);
/// Inverse of `label`; returns 0 for "uncodable" and nullopt for junk.
std::optional<int> parse_label(Category c, std::string_view s);

// Typed views of the value sets. Numeric values equal the codebook numbers.
enum class DocumentType { journal_article = 1, conference_paper, book, report_news, link_blog, other };
enum class Authorship { single = 1, multiple };
enum class Relation { reciprocal = 1, parallel, hierarchical };
enum class Location { abstract = 1, introduction, literature_review, methodology, results_discussion, conclusion, other };
enum class Frequency { once = 1, two_to_four, five_plus };
enum class Style { not_specific = 1, specific_interpreting, direct_quotation };
enum class Function { background = 1, framework, evidence, challenges };
enum class Disposition { positive = 1, negative, mixed, neutral };
enum class Domain { social = 1, humanities, natural, applied };
enum class Focus { theoretical = 1, empirical, experimental, other };

/// One coded slot: a value, or an explicit uncodable marker with a reason.
struct Code {
  Category category = Category::A;
  int value = 0;
  std::string reason;
  std::string payload;
  std::vector<std::string> rules;

  bool codable() const { return value > 0; }
  std::string label() const { return cca::label(category, value); }

  template <typename E>
  static Code of(Category c, E v, std::string rule) {
    Code code;
    code.category = c;
    code.value = static_cast<int>(v);
    code.rules.push_back(std::move(rule));
    return code;
  }
  static Code uncodable(Category c, std::string reason, std::string rule);

  bool operator==(const Code&) const = default;
};

}  // namespace cca
