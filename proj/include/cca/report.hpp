#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cca/citations.hpp"
#include "cca/codebook.hpp"
#include "cca/semantic.hpp"

// Coded records, their JSONL form, frequency tables and agreement metrics.
namespace cca {

struct MatchedCue {
  Category category = Category::I;
  std::string phrase;
  std::string tag;
  bool operator==(const MatchedCue&) const = default;
};

/// One fully coded citation. `codes` is indexed by Category.
struct CodedCitation {
  std::string doc_id;
  int citation_id = 0;
  std::string ref_id;
  std::size_t sentence_index = 0;
  ContextLevel context_level = ContextLevel::sentence_cluster;
  std::vector<std::size_t> context_sentences;
  std::array<Code, kCategoryCount> codes;
  std::vector<MatchedCue> matched_cues;
  int mention_count = 0;

  const Code& code(Category c) const { return codes[static_cast<std::size_t>(c)]; }
  /// Fired rules in category order.
  std::vector<std::string> rule_trace() const;
  bool operator==(const CodedCitation&) const = default;
};

/// Builds a record from per-category codes. Throws Error(incomplete_coding)
/// when a category is missing, is uncodable without a reason, or is coded
/// without a rule.
CodedCitation assemble_record(std::string_view doc_id, const InTextCitation& citation, const CitationContext& context,
                              std::span<const std::optional<Code>> codes, std::vector<MatchedCue> cues,
                              int mention_count);

/// Orders records by (doc_id, citation_id).
void sort_records(std::vector<CodedCitation>& records);

/// One JSON object per line, fixed key order.
std::string to_jsonl(std::span<const CodedCitation> records);
std::string to_json_line(const CodedCitation& record);
/// Inverse of to_jsonl. Throws Error(malformed_input) with the line number.
std::vector<CodedCitation> read_jsonl(std::string_view text);

/// 1-D or 2-D count table over codebook labels, uncodable included.
struct FrequencyTable {
  Category rows = Category::A;
  std::optional<Category> cols;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  /// counts[r][c]; a 1-D table has a single column.
  std::vector<std::vector<long>> counts;
  long n = 0;

  FrequencyTable() = default;
  FrequencyTable(Category rows, std::optional<Category> cols);

  void add(const CodedCitation& record);
  /// Adds another table of the same shape. Throws std::invalid_argument.
  void merge(const FrequencyTable& other);
  long row_total(std::size_t r) const;
  std::string to_csv() const;
};

FrequencyTable aggregate(std::span<const CodedCitation> records, Category rows,
                         std::optional<Category> cols = std::nullopt);

/// Fraction of equal positions. Throws Error(length_mismatch) on unequal
/// lengths and Error(no_overlap) on empty input.
double percent_agreement(std::span<const std::string> a, std::span<const std::string> b);
/// Cohen's kappa; when expected agreement is 1 returns 1.0 if observed
/// agreement is 1 and 0.0 otherwise.
double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b);

struct AgreementReport {
  Category category = Category::A;
  long n = 0;
  double percent_agreement = 0.0;
  double cohens_kappa = 0.0;
  std::vector<std::string> labels;
  /// confusion[i][j]: first coding labels[i], second labels[j].
  std::vector<std::vector<long>> confusion;
};

AgreementReport agreement(Category category, std::span<const std::string> a, std::span<const std::string> b);

/// Gold annotations: doc_id, citation_id and any subset of category labels,
/// either top-level ("J": "J2") or under "codes".
struct GoldItem {
  std::string doc_id;
  int citation_id = 0;
  std::array<std::optional<std::string>, kCategoryCount> labels;
};

std::vector<GoldItem> read_gold_jsonl(std::string_view text);

struct EvalResult {
  std::vector<AgreementReport> reports;
  long matched = 0;
  /// "doc_id#citation_id" of gold items with no coded counterpart.
  std::vector<std::string> unmatched_gold;
};

/// Aligns by (doc_id, citation_id). Throws Error(no_overlap) when nothing
/// aligns. Categories without any gold label are left out of `reports`.
EvalResult evaluate(std::span<const CodedCitation> coded, std::span<const GoldItem> gold,
                    std::span<const Category> categories);

std::string agreement_csv(std::span<const AgreementReport> reports);

}  // namespace cca
