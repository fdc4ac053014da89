#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cca/document.hpp"

// In-text citation detection, linking to the bibliography, and context
// extraction around citing sentences.
namespace cca {

enum class MarkerStyle { parenthetical, narrative, numeric };
enum class LinkStatus { resolved, unresolved, ambiguous };
enum class ContextLevel { single_sentence, sentence_cluster };

std::string to_string(MarkerStyle s);
std::string to_string(LinkStatus s);
std::string to_string(ContextLevel l);

/// One referenced work as written in a sentence. Author-year markers carry
/// folded lowercase surnames; numeric markers carry the bracket label.
struct CitationMarker {
  MarkerStyle style = MarkerStyle::parenthetical;
  std::vector<std::string> surnames;
  bool et_al = false;
  int year = 0;
  std::optional<char> year_suffix;
  std::string label;
  bool page_locator = false;
  bool example_cue = false;
  /// Byte span of the whole marker group in the sentence.
  std::size_t begin = 0;
  std::size_t end = 0;

  /// Identity of the cited work as written (ignores span and cues).
  bool same_work(const CitationMarker& other) const;
};

/// Scans one sentence for author-year and bracketed-numeric markers, in
/// order of appearance. Multi-work groups expand to one marker per work.
std::vector<CitationMarker> scan_markers(std::string_view sentence);

struct LinkResult {
  LinkStatus status = LinkStatus::unresolved;
  std::string ref_id;
  std::string rule;
  std::vector<std::string> candidates;
};

/// Lookup structure over one document's bibliography.
class ReferenceIndex {
 public:
  explicit ReferenceIndex(std::span<const ReferenceEntry> references);

  /// `sentence` enables the narrative look-back rule: "Thomas Kuhn ...
  /// Revolutions (1962)" links to the one 1962 entry whose first author's
  /// surname appears earlier in the sentence.
  LinkResult link(const CitationMarker& marker, std::string_view sentence = {}) const;

 private:
  std::span<const ReferenceEntry> refs_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_surname_;
  std::unordered_map<std::string, std::size_t> by_label_;
  std::unordered_map<int, std::vector<std::size_t>> by_year_;
};

LinkResult link_citation(const CitationMarker& marker, std::span<const ReferenceEntry> references,
                         std::string_view sentence = {});

struct InTextCitation {
  int citation_id = 0;
  LinkStatus link = LinkStatus::unresolved;
  /// Linked reference; empty unless link == resolved.
  std::string ref_id;
  std::string link_rule;
  std::vector<std::string> candidates;
  std::size_t sentence_index = 0;
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  MarkerStyle marker_style = MarkerStyle::parenthetical;
  bool inside_example_cue = false;
  CitationMarker marker;

  bool resolved() const { return link == LinkStatus::resolved; }
};

/// Detects and links every marker of one sentence. Citation ids are 1-based
/// positions within the sentence; `analyze` renumbers them per document.
std::vector<InTextCitation> detect_citations(std::string_view sentence, std::span<const ReferenceEntry> references,
                                             std::size_t sentence_index = 0);

struct CitationContext {
  int citation_id = 0;
  ContextLevel level = ContextLevel::single_sentence;
  std::vector<std::size_t> sentence_indices;
  std::string text;
};

/// Windowed context, clamped to the citing sentence's section. Windows must
/// lie in [0, 5]; throws std::invalid_argument otherwise.
CitationContext extract_context(const Document& doc, const InTextCitation& citation, int window_before,
                                int window_after);

/// A document with its citations detected in document order.
struct AnalyzedDocument {
  Document document;
  std::vector<InTextCitation> citations;
  std::map<std::string, int> mention_counts;
};

AnalyzedDocument analyze(Document doc);

/// Resolved mentions of a reference. Throws Error(unknown_ref).
int count_mentions(const AnalyzedDocument& doc, std::string_view ref_id);

/// References never matched in the text, in bibliography order.
std::vector<std::string> unmentioned_references(const AnalyzedDocument& doc);

}  // namespace cca
