#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cca/citations.hpp"
#include "cca/codebook.hpp"
#include "cca/document.hpp"

// Semantic codes: function (I), disposition (J), domain (K), focus (L).
namespace cca {

/// negative/positive drive J; negative/evidence/framework/background drive I;
/// experimental/empirical/theoretical are whole-document focus cues for L.
enum class CueTag { negative, positive, evidence, framework, background, experimental, empirical, theoretical };

std::string to_string(CueTag t);
std::optional<CueTag> parse_cue_tag(std::string_view s);

struct CueEntry {
  /// Phrase as written in the file, lowercased.
  std::string phrase;
  std::vector<std::string> tokens;
  /// Trailing '*': the last token matches as a prefix.
  bool prefix = false;
  CueTag tag = CueTag::negative;
};

struct CueLexicon {
  std::string name;
  std::vector<CueEntry> entries;
};

/// CSV with a "phrase,tag" header and '#' comments. Throws
/// Error(malformed_lexicon) on a bad line, unknown tag or duplicate phrase.
/// An empty file gives an empty lexicon and a warning.
CueLexicon parse_lexicon(std::string_view text, std::string name, std::vector<std::string>* warnings = nullptr);
CueLexicon load_lexicon(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// The files shipped in data/lexicons, compiled in.
std::vector<CueLexicon> default_lexicons();

struct CueMatch {
  std::string phrase;
  CueTag tag = CueTag::negative;
  std::string lexicon;
};

/// Case-insensitive whole-token matcher over a set of lexicons. The last
/// token of a phrase also matches its regular inflections (-s, -es, -ed, -d,
/// -ing, e-dropping -ing), so "suffer" matches "suffering".
class CueMatcher {
 public:
  CueMatcher() = default;
  explicit CueMatcher(std::span<const CueLexicon> lexicons);

  /// Distinct matched phrases in order of first occurrence.
  std::vector<CueMatch> match(std::string_view text) const;

 private:
  struct Ref {
    std::size_t lexicon;
    std::size_t entry;
  };
  std::vector<CueLexicon> lexicons_;
  std::unordered_map<std::string, std::vector<Ref>> by_first_;
  std::unordered_map<std::string, std::vector<Ref>> prefix_single_;
};

struct SemanticCode {
  Code code;
  std::vector<CueMatch> cues;
};

/// J from positive and negative cues in the context.
SemanticCode code_disposition(const CitationContext& context, const CueMatcher& matcher);

/// I: negative -> I4, evidence -> I3, framework -> I2, background -> I1,
/// else the section prior (D1-D3 -> I1, D4 -> I2, D5 -> I3, D6 -> I4, D7 -> I1).
SemanticCode code_function(const CitationContext& context, Location location, const CueMatcher& matcher);

/// Venue name to domain table: CSV "venue_pattern,K_value", case-insensitive
/// substring, first match wins.
class VenueMap {
 public:
  struct Row {
    std::string pattern;
    Domain domain;
  };

  VenueMap() = default;
  /// Throws Error(malformed_config) on a bad line.
  static VenueMap parse(std::string_view text);
  static VenueMap load(const std::filesystem::path& path);
  static VenueMap defaults();

  const Row* lookup(std::string_view venue) const;
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

/// K: domain_override, then the venue map, else uncodable("unmapped-venue").
Code code_domain(const DocumentMetadata& meta, const VenueMap& venues);

/// Focus cues over the title and every body sentence.
std::vector<CueMatch> document_focus_cues(const Document& doc, const CueMatcher& matcher);

/// L: experimental -> L3, empirical -> L2, theoretical -> L1; without cues the
/// domain prior (K2 -> L1, K1 -> L2, K3/K4 -> L3); uncodable K -> L4.
SemanticCode code_focus(const Code& domain, std::span<const CueMatch> full_text_cues);

}  // namespace cca
