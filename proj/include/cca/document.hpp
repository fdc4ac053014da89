#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cca/codebook.hpp"

namespace cca {

enum class VenueType { journal, conference, book, report, web, other };

/// Bibliographic cues detected in a reference string.
enum class VenueSignal { proceedings, volume_issue, publisher, edition, editor, report, news, url, retrieved };

std::string to_string(VenueType t);
std::optional<VenueType> parse_venue_type(std::string_view s);
std::string to_string(VenueSignal s);

struct AuthorName {
  std::string raw;
  /// Folded surname + "," + first initial, e.g. "hjorland,b".
  std::string key;

  /// Part of the key before the comma.
  std::string surname() const;
  bool operator==(const AuthorName&) const = default;
};

struct DocumentMetadata {
  std::string doc_id;
  std::string title;
  std::vector<AuthorName> authors;
  std::string venue_name;
  std::optional<VenueType> venue_type;
  std::optional<int> year;
  std::optional<Domain> domain_override;
  bool metadata_incomplete = false;

  bool operator==(const DocumentMetadata&) const = default;
};

/// Sentences [first_sentence, first_sentence + sentence_count) of the document.
struct Section {
  std::string raw_header;
  Location location = Location::other;
  std::size_t first_sentence = 0;
  std::size_t sentence_count = 0;

  std::size_t end_sentence() const { return first_sentence + sentence_count; }
  bool operator==(const Section&) const = default;
};

struct ReferenceEntry {
  std::string ref_id;
  std::string raw;
  std::vector<AuthorName> authors;
  std::optional<int> year;
  std::optional<char> year_suffix;
  std::set<VenueSignal> venue_signals;
  /// True when ref_id came from an explicit "[n]" label.
  bool numeric_label = false;

  bool operator==(const ReferenceEntry&) const = default;
};

struct Document {
  DocumentMetadata metadata;
  std::vector<Section> sections;
  std::vector<std::string> sentences;
  std::vector<ReferenceEntry> references;
  bool references_missing = false;
  /// Diagnostics recorded while parsing; not part of document identity.
  std::vector<std::string> warnings;

  /// Index into `sections` of the section holding a sentence.
  std::optional<std::size_t> section_of(std::size_t sentence_index) const;
  const ReferenceEntry* find_reference(std::string_view ref_id) const;
};

/// Field-by-field equality ignoring warnings.
bool same_content(const Document& a, const Document& b);

}  // namespace cca
