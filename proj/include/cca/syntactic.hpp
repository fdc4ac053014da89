#pragma once

#include <span>
#include <string_view>

#include "cca/citations.hpp"
#include "cca/codebook.hpp"
#include "cca/document.hpp"

// Syntactic codes: document type (A/G), authorship (B/H), location (D),
// frequency (E) and style (F). Relation (C) lives in network.hpp.
namespace cca {

/// A for a cited reference. First match wins: proceedings, volume(issue),
/// publisher/edition/editor, report/news, url/retrieved, else A6.
Code code_document_type(const ReferenceEntry& ref);

/// G for the citing paper, from venue_type, or from venue-name cues when the
/// type is missing.
Code code_document_type(const DocumentMetadata& meta);

/// B (cited) or H (citing). Empty list is uncodable("missing-authors").
Code code_authorship(std::span<const AuthorName> authors, Category category);

/// D; D7 carries the raw header as payload.
Code code_location(const Section& section);

/// E from the number of resolved mentions. Throws Error(invalid_count) for
/// counts below 1.
Code code_frequency(int mention_count);

/// F. Direct quotation when the marker has a page locator or a quoted span
/// of at least three words in the sentence is nearest to this marker;
/// interpreting when the marker is narrative and not in an example list.
Code code_style(const InTextCitation& citation, std::string_view sentence);

}  // namespace cca
