#pragma once

#include <string>
#include <string_view>

#include "cca/document.hpp"
#include "cca/sentences.hpp"

// Corpus ingest: the two input grammars, reference-string parsing and author
// name normalization. Grammar details live in docs/formats.md.
namespace cca {

enum class InputFormat { structured_xml, plain_annotated };

std::string to_string(InputFormat f);
/// Accepts "structured_xml"/"xml" and "plain_annotated"/"plain".
std::optional<InputFormat> parse_input_format(std::string_view s);

/// Parses one document. Throws Error with kind malformed_input (invalid UTF-8,
/// grammar violation; line number attached), empty_document (no sections) or
/// duplicate_ref_id.
Document parse_document(std::string_view bytes, InputFormat format,
                        const AbbreviationList& abbreviations = AbbreviationList::defaults());

/// Parses a single bibliography line. Never throws; missing fields stay empty
/// and are reported through `warnings` when provided.
ReferenceEntry parse_reference_entry(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Throws Error(unparseable_name) when the name has no alphabetic content.
AuthorName normalize_author_name(std::string_view raw);

/// Maps a section header to its location code (D1..D7).
Location normalize_section_header(std::string_view header);

/// Canonical interchange form: the structured XML subset with explicit <s>
/// sentences and reference ids, so that re-parsing reproduces the document.
std::string write_structured_xml(const Document& doc);

}  // namespace cca
