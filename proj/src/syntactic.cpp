#include "cca/syntactic.hpp"

#include <algorithm>
#include <limits>

#include "cca/error.hpp"
#include "cca/text.hpp"

namespace cca {

Code code_document_type(const ReferenceEntry& ref) {
  const auto has = [&](VenueSignal s) { return ref.venue_signals.count(s) > 0; };
  if (has(VenueSignal::proceedings)) return Code::of(Category::A, DocumentType::conference_paper, "A:proceedings");
  if (has(VenueSignal::volume_issue)) return Code::of(Category::A, DocumentType::journal_article, "A:volume-issue");
  if (has(VenueSignal::publisher) || has(VenueSignal::edition) || has(VenueSignal::editor)) {
    return Code::of(Category::A, DocumentType::book, "A:publisher");
  }
  if (has(VenueSignal::report) || has(VenueSignal::news)) {
    return Code::of(Category::A, DocumentType::report_news, "A:report-news");
  }
  if (has(VenueSignal::url) || has(VenueSignal::retrieved)) {
    return Code::of(Category::A, DocumentType::link_blog, "A:url");
  }
  return Code::of(Category::A, DocumentType::other, "A:other");
}

namespace {

DocumentType from_venue_type(VenueType t) {
  switch (t) {
    case VenueType::journal: return DocumentType::journal_article;
    case VenueType::conference: return DocumentType::conference_paper;
    case VenueType::book: return DocumentType::book;
    case VenueType::report: return DocumentType::report_news;
    case VenueType::web: return DocumentType::link_blog;
    case VenueType::other: return DocumentType::other;
  }
  return DocumentType::other;
}

struct VenueCue {
  std::string_view word;
  DocumentType type;
};

constexpr VenueCue kVenueCues[] = {
    {"proceedings", DocumentType::conference_paper}, {"conference", DocumentType::conference_paper},
    {"symposium", DocumentType::conference_paper},   {"workshop", DocumentType::conference_paper},
    {"journal", DocumentType::journal_article},      {"quarterly", DocumentType::journal_article},
    {"transactions", DocumentType::journal_article}, {"review", DocumentType::journal_article},
    {"press", DocumentType::book},                   {"handbook", DocumentType::book},
    {"report", DocumentType::report_news},           {"news", DocumentType::report_news},
    {"http", DocumentType::link_blog},               {"www", DocumentType::link_blog},
    {"blog", DocumentType::link_blog},
};

}  // namespace

Code code_document_type(const DocumentMetadata& meta) {
  if (meta.venue_type) return Code::of(Category::G, from_venue_type(*meta.venue_type), "G:venue-type");
  const auto words = text::word_tokens(text::fold_ascii(meta.venue_name));
  for (const auto& cue : kVenueCues) {
    if (std::find(words.begin(), words.end(), cue.word) != words.end()) {
      return Code::of(Category::G, cue.type, "G:venue-name:" + std::string(cue.word));
    }
  }
  return Code::of(Category::G, DocumentType::other, "G:other");
}

Code code_authorship(std::span<const AuthorName> authors, Category category) {
  const std::string prefix(1, letter(category));
  if (authors.empty()) return Code::uncodable(category, "missing-authors", prefix + ":missing-authors");
  if (authors.size() == 1) return Code::of(category, Authorship::single, prefix + ":single");
  return Code::of(category, Authorship::multiple, prefix + ":multiple");
}

Code code_location(const Section& section) {
  Code code = Code::of(Category::D, section.location, "D:section-header");
  if (section.location == Location::other) code.payload = section.raw_header;
  return code;
}

Code code_frequency(int mention_count) {
  if (mention_count < 1) {
    throw Error(ErrorKind::invalid_count, "mention count must be at least 1, got " + std::to_string(mention_count));
  }
  if (mention_count == 1) return Code::of(Category::E, Frequency::once, "E:count=1");
  if (mention_count <= 4) return Code::of(Category::E, Frequency::two_to_four, "E:count=2..4");
  return Code::of(Category::E, Frequency::five_plus, "E:count>=5");
}

namespace {

struct Span {
  std::size_t begin;
  std::size_t end;
};

// Double-quoted spans of at least three words, in source byte offsets.
std::vector<Span> quoted_spans(std::string_view sentence) {
  const text::Folded folded = text::fold(sentence);
  const std::string& s = folded.ascii;
  std::vector<Span> spans;
  std::size_t open = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '"') continue;
    if (open == std::string::npos) {
      open = i;
      continue;
    }
    if (text::word_tokens(std::string_view(s).substr(open + 1, i - open - 1)).size() >= 3) {
      spans.push_back(Span{folded.source_offset[open], folded.source_offset[i + 1]});
    }
    open = std::string::npos;
  }
  return spans;
}

std::size_t distance(Span a, std::size_t b0, std::size_t b1) {
  if (a.end <= b0) return b0 - a.end;
  if (b1 <= a.begin) return a.begin - b1;
  return 0;
}

bool quote_attributed(const InTextCitation& citation, std::string_view sentence) {
  const auto quotes = quoted_spans(sentence);
  if (quotes.empty()) return false;
  const auto markers = scan_markers(sentence);
  for (const Span q : quotes) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& m : markers) best = std::min(best, distance(q, m.begin, m.end));
    if (markers.empty()) best = distance(q, citation.span_begin, citation.span_end);
    if (distance(q, citation.span_begin, citation.span_end) <= best) return true;
  }
  return false;
}

}  // namespace

Code code_style(const InTextCitation& citation, std::string_view sentence) {
  if (citation.marker.page_locator) return Code::of(Category::F, Style::direct_quotation, "F:page-locator");
  if (quote_attributed(citation, sentence)) return Code::of(Category::F, Style::direct_quotation, "F:quotation");
  if (citation.marker_style == MarkerStyle::narrative && !citation.inside_example_cue) {
    return Code::of(Category::F, Style::specific_interpreting, "F:narrative");
  }
  if (citation.inside_example_cue) return Code::of(Category::F, Style::not_specific, "F:example-cue");
  return Code::of(Category::F, Style::not_specific, "F:parenthetical");
}

}  // namespace cca
