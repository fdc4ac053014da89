#include "cca/citations.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "cca/error.hpp"
#include "cca/text.hpp"

namespace cca {

std::string to_string(MarkerStyle s) {
  switch (s) {
    case MarkerStyle::parenthetical: return "parenthetical";
    case MarkerStyle::narrative: return "narrative";
    case MarkerStyle::numeric: return "numeric";
  }
  return "";
}

std::string to_string(LinkStatus s) {
  switch (s) {
    case LinkStatus::resolved: return "resolved";
    case LinkStatus::unresolved: return "unresolved";
    case LinkStatus::ambiguous: return "ambiguous";
  }
  return "";
}

std::string to_string(ContextLevel l) {
  return l == ContextLevel::single_sentence ? "single_sentence" : "sentence_cluster";
}

bool CitationMarker::same_work(const CitationMarker& o) const {
  return style == o.style && surnames == o.surnames && et_al == o.et_al && year == o.year &&
         year_suffix == o.year_suffix && label == o.label;
}

// ---------------------------------------------------------------------------
// Marker scanning. Works on the ASCII fold of the sentence.

namespace {

constexpr std::size_t kMaxGroupLength = 500;
constexpr std::size_t kMaxBracketLength = 60;
constexpr int kMaxRangeExpansion = 100;

struct Token {
  std::string text;
  std::size_t pos = 0;
  bool word = false;
};

bool is_word_char(char c) { return text::is_alnum(c) || c == '\'' || c == '-' || c == '.'; }

std::vector<Token> tokenize(std::string_view s, std::size_t base) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (text::is_space(c)) {
      ++i;
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < s.size() && is_word_char(s[j])) ++j;
      tokens.push_back(Token{std::string(s.substr(i, j - i)), base + i, true});
      i = j;
    } else {
      tokens.push_back(Token{std::string(1, c), base + i, false});
      ++i;
    }
  }
  return tokens;
}

struct Year {
  int value = 0;
  std::optional<char> suffix;
};

std::optional<Year> as_year(std::string_view w) {
  if (w.size() != 4 && w.size() != 5) return std::nullopt;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!text::is_digit(w[k])) return std::nullopt;
  }
  Year y;
  std::from_chars(w.data(), w.data() + 4, y.value);
  if (y.value < 1400 || y.value > 2100) return std::nullopt;
  if (w.size() == 5) {
    if (!text::is_lower(w[4])) return std::nullopt;
    y.suffix = w[4];
  }
  return y;
}

// Strips surrounding quotes and a possessive ending.
std::string bare_name(std::string_view w) {
  while (!w.empty() && (w.front() == '\'' || w.front() == '-')) w.remove_prefix(1);
  if (w.size() > 2 && w.substr(w.size() - 2) == "'s") w.remove_suffix(2);
  while (!w.empty() && (w.back() == '\'' || w.back() == '-' || w.back() == '.')) w.remove_suffix(1);
  return std::string(w);
}

bool is_capitalized(std::string_view w) {
  const std::string b = bare_name(w);
  return !b.empty() && text::is_upper(b[0]);
}

std::string surname_of(std::string_view w) {
  std::string key;
  for (char c : bare_name(w)) {
    if (text::is_alpha(c)) {
      key.push_back(text::is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (c == '-' && !key.empty()) {
      key.push_back('-');
    }
  }
  return key;
}

bool is_cue_word(std::string_view w) {
  const std::string l = text::to_lower(w);
  return l == "e.g." || l == "e.g" || l == "eg" || l == "see" || l == "cf." || l == "cf" || l == "i.e.";
}

bool is_locator_word(std::string_view w) {
  const std::string l = text::to_lower(w);
  return l == "p." || l == "pp." || l == "p" || l == "pp" || l == "page" || l == "pages";
}

bool is_conjunction(const Token& t) { return (t.word && t.text == "and") || t.text == "&"; }

struct Names {
  std::vector<std::string> surnames;
  bool et_al = false;
  std::size_t first_token = 0;
};

// Walks backwards from tokens[end - 1] collecting author chunks:
// "Smith", "Hjorland & Albrechtsen", "Berg et al.", "Pew Research Center Survey".
std::optional<Names> names_before(const std::vector<Token>& tokens, std::size_t end) {
  std::size_t i = end;
  while (i > 0 && tokens[i - 1].text == ",") --i;
  Names names;
  if (i >= 2 && tokens[i - 1].word && (tokens[i - 1].text == "al." || tokens[i - 1].text == "al") &&
      tokens[i - 2].text == "et") {
    names.et_al = true;
    i -= 2;
    while (i > 0 && tokens[i - 1].text == ",") --i;
  }
  std::vector<std::vector<std::string>> chunks;
  std::size_t first = i;
  while (i > 0 && tokens[i - 1].word && is_capitalized(tokens[i - 1].text) && !as_year(tokens[i - 1].text)) {
    std::vector<std::string> chunk;
    while (i > 0 && tokens[i - 1].word && is_capitalized(tokens[i - 1].text) && !as_year(tokens[i - 1].text)) {
      chunk.insert(chunk.begin(), tokens[i - 1].text);
      --i;
    }
    chunks.insert(chunks.begin(), std::move(chunk));
    first = i;
    std::size_t k = i;
    if (k > 0 && tokens[k - 1].text == ",") --k;
    if (k > 0 && is_conjunction(tokens[k - 1])) --k;
    if (k == i || k == 0 || !tokens[k - 1].word || !is_capitalized(tokens[k - 1].text)) break;
    i = k;
  }
  if (chunks.empty()) return std::nullopt;
  for (const auto& chunk : chunks) {
    std::string s = surname_of(chunk.back());
    if (s.empty()) return std::nullopt;
    names.surnames.push_back(std::move(s));
  }
  names.first_token = first;
  return names;
}

bool has_cue_before(const std::vector<Token>& tokens, std::size_t end) {
  for (std::size_t k = 0; k < end; ++k) {
    if (tokens[k].word && is_cue_word(tokens[k].text)) return true;
    if (k + 1 < end && text::iequals(tokens[k].text, "for") && text::iequals(tokens[k + 1].text, "example")) {
      return true;
    }
  }
  return false;
}

// Parses one ';'-separated segment of a parenthetical group.
std::vector<CitationMarker> parse_segment(std::string_view s, std::size_t base) {
  const auto tokens = tokenize(s, base);
  std::size_t y0 = tokens.size();
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].word && as_year(tokens[k].text)) {
      y0 = k;
      break;
    }
  }
  if (y0 == tokens.size()) return {};
  const auto names = names_before(tokens, y0);
  if (!names) return {};

  CitationMarker proto;
  proto.style = MarkerStyle::parenthetical;
  proto.surnames = names->surnames;
  proto.et_al = names->et_al || names->surnames.size() > 2;
  proto.example_cue = has_cue_before(tokens, names->first_token);
  for (std::size_t k = y0 + 1; k + 1 < tokens.size(); ++k) {
    if (tokens[k].word && is_locator_word(tokens[k].text)) proto.page_locator = true;
  }
  std::vector<CitationMarker> out;
  for (std::size_t k = y0; k < tokens.size(); ++k) {
    const auto y = tokens[k].word ? as_year(tokens[k].text) : std::nullopt;
    if (!y) break;
    CitationMarker m = proto;
    m.year = y->value;
    m.year_suffix = y->suffix;
    out.push_back(std::move(m));
    if (k + 2 < tokens.size() && tokens[k + 1].text == "," && as_year(tokens[k + 2].text)) {
      ++k;
      continue;
    }
    break;
  }
  return out;
}

std::size_t matching_paren(std::string_view s, std::size_t open) {
  int depth = 0;
  const std::size_t limit = std::min(s.size(), open + kMaxGroupLength);
  for (std::size_t k = open; k < limit; ++k) {
    if (s[k] == '(') {
      ++depth;
    } else if (s[k] == ')') {
      if (--depth == 0) return k;
    }
  }
  return std::string_view::npos;
}

// "(2011)", "(2011a)", "(1995, 2000)", "(2011, p. 16)": years for a narrative marker.
std::optional<std::pair<std::vector<Year>, bool>> narrative_years(std::string_view content) {
  const auto tokens = tokenize(content, 0);
  if (tokens.empty()) return std::nullopt;
  std::vector<Year> years;
  std::size_t k = 0;
  while (k < tokens.size()) {
    const auto y = tokens[k].word ? as_year(tokens[k].text) : std::nullopt;
    if (!y) break;
    years.push_back(*y);
    ++k;
    if (k < tokens.size() && tokens[k].text == "," && k + 1 < tokens.size() && as_year(tokens[k + 1].text)) ++k;
  }
  if (years.empty()) return std::nullopt;
  bool locator = false;
  if (k < tokens.size()) {
    if (tokens[k].text != "," || k + 1 >= tokens.size() || !is_locator_word(tokens[k + 1].text)) return std::nullopt;
    locator = true;
  }
  return std::make_pair(std::move(years), locator);
}

bool is_narrative_stopword(std::string_view w) {
  static constexpr std::string_view kStop[] = {"In", "The", "See", "And", "For", "From", "At", "On",
                                               "Of", "By", "To", "As", "A",   "An",  "This", "These"};
  return std::find(std::begin(kStop), std::end(kStop), w) != std::end(kStop);
}

std::size_t word_start_before(std::string_view s, std::size_t end) {
  std::size_t b = end;
  while (b > 0 && (text::is_alnum(s[b - 1]) || s[b - 1] == '\'' || s[b - 1] == '-' || s[b - 1] == '.')) --b;
  return b;
}

std::size_t skip_spaces_back(std::string_view s, std::size_t end) {
  while (end > 0 && text::is_space(s[end - 1])) --end;
  return end;
}

struct NarrativeNames {
  std::vector<std::string> surnames;
  bool et_al = false;
  std::size_t begin = 0;
};

std::optional<NarrativeNames> narrative_names(std::string_view s, std::size_t open) {
  NarrativeNames out;
  std::size_t end = skip_spaces_back(s, open);
  std::size_t b = word_start_before(s, end);
  if (b == end) return std::nullopt;
  std::string w(s.substr(b, end - b));
  if (w == "al." || w == "al" || w == "al.'s" || w == "al's") {
    const std::size_t e2 = skip_spaces_back(s, b);
    const std::size_t b2 = word_start_before(s, e2);
    if (s.substr(b2, e2 - b2) != "et") return std::nullopt;
    out.et_al = true;
    end = skip_spaces_back(s, b2);
    b = word_start_before(s, end);
    if (b == end) return std::nullopt;
    w = std::string(s.substr(b, end - b));
  }
  if (!is_capitalized(w) || is_narrative_stopword(bare_name(w))) return std::nullopt;
  const std::string surname = surname_of(w);
  if (surname.empty()) return std::nullopt;
  out.surnames.push_back(surname);
  out.begin = b;
  if (!out.et_al) {
    // "Chen and Kash's (2011)", "Hjorland & Albrechtsen (1995)"
    const std::size_t ce = skip_spaces_back(s, b);
    std::size_t cb = ce;
    if (ce > 0 && s[ce - 1] == '&') {
      cb = ce - 1;
    } else {
      cb = word_start_before(s, ce);
      if (s.substr(cb, ce - cb) != "and") cb = ce;
    }
    if (cb < ce) {
      const std::size_t pe = skip_spaces_back(s, cb);
      const std::size_t pb = word_start_before(s, pe);
      if (pb < pe && is_capitalized(s.substr(pb, pe - pb)) && !is_narrative_stopword(bare_name(s.substr(pb, pe - pb)))) {
        const std::string first = surname_of(s.substr(pb, pe - pb));
        if (!first.empty()) {
          out.surnames.insert(out.surnames.begin(), first);
          out.begin = pb;
        }
      }
    }
  }
  return out;
}

bool cue_precedes(std::string_view s, std::size_t begin) {
  // Up to three words before the marker.
  std::size_t end = begin;
  for (int n = 0; n < 3; ++n) {
    end = skip_spaces_back(s, end);
    while (end > 0 && (s[end - 1] == ',' || s[end - 1] == '(')) end = skip_spaces_back(s, end - 1);
    const std::size_t b = word_start_before(s, end);
    if (b == end) return false;
    const std::string_view w = s.substr(b, end - b);
    if (is_cue_word(w)) return true;
    if (text::iequals(w, "example") && b > 0) {
      const std::size_t pe = skip_spaces_back(s, b);
      const std::size_t pb = word_start_before(s, pe);
      if (text::iequals(s.substr(pb, pe - pb), "for")) return true;
    }
    end = b;
  }
  return false;
}

std::vector<std::string> numeric_labels(std::string_view content) {
  std::vector<std::string> labels;
  bool any_digit = false;
  for (char c : content) {
    if (text::is_digit(c)) {
      any_digit = true;
    } else if (c != ',' && c != ';' && c != ' ' && c != '-') {
      return {};
    }
  }
  if (!any_digit) return {};
  std::string normalized(content);
  std::replace(normalized.begin(), normalized.end(), ';', ',');
  for (const auto& raw : text::split(normalized, ',')) {
    const std::string item = text::trim(raw);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    int a = 0;
    int b = 0;
    if (dash == std::string::npos) {
      std::from_chars(item.data(), item.data() + item.size(), a);
      labels.push_back(std::to_string(a));
      continue;
    }
    const std::string lo = text::trim(item.substr(0, dash));
    const std::string hi = text::trim(item.substr(dash + 1));
    if (lo.empty() || hi.empty()) return {};
    std::from_chars(lo.data(), lo.data() + lo.size(), a);
    std::from_chars(hi.data(), hi.data() + hi.size(), b);
    if (b < a || b - a > kMaxRangeExpansion) return {};
    for (int v = a; v <= b; ++v) labels.push_back(std::to_string(v));
  }
  return labels;
}

}  // namespace

std::vector<CitationMarker> scan_markers(std::string_view sentence) {
  const text::Folded folded = text::fold(sentence);
  const std::string& s = folded.ascii;
  std::vector<CitationMarker> markers;
  auto map_span = [&](CitationMarker& m, std::size_t b, std::size_t e) {
    m.begin = folded.source_offset[b];
    m.end = folded.source_offset[e];
  };

  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '[') {
      const std::size_t close = s.find(']', i);
      if (close != std::string::npos && close - i <= kMaxBracketLength) {
        const auto labels = numeric_labels(std::string_view(s).substr(i + 1, close - i - 1));
        if (!labels.empty()) {
          for (const auto& l : labels) {
            CitationMarker m;
            m.style = MarkerStyle::numeric;
            m.label = l;
            m.example_cue = cue_precedes(s, i);
            map_span(m, i, close + 1);
            markers.push_back(std::move(m));
          }
          i = close + 1;
          continue;
        }
      }
      ++i;
      continue;
    }
    if (s[i] != '(') {
      ++i;
      continue;
    }
    const std::size_t close = matching_paren(s, i);
    if (close == std::string::npos) {
      ++i;
      continue;
    }
    const std::string_view content = std::string_view(s).substr(i + 1, close - i - 1);
    if (const auto years = narrative_years(content)) {
      if (const auto names = narrative_names(s, i)) {
        for (const auto& y : years->first) {
          CitationMarker m;
          m.style = MarkerStyle::narrative;
          m.surnames = names->surnames;
          m.et_al = names->et_al;
          m.year = y.value;
          m.year_suffix = y.suffix;
          m.page_locator = years->second;
          m.example_cue = cue_precedes(s, names->begin);
          map_span(m, names->begin, close + 1);
          markers.push_back(std::move(m));
        }
      }
      i = close + 1;
      continue;
    }
    // Parenthetical group, possibly several works separated by ';'.
    std::vector<CitationMarker> group;
    std::size_t seg_start = i + 1;
    for (std::size_t k = i + 1; k <= close; ++k) {
      if (k == close || s[k] == ';') {
        auto found = parse_segment(std::string_view(s).substr(seg_start, k - seg_start), seg_start);
        for (auto& m : found) group.push_back(std::move(m));
        seg_start = k + 1;
      }
    }
    if (group.empty()) {
      // Nothing here; inner parentheses may still hold markers.
      ++i;
      continue;
    }
    const bool group_cue = group.front().example_cue;
    for (auto& m : group) {
      m.example_cue = m.example_cue || group_cue;
      map_span(m, i, close + 1);
      markers.push_back(std::move(m));
    }
    i = close + 1;
  }
  return markers;
}

// ---------------------------------------------------------------------------
// Linking

ReferenceIndex::ReferenceIndex(std::span<const ReferenceEntry> references) : refs_(references) {
  for (std::size_t i = 0; i < refs_.size(); ++i) {
    const auto& r = refs_[i];
    if (!r.authors.empty()) by_surname_[r.authors.front().surname()].push_back(i);
    if (r.numeric_label) by_label_.emplace(r.ref_id, i);
    if (r.year) by_year_[*r.year].push_back(i);
  }
}

namespace {

bool suffix_compatible(const CitationMarker& m, const ReferenceEntry& r) {
  return !m.year_suffix || m.year_suffix == r.year_suffix;
}

bool author_count_compatible(const CitationMarker& m, const ReferenceEntry& r) {
  if (m.et_al || m.surnames.size() > 2) return r.authors.size() >= 3;
  return r.authors.size() == m.surnames.size();
}

LinkResult from_candidates(const std::vector<std::size_t>& hits, std::span<const ReferenceEntry> refs,
                           std::string rule) {
  LinkResult out;
  if (hits.size() == 1) {
    out.status = LinkStatus::resolved;
    out.ref_id = refs[hits.front()].ref_id;
    out.rule = std::move(rule);
  } else if (hits.size() > 1) {
    out.status = LinkStatus::ambiguous;
    for (auto h : hits) out.candidates.push_back(refs[h].ref_id);
    out.rule = "link:ambiguous";
  } else {
    out.rule = "link:unresolved";
  }
  return out;
}

}  // namespace

LinkResult ReferenceIndex::link(const CitationMarker& marker, std::string_view sentence) const {
  if (marker.style == MarkerStyle::numeric) {
    if (!by_label_.empty()) {
      const auto it = by_label_.find(marker.label);
      if (it == by_label_.end()) return from_candidates({}, refs_, "");
      return from_candidates({it->second}, refs_, "link:numeric-label");
    }
    int position = 0;
    std::from_chars(marker.label.data(), marker.label.data() + marker.label.size(), position);
    if (position < 1 || static_cast<std::size_t>(position) > refs_.size()) return from_candidates({}, refs_, "");
    return from_candidates({static_cast<std::size_t>(position - 1)}, refs_, "link:numeric-position");
  }

  std::vector<std::size_t> hits;
  if (!marker.surnames.empty()) {
    if (const auto it = by_surname_.find(marker.surnames.front()); it != by_surname_.end()) {
      for (const auto idx : it->second) {
        const auto& r = refs_[idx];
        if (r.year != marker.year || !suffix_compatible(marker, r)) continue;
        bool names_match = true;
        if (!marker.et_al) {
          for (std::size_t k = 1; k < marker.surnames.size() && names_match; ++k) {
            names_match = k < r.authors.size() && r.authors[k].surname() == marker.surnames[k];
          }
        }
        if (names_match) hits.push_back(idx);
      }
    }
  }
  if (hits.size() > 1) {
    std::vector<std::size_t> refined;
    for (auto h : hits) {
      if (author_count_compatible(marker, refs_[h])) refined.push_back(h);
    }
    if (!refined.empty()) hits = std::move(refined);
  }
  if (!hits.empty() || marker.style != MarkerStyle::narrative || sentence.empty()) {
    return from_candidates(hits, refs_, "link:author-year");
  }

  // Narrative look-back: a same-year entry whose first author is named earlier
  // in the sentence ("Thomas Kuhn ... Revolutions (1962)").
  const auto year_it = by_year_.find(marker.year);
  if (year_it == by_year_.end()) return from_candidates({}, refs_, "");
  const text::Folded folded = text::fold(sentence.substr(0, marker.begin));
  std::vector<std::string> earlier;
  for (const auto& t : tokenize(folded.ascii, 0)) {
    if (t.word && is_capitalized(t.text)) earlier.push_back(surname_of(t.text));
  }
  for (const auto idx : year_it->second) {
    const auto& r = refs_[idx];
    if (r.authors.empty() || !suffix_compatible(marker, r)) continue;
    if (std::find(earlier.begin(), earlier.end(), r.authors.front().surname()) != earlier.end()) hits.push_back(idx);
  }
  return from_candidates(hits, refs_, "link:narrative-lookback");
}

LinkResult link_citation(const CitationMarker& marker, std::span<const ReferenceEntry> references,
                         std::string_view sentence) {
  return ReferenceIndex(references).link(marker, sentence);
}

namespace {

std::vector<InTextCitation> detect_with_index(std::string_view sentence, const ReferenceIndex& index,
                                              std::size_t sentence_index) {
  std::vector<InTextCitation> out;
  for (auto& marker : scan_markers(sentence)) {
    InTextCitation c;
    c.citation_id = static_cast<int>(out.size()) + 1;
    const LinkResult link = index.link(marker, sentence);
    c.link = link.status;
    c.ref_id = link.status == LinkStatus::resolved ? link.ref_id : std::string();
    c.link_rule = link.rule;
    c.candidates = link.candidates;
    c.sentence_index = sentence_index;
    c.span_begin = marker.begin;
    c.span_end = marker.end;
    c.marker_style = marker.style;
    c.inside_example_cue = marker.example_cue;
    c.marker = std::move(marker);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<InTextCitation> detect_citations(std::string_view sentence, std::span<const ReferenceEntry> references,
                                             std::size_t sentence_index) {
  return detect_with_index(sentence, ReferenceIndex(references), sentence_index);
}

// ---------------------------------------------------------------------------
// Contexts and counts

CitationContext extract_context(const Document& doc, const InTextCitation& citation, int window_before,
                                int window_after) {
  if (window_before < 0 || window_before > 5 || window_after < 0 || window_after > 5) {
    throw std::invalid_argument("context windows must lie in [0, 5]");
  }
  const auto section = doc.section_of(citation.sentence_index);
  if (!section) throw std::invalid_argument("citation sentence lies outside every section");
  const Section& sec = doc.sections[*section];
  const std::size_t s = citation.sentence_index;
  const std::size_t lo = std::max(sec.first_sentence, s >= static_cast<std::size_t>(window_before)
                                                          ? s - static_cast<std::size_t>(window_before)
                                                          : std::size_t{0});
  const std::size_t hi = std::min(sec.end_sentence() - 1, s + static_cast<std::size_t>(window_after));
  CitationContext ctx;
  ctx.citation_id = citation.citation_id;
  ctx.level = window_before == 0 && window_after == 0 ? ContextLevel::single_sentence : ContextLevel::sentence_cluster;
  for (std::size_t k = lo; k <= hi; ++k) {
    ctx.sentence_indices.push_back(k);
    if (!ctx.text.empty()) ctx.text.push_back(' ');
    ctx.text += doc.sentences[k];
  }
  return ctx;
}

AnalyzedDocument analyze(Document doc) {
  AnalyzedDocument out;
  out.document = std::move(doc);
  const ReferenceIndex index(out.document.references);
  for (const auto& r : out.document.references) out.mention_counts[r.ref_id] = 0;
  int next_id = 1;
  for (std::size_t i = 0; i < out.document.sentences.size(); ++i) {
    for (auto& c : detect_with_index(out.document.sentences[i], index, i)) {
      c.citation_id = next_id++;
      if (c.resolved()) ++out.mention_counts[c.ref_id];
      out.citations.push_back(std::move(c));
    }
  }
  return out;
}

int count_mentions(const AnalyzedDocument& doc, std::string_view ref_id) {
  const auto it = doc.mention_counts.find(std::string(ref_id));
  if (it == doc.mention_counts.end()) {
    throw Error(ErrorKind::unknown_ref, "no reference '" + std::string(ref_id) + "' in document '" +
                                            doc.document.metadata.doc_id + "'");
  }
  return it->second;
}

std::vector<std::string> unmentioned_references(const AnalyzedDocument& doc) {
  std::vector<std::string> out;
  for (const auto& r : doc.document.references) {
    if (doc.mention_counts.at(r.ref_id) == 0) out.push_back(r.ref_id);
  }
  return out;
}

}  // namespace cca
