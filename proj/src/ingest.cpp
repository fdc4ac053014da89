#include "cca/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "cca/error.hpp"
#include "cca/text.hpp"

namespace cca {

namespace pt = boost::property_tree;

// ---------------------------------------------------------------------------
// Small enums

std::string to_string(VenueType t) {
  switch (t) {
    case VenueType::journal: return "journal";
    case VenueType::conference: return "conference";
    case VenueType::book: return "book";
    case VenueType::report: return "report";
    case VenueType::web: return "web";
    case VenueType::other: return "other";
  }
  return "other";
}

std::optional<VenueType> parse_venue_type(std::string_view s) {
  const std::string v = text::to_lower(text::trim(s));
  if (v == "journal") return VenueType::journal;
  if (v == "conference") return VenueType::conference;
  if (v == "book") return VenueType::book;
  if (v == "report") return VenueType::report;
  if (v == "web") return VenueType::web;
  if (v == "other") return VenueType::other;
  return std::nullopt;
}

std::string to_string(VenueSignal s) {
  switch (s) {
    case VenueSignal::proceedings: return "proceedings";
    case VenueSignal::volume_issue: return "volume_issue";
    case VenueSignal::publisher: return "publisher";
    case VenueSignal::edition: return "edition";
    case VenueSignal::editor: return "editor";
    case VenueSignal::report: return "report";
    case VenueSignal::news: return "news";
    case VenueSignal::url: return "url";
    case VenueSignal::retrieved: return "retrieved";
  }
  return "";
}

std::string to_string(InputFormat f) {
  return f == InputFormat::structured_xml ? "structured_xml" : "plain_annotated";
}

std::optional<InputFormat> parse_input_format(std::string_view s) {
  const std::string v = text::to_lower(text::trim(s));
  if (v == "structured_xml" || v == "xml") return InputFormat::structured_xml;
  if (v == "plain_annotated" || v == "plain") return InputFormat::plain_annotated;
  return std::nullopt;
}

std::string AuthorName::surname() const { return key.substr(0, key.find(',')); }

std::optional<std::size_t> Document::section_of(std::size_t sentence_index) const {
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (sentence_index >= sections[i].first_sentence && sentence_index < sections[i].end_sentence()) return i;
  }
  return std::nullopt;
}

const ReferenceEntry* Document::find_reference(std::string_view ref_id) const {
  for (const auto& r : references) {
    if (r.ref_id == ref_id) return &r;
  }
  return nullptr;
}

bool same_content(const Document& a, const Document& b) {
  return a.metadata == b.metadata && a.sections == b.sections && a.sentences == b.sentences &&
         a.references == b.references && a.references_missing == b.references_missing;
}

// ---------------------------------------------------------------------------
// Names

namespace {

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (text::is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return text::is_alpha(c); });
}

// "J.", "B. A.", "JA", "J.-P." are initials; "John" is not.
bool is_initials_word(std::string_view w) {
  std::string letters;
  for (char c : w) {
    if (c == '.' || c == '-') continue;
    if (!text::is_alpha(c)) return false;
    letters.push_back(c);
  }
  if (letters.empty() || letters.size() > 3) return false;
  return std::all_of(letters.begin(), letters.end(), [](char c) { return text::is_upper(c); });
}

bool is_initials(std::string_view s) {
  const auto ws = words_of(s);
  return !ws.empty() && std::all_of(ws.begin(), ws.end(), [](const std::string& w) { return is_initials_word(w); });
}

std::string surname_key(std::string_view surname_part) {
  const auto ws = words_of(surname_part);
  for (auto it = ws.rbegin(); it != ws.rend(); ++it) {
    std::string key;
    for (char c : *it) {
      if (text::is_alpha(c)) {
        key.push_back(text::is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c);
      } else if (c == '-' && !key.empty()) {
        key.push_back('-');
      }
    }
    while (!key.empty() && key.back() == '-') key.pop_back();
    if (!key.empty()) return key;
  }
  return {};
}

char first_initial(std::string_view given) {
  for (char c : given) {
    if (text::is_alpha(c)) return text::is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return '\0';
}

}  // namespace

AuthorName normalize_author_name(std::string_view raw) {
  const std::string folded = text::trim(text::fold_ascii(raw));
  if (!has_alpha(folded)) {
    throw Error(ErrorKind::unparseable_name, "no alphabetic content in author name '" + std::string(raw) + "'");
  }
  std::string surname_part;
  std::string given_part;
  if (const auto comma = folded.find(','); comma != std::string::npos) {
    surname_part = folded.substr(0, comma);
    given_part = folded.substr(comma + 1);
  } else {
    const auto ws = words_of(folded);
    if (ws.size() == 1) {
      surname_part = ws[0];
    } else if (is_initials_word(ws.back())) {
      for (std::size_t i = 0; i + 1 < ws.size(); ++i) surname_part += ws[i] + " ";
      given_part = ws.back();
    } else {
      surname_part = ws.back();
      given_part = ws.front();
    }
  }
  std::string key = surname_key(surname_part);
  if (key.empty()) {
    // "," or ", J." style input: fall back to whatever letters exist.
    key = surname_key(given_part);
    given_part.clear();
  }
  if (key.empty()) {
    throw Error(ErrorKind::unparseable_name, "no surname in author name '" + std::string(raw) + "'");
  }
  key.push_back(',');
  if (const char initial = first_initial(given_part); initial != '\0') key.push_back(initial);
  return AuthorName{text::trim(raw), key};
}

// ---------------------------------------------------------------------------
// Reference entries

namespace {

bool is_year_value(int y) { return y >= 1400 && y <= 2100; }

int parse_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

struct YearHit {
  std::size_t begin = std::string::npos;  // first char of the year group
  std::size_t end = 0;                    // one past the group
  std::optional<int> year;
  std::optional<char> suffix;
};

// Finds "(YYYY)" / "(YYYYa)" / "(YYYY," first, then "(n.d.)", then a bare year.
YearHit find_year(std::string_view s) {
  YearHit hit;
  for (std::size_t i = 0; i + 5 < s.size(); ++i) {
    if (s[i] != '(') continue;
    std::size_t j = i + 1;
    while (j < s.size() && text::is_space(s[j])) ++j;
    if (j + 4 > s.size()) continue;
    bool digits = true;
    for (std::size_t k = 0; k < 4; ++k) digits = digits && text::is_digit(s[j + k]);
    if (!digits) continue;
    std::size_t k = j + 4;
    std::optional<char> suffix;
    if (k < s.size() && text::is_lower(s[k])) suffix = s[k++];
    if (k < s.size() && (s[k] == ')' || s[k] == ',' || s[k] == ';')) {
      const int y = parse_int(s.substr(j, 4));
      if (!is_year_value(y)) continue;
      const std::size_t close = s.find(')', k);
      hit.begin = i;
      hit.end = close == std::string_view::npos ? k : close + 1;
      hit.year = y;
      hit.suffix = suffix;
      return hit;
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(' && text::icontains(s.substr(i, 7), "(n.d.")) {
      hit.begin = i;
      const std::size_t close = s.find(')', i);
      hit.end = close == std::string_view::npos ? s.size() : close + 1;
      return hit;
    }
  }
  for (std::size_t i = 0; i + 4 <= s.size(); ++i) {
    if (i > 0 && text::is_alnum(s[i - 1])) continue;
    bool digits = true;
    for (std::size_t k = 0; k < 4; ++k) digits = digits && text::is_digit(s[i + k]);
    if (!digits) continue;
    std::size_t k = i + 4;
    std::optional<char> suffix;
    if (k < s.size() && text::is_lower(s[k]) && (k + 1 >= s.size() || !text::is_alpha(s[k + 1]))) suffix = s[k++];
    if (k < s.size() && text::is_alnum(s[k])) continue;
    const int y = parse_int(s.substr(i, 4));
    if (!is_year_value(y)) continue;
    hit.begin = i;
    hit.end = k;
    hit.year = y;
    hit.suffix = suffix;
    return hit;
  }
  return hit;
}

// Without a year the author block ends at the first ". " not closing an initial.
std::size_t author_block_end(std::string_view s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] != '.' || !text::is_space(s[i + 1])) continue;
    std::size_t b = i;
    while (b > 0 && text::is_alpha(s[b - 1])) --b;
    if (i - b >= 3) return i;
  }
  return s.size();
}

std::vector<AuthorName> parse_author_block(std::string_view block, std::vector<std::string>* warnings) {
  // Conjunctions become separators; "et al." is dropped.
  std::string s(block);
  for (const std::string_view conj : {" & ", " and "}) {
    std::size_t pos = 0;
    while ((pos = s.find(conj, pos)) != std::string::npos) {
      s.replace(pos, conj.size(), ", ");
      pos += 2;
    }
  }
  std::vector<std::string> tokens;
  for (auto& part : text::split(s, ',')) {
    std::string t = text::trim(part);
    if (t == "&" || t.empty()) continue;
    if (text::iequals(t, "et al.") || text::iequals(t, "et al")) continue;
    if (t.size() > 7 && text::iequals(t.substr(t.size() - 7), " et al.")) t = text::trim(t.substr(0, t.size() - 7));
    tokens.push_back(std::move(t));
  }
  std::vector<std::string> names;
  auto given_like = [](const std::string& t) { return is_initials(t) || words_of(t).size() == 1; };
  bool paired = tokens.size() >= 2 && tokens.size() % 2 == 0;
  for (std::size_t i = 1; paired && i < tokens.size(); i += 2) paired = given_like(tokens[i]);
  if (paired) {
    for (std::size_t i = 0; i < tokens.size(); i += 2) names.push_back(tokens[i] + ", " + tokens[i + 1]);
  } else {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i + 1 < tokens.size() && !is_initials(tokens[i]) && is_initials(tokens[i + 1])) {
        names.push_back(tokens[i] + ", " + tokens[i + 1]);
        ++i;
      } else {
        names.push_back(tokens[i]);
      }
    }
  }
  std::vector<AuthorName> authors;
  for (const auto& n : names) {
    try {
      authors.push_back(normalize_author_name(n));
    } catch (const Error&) {
      if (warnings) warnings->push_back("skipped unparseable author '" + n + "'");
    }
  }
  return authors;
}

bool has_volume_issue(std::string_view s) {
  // 16(2) / 16 (2) / 5(1-2)
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '(' || i == 0) continue;
    std::size_t b = i;
    while (b > 0 && text::is_space(s[b - 1])) --b;
    if (b == 0 || !text::is_digit(s[b - 1])) continue;
    std::size_t j = i + 1;
    const std::size_t digits_start = j;
    while (j < s.size() && text::is_digit(s[j])) ++j;
    if (j == digits_start) continue;
    while (j < s.size() && (text::is_digit(s[j]) || s[j] == '-')) ++j;
    if (j < s.size() && s[j] == ')') return true;
  }
  // ", 87, 373-388"
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != ',') continue;
    std::size_t j = i + 1;
    while (j < s.size() && s[j] == ' ') ++j;
    const std::size_t v = j;
    while (j < s.size() && text::is_digit(s[j])) ++j;
    if (j == v || j >= s.size() || s[j] != ',') continue;
    ++j;
    while (j < s.size() && s[j] == ' ') ++j;
    const std::size_t p = j;
    while (j < s.size() && text::is_digit(s[j])) ++j;
    if (j == p || j >= s.size() || s[j] != '-') continue;
    ++j;
    if (j < s.size() && text::is_digit(s[j])) return true;
  }
  return false;
}

bool has_place_publisher(std::string_view s) {
  // "CA: Sage", "NJ: Ablex"
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    if (s[i] != ':' || s[i + 1] != ' ' || !text::is_upper(s[i + 2])) continue;
    if (!text::is_upper(s[i - 1]) || !text::is_upper(s[i - 2])) continue;
    if (i >= 3 && text::is_alpha(s[i - 3])) continue;
    return true;
  }
  return false;
}

bool contains_token(const std::vector<std::string>& tokens, std::initializer_list<std::string_view> words) {
  for (const auto& t : tokens) {
    for (auto w : words) {
      if (t == w) return true;
    }
  }
  return false;
}

bool contains_phrase(const std::vector<std::string>& tokens, std::string_view a, std::string_view b) {
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i] == a && tokens[i + 1] == b) return true;
  }
  return false;
}

bool is_ordinal(std::string_view t) {
  if (t.size() < 3) return false;
  const auto suffix = t.substr(t.size() - 2);
  if (suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") return false;
  return std::all_of(t.begin(), t.end() - 2, [](char c) { return text::is_digit(c); });
}

// Drops whitespace-delimited chunks that look like URLs, so that host names
// ("people-press.org") do not feed the word cues.
std::string without_urls(std::string_view s) {
  std::string out;
  for (const auto& chunk : text::split(text::collapse_whitespace(s), ' ')) {
    if (text::icontains(chunk, "://") || text::icontains(chunk, "www.")) continue;
    if (!out.empty()) out.push_back(' ');
    out += chunk;
  }
  return out;
}

std::set<VenueSignal> detect_signals(std::string_view rest_in) {
  std::set<VenueSignal> signals;
  const std::string stripped = without_urls(rest_in);
  const std::string_view rest = stripped;
  // The title runs to the first sentence break; word cues only count after it.
  std::size_t title_end = std::string_view::npos;
  for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
    if ((rest[i] == '.' || rest[i] == '?' || rest[i] == '!') && text::is_space(rest[i + 1]) && i > 0 &&
        text::is_alpha(rest[i - 1])) {
      title_end = i;
      break;
    }
  }
  const std::string_view venue = title_end == std::string_view::npos ? rest : rest.substr(title_end + 1);
  const auto all_tokens = text::word_tokens(rest);
  const auto venue_tokens = text::word_tokens(venue);

  if (contains_token(venue_tokens, {"proceedings", "proc", "conference", "symposium", "workshop"})) {
    signals.insert(VenueSignal::proceedings);
  }
  if (has_volume_issue(rest)) signals.insert(VenueSignal::volume_issue);
  if (has_place_publisher(rest) ||
      contains_token(venue_tokens, {"press", "publisher", "publishers", "publishing", "sage", "springer", "wiley",
                                    "elsevier", "routledge", "ablex", "pergamon", "kluwer"})) {
    signals.insert(VenueSignal::publisher);
  }
  for (std::size_t i = 0; i + 1 < all_tokens.size(); ++i) {
    if (is_ordinal(all_tokens[i]) && (all_tokens[i + 1] == "ed" || all_tokens[i + 1] == "edition")) {
      signals.insert(VenueSignal::edition);
    }
  }
  if (contains_token(all_tokens, {"edition"})) signals.insert(VenueSignal::edition);
  for (std::string_view cue : {"(eds", "(ed.", "(ed)", "(editor", "eds.)"}) {
    if (text::icontains(rest, cue)) signals.insert(VenueSignal::editor);
  }
  if (contains_token(venue_tokens, {"report", "reports"}) || contains_phrase(venue_tokens, "working", "paper") ||
      contains_phrase(venue_tokens, "white", "paper") || contains_phrase(all_tokens, "technical", "report")) {
    signals.insert(VenueSignal::report);
  }
  if (contains_token(venue_tokens, {"news", "newspaper", "magazine"})) signals.insert(VenueSignal::news);
  if (text::icontains(rest_in, "http://") || text::icontains(rest_in, "https://") || text::icontains(rest_in, "www.")) {
    signals.insert(VenueSignal::url);
  }
  if (contains_token(all_tokens, {"retrieved", "accessed"}) || contains_phrase(all_tokens, "available", "at")) {
    signals.insert(VenueSignal::retrieved);
  }
  return signals;
}

std::string derive_ref_id(const ReferenceEntry& e) {
  std::string id;
  if (e.authors.empty()) {
    id = "anon";
  } else if (e.authors.size() == 1) {
    id = e.authors[0].surname();
  } else if (e.authors.size() == 2) {
    id = e.authors[0].surname() + "-" + e.authors[1].surname();
  } else {
    id = e.authors[0].surname() + "-etal";
  }
  id += "-";
  if (e.year) {
    id += std::to_string(*e.year);
    if (e.year_suffix) id.push_back(*e.year_suffix);
  } else {
    id += "nd";
  }
  return id;
}

}  // namespace

ReferenceEntry parse_reference_entry(std::string_view text_in, std::vector<std::string>* warnings) {
  ReferenceEntry entry;
  entry.raw = text::collapse_whitespace(text_in);
  std::string body = text::fold_ascii(entry.raw);

  std::optional<std::string> label;
  if (!body.empty() && body[0] == '[') {
    const std::size_t close = body.find(']');
    if (close != std::string::npos && close > 1 && close <= 10) {
      const std::string inner = text::trim(std::string_view(body).substr(1, close - 1));
      if (!inner.empty() && std::all_of(inner.begin(), inner.end(), [](char c) { return text::is_digit(c); })) {
        label = inner;
        body = text::trim(std::string_view(body).substr(close + 1));
      }
    }
  }

  const YearHit year = find_year(body);
  std::string_view author_block;
  std::string_view rest;
  if (year.begin != std::string::npos) {
    author_block = std::string_view(body).substr(0, year.begin);
    rest = std::string_view(body).substr(year.end);
    entry.year = year.year;
    entry.year_suffix = year.year ? year.suffix : std::nullopt;
  } else {
    const std::size_t end = author_block_end(body);
    author_block = std::string_view(body).substr(0, end);
    rest = end < body.size() ? std::string_view(body).substr(end + 1) : std::string_view{};
    if (warnings) warnings->push_back("no year in reference '" + entry.raw + "'");
  }
  std::string block = text::trim(author_block);
  while (!block.empty() && (block.back() == ',' || block.back() == '.' || block.back() == ';')) {
    block.pop_back();
    block = text::trim(block);
  }
  entry.authors = parse_author_block(block, warnings);
  if (entry.authors.empty() && warnings) warnings->push_back("no authors in reference '" + entry.raw + "'");
  entry.venue_signals = detect_signals(rest);

  if (label) {
    entry.ref_id = *label;
    entry.numeric_label = true;
  } else {
    entry.ref_id = derive_ref_id(entry);
  }
  return entry;
}

// ---------------------------------------------------------------------------
// Section headers

namespace {

Location map_header_phrase(const std::string& h) {
  if (h == "abstract") return Location::abstract;
  if (h == "introduction" || h == "background") return Location::introduction;
  if (h == "literature review" || h == "related work" || h == "related works" || h == "prior work") {
    return Location::literature_review;
  }
  if (h.starts_with("method") || h == "materials and methods" || h == "experimental setup") {
    return Location::methodology;
  }
  if (h == "results" || h == "result" || h == "discussion" || h == "findings" || h == "evaluation" ||
      h == "experiments") {
    return Location::results_discussion;
  }
  if (h.starts_with("conclusion") || h == "summary" || h == "future work") return Location::conclusion;
  return Location::other;
}

}  // namespace

Location normalize_section_header(std::string_view header) {
  std::string h = text::to_lower(text::collapse_whitespace(text::fold_ascii(header)));
  // Drop leading numbering such as "2.", "3.1", "IV.".
  std::size_t i = 0;
  while (i < h.size() && (text::is_digit(h[i]) || h[i] == '.')) ++i;
  if (i > 0 && i < h.size() && h[i] == ' ') h = h.substr(i + 1);
  if (const auto sp = h.find(' '); sp != std::string::npos && sp <= 5 && h[sp - 1] == '.') {
    const std::string roman = h.substr(0, sp - 1);
    if (!roman.empty() && roman.find_first_not_of("ivxlc") == std::string::npos) h = h.substr(sp + 1);
  }
  while (!h.empty() && (h.back() == ':' || h.back() == '.')) h.pop_back();
  h = text::trim(h);

  if (const Location whole = map_header_phrase(h); whole != Location::other) return whole;
  // "Results and Discussion", "Conclusions & Future Work"
  std::string joined = h;
  for (const std::string_view sep : {" and ", " & ", "/"}) {
    std::size_t pos = 0;
    while ((pos = joined.find(sep, pos)) != std::string::npos) joined.replace(pos, sep.size(), "|");
  }
  const auto parts = text::split(joined, '|');
  if (parts.size() < 2) return Location::other;
  std::optional<Location> common;
  for (const auto& p : parts) {
    const Location loc = map_header_phrase(text::trim(p));
    if (loc == Location::other || (common && *common != loc)) return Location::other;
    common = loc;
  }
  return *common;
}

// ---------------------------------------------------------------------------
// Document assembly shared by both grammars

namespace {

struct RawSection {
  std::string header;
  std::vector<std::string> paragraphs;       // segmented by the sentence splitter
  std::vector<std::string> fixed_sentences;  // already split (structured XML)
  bool pre_segmented = false;
  std::size_t line = 0;
};

struct RawReference {
  std::string text;
  std::optional<std::string> explicit_id;
  std::size_t line = 0;
};

std::optional<Domain> parse_domain(std::string_view s) {
  const std::string v = text::to_lower(text::trim(s));
  if (v == "k1" || v == "social" || v == "social sciences") return Domain::social;
  if (v == "k2" || v == "humanities") return Domain::humanities;
  if (v == "k3" || v == "natural" || v == "natural sciences") return Domain::natural;
  if (v == "k4" || v == "applied" || v == "applied sciences and engineering") return Domain::applied;
  return std::nullopt;
}

std::optional<int> parse_year(std::string_view s) {
  const std::string v = text::trim(s);
  if (v.empty() || v.size() > 4 || !std::all_of(v.begin(), v.end(), [](char c) { return text::is_digit(c); })) {
    return std::nullopt;
  }
  const int y = parse_int(v);
  if (!is_year_value(y)) return std::nullopt;
  return y;
}

std::vector<AuthorName> parse_meta_authors(std::string_view value, std::vector<std::string>& warnings) {
  std::vector<AuthorName> authors;
  for (const auto& part : text::split(value, ';')) {
    const std::string name = text::trim(part);
    if (name.empty()) continue;
    try {
      authors.push_back(normalize_author_name(name));
    } catch (const Error&) {
      warnings.push_back("skipped unparseable author '" + name + "'");
    }
  }
  return authors;
}

Document assemble(DocumentMetadata meta, std::vector<RawSection> sections, std::vector<RawReference> refs,
                  std::vector<std::string> warnings, const AbbreviationList& abbreviations) {
  if (meta.doc_id.empty()) throw Error(ErrorKind::malformed_input, "document has no id");
  if (sections.empty()) throw Error(ErrorKind::empty_document, "document '" + meta.doc_id + "' has no sections");
  Document doc;
  if (meta.authors.empty()) {
    meta.metadata_incomplete = true;
    warnings.push_back("metadata incomplete: no authors");
  }
  doc.metadata = std::move(meta);
  for (auto& raw : sections) {
    Section sec;
    sec.raw_header = text::collapse_whitespace(raw.header);
    sec.location = normalize_section_header(sec.raw_header);
    sec.first_sentence = doc.sentences.size();
    if (raw.pre_segmented) {
      for (auto& s : raw.fixed_sentences) {
        std::string c = text::collapse_whitespace(s);
        if (!c.empty()) doc.sentences.push_back(std::move(c));
      }
    } else {
      for (const auto& para : raw.paragraphs) {
        for (auto& s : segment_sentences(para, abbreviations)) doc.sentences.push_back(std::move(s));
      }
    }
    sec.sentence_count = doc.sentences.size() - sec.first_sentence;
    if (sec.sentence_count == 0) warnings.push_back("section '" + sec.raw_header + "' has no sentences");
    doc.sections.push_back(std::move(sec));
  }
  std::unordered_set<std::string> seen;
  for (auto& raw : refs) {
    std::vector<std::string> ref_warnings;
    ReferenceEntry entry = parse_reference_entry(raw.text, &ref_warnings);
    if (raw.explicit_id && !raw.explicit_id->empty()) {
      entry.ref_id = *raw.explicit_id;
      entry.numeric_label =
          std::all_of(entry.ref_id.begin(), entry.ref_id.end(), [](char c) { return text::is_digit(c); });
    }
    for (auto& w : ref_warnings) warnings.push_back(std::move(w));
    if (!seen.insert(entry.ref_id).second) {
      throw Error(ErrorKind::duplicate_ref_id, "reference id '" + entry.ref_id + "' appears twice", raw.line);
    }
    doc.references.push_back(std::move(entry));
  }
  if (doc.references.empty()) {
    doc.references_missing = true;
    warnings.push_back("no references");
  }
  doc.warnings = std::move(warnings);
  return doc;
}

// ---------------------------------------------------------------------------
// Plain-annotated grammar

Document parse_plain(std::string_view bytes, const AbbreviationList& abbreviations) {
  DocumentMetadata meta;
  std::vector<RawSection> sections;
  std::vector<RawReference> refs;
  std::vector<std::string> warnings;
  enum class State { meta, section, references } state = State::meta;
  bool saw_references = false;
  std::string paragraph;
  auto flush_paragraph = [&] {
    if (!paragraph.empty() && !sections.empty()) sections.back().paragraphs.push_back(paragraph);
    paragraph.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string trimmed = text::trim(line);

    const bool directive = trimmed.size() >= 2 && trimmed[0] == '#' && text::is_upper(trimmed[1]);
    if (directive) {
      const std::size_t sp = trimmed.find_first_of(" \t");
      const std::string name = trimmed.substr(1, sp == std::string::npos ? std::string::npos : sp - 1);
      const std::string arg = sp == std::string::npos ? std::string() : text::trim(trimmed.substr(sp));
      if (name == "META") {
        if (state != State::meta) throw Error(ErrorKind::malformed_input, "#META after body text", line_no);
        const std::size_t colon = arg.find(':');
        if (colon == std::string::npos) throw Error(ErrorKind::malformed_input, "#META line without ':'", line_no);
        const std::string key = text::to_lower(text::trim(arg.substr(0, colon)));
        const std::string value = text::trim(arg.substr(colon + 1));
        if (key == "id") {
          meta.doc_id = value;
        } else if (key == "title") {
          meta.title = text::collapse_whitespace(value);
        } else if (key == "authors") {
          meta.authors = parse_meta_authors(value, warnings);
        } else if (key == "venue") {
          meta.venue_name = text::collapse_whitespace(value);
        } else if (key == "venue-type") {
          meta.venue_type = parse_venue_type(value);
          if (!meta.venue_type) throw Error(ErrorKind::malformed_input, "unknown venue-type '" + value + "'", line_no);
        } else if (key == "year") {
          meta.year = parse_year(value);
          if (!meta.year) throw Error(ErrorKind::malformed_input, "year out of range '" + value + "'", line_no);
        } else if (key == "domain") {
          meta.domain_override = parse_domain(value);
          if (!meta.domain_override) throw Error(ErrorKind::malformed_input, "unknown domain '" + value + "'", line_no);
        } else {
          warnings.push_back("line " + std::to_string(line_no) + ": unknown #META key '" + key + "'");
        }
      } else if (name == "SECTION") {
        if (state == State::references) {
          throw Error(ErrorKind::malformed_input, "#SECTION after #REFERENCES", line_no);
        }
        flush_paragraph();
        state = State::section;
        RawSection sec;
        sec.header = arg;
        sec.line = line_no;
        if (arg.empty()) warnings.push_back("line " + std::to_string(line_no) + ": section without header");
        sections.push_back(std::move(sec));
      } else if (name == "REFERENCES") {
        if (saw_references) throw Error(ErrorKind::malformed_input, "second #REFERENCES block", line_no);
        flush_paragraph();
        saw_references = true;
        state = State::references;
      } else {
        throw Error(ErrorKind::malformed_input, "unknown directive '#" + name + "'", line_no);
      }
      continue;
    }

    switch (state) {
      case State::meta:
        if (!trimmed.empty()) {
          warnings.push_back("line " + std::to_string(line_no) + ": text before first #SECTION ignored");
        }
        break;
      case State::section:
        if (trimmed.empty()) {
          flush_paragraph();
        } else {
          if (!paragraph.empty()) paragraph.push_back(' ');
          paragraph += trimmed;
        }
        break;
      case State::references:
        if (!trimmed.empty()) refs.push_back(RawReference{trimmed, std::nullopt, line_no});
        break;
    }
  }
  flush_paragraph();
  if (!saw_references) warnings.push_back("missing #REFERENCES block");
  return assemble(std::move(meta), std::move(sections), std::move(refs), std::move(warnings), abbreviations);
}

// ---------------------------------------------------------------------------
// Structured XML subset

constexpr int kMaxXmlDepth = 64;

void check_depth(std::string_view bytes) {
  int depth = 0;
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (bytes[i] != '<') continue;
    const char n = bytes[i + 1];
    if (n == '/') {
      --depth;
    } else if (n != '?' && n != '!') {
      const std::size_t close = bytes.find('>', i);
      if (close != std::string_view::npos && close > 0 && bytes[close - 1] == '/') continue;
      if (++depth > kMaxXmlDepth) throw Error(ErrorKind::malformed_input, "XML nesting too deep");
    }
  }
}

void warn_unknown(const pt::ptree& node, std::initializer_list<std::string_view> known, const std::string& where,
                  std::vector<std::string>& warnings) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      warnings.push_back("unknown element <" + name + "> in <" + where + "> ignored");
    }
  }
}

Document parse_xml(std::string_view bytes, const AbbreviationList& abbreviations) {
  check_depth(bytes);
  pt::ptree tree;
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorKind::malformed_input, e.message(), e.line());
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorKind::malformed_input, e.what());
  }
  const auto root = tree.get_child_optional("document");
  if (!root) throw Error(ErrorKind::malformed_input, "missing <document> root element");

  std::vector<std::string> warnings;
  DocumentMetadata meta;
  meta.doc_id = text::trim(root->get<std::string>("<xmlattr>.id", ""));
  if (const auto m = root->get_child_optional("meta")) {
    warn_unknown(*m, {"title", "authors", "venue", "year", "domain"}, "meta", warnings);
    meta.title = text::collapse_whitespace(m->get<std::string>("title", ""));
    if (const auto authors = m->get_child_optional("authors")) {
      for (const auto& [name, a] : *authors) {
        if (name != "author") continue;
        const std::string raw = text::trim(a.data());
        if (raw.empty()) continue;
        try {
          meta.authors.push_back(normalize_author_name(raw));
        } catch (const Error&) {
          warnings.push_back("skipped unparseable author '" + raw + "'");
        }
      }
    }
    if (const auto venue = m->get_child_optional("venue")) {
      meta.venue_name = text::collapse_whitespace(venue->data());
      if (const auto type = venue->get_optional<std::string>("<xmlattr>.type")) {
        meta.venue_type = parse_venue_type(*type);
        if (!meta.venue_type) throw Error(ErrorKind::malformed_input, "unknown venue type '" + *type + "'");
      }
    }
    if (const auto year = m->get_optional<std::string>("year")) {
      meta.year = parse_year(*year);
      if (!meta.year) throw Error(ErrorKind::malformed_input, "year out of range '" + *year + "'");
    }
    if (const auto domain = m->get_optional<std::string>("domain")) {
      meta.domain_override = parse_domain(*domain);
      if (!meta.domain_override) throw Error(ErrorKind::malformed_input, "unknown domain '" + *domain + "'");
    }
  }

  std::vector<RawSection> sections;
  if (const auto body = root->get_child_optional("body")) {
    warn_unknown(*body, {"section"}, "body", warnings);
    for (const auto& [name, s] : *body) {
      if (name != "section") continue;
      RawSection sec;
      sec.header = s.get<std::string>("<xmlattr>.header", "");
      warn_unknown(s, {"p"}, "section", warnings);
      sec.pre_segmented = true;
      for (const auto& [pname, p] : s) {
        if (pname != "p") continue;
        if (p.count("s") > 0) {
          if (!text::trim(p.data()).empty()) warnings.push_back("text outside <s> in <p> ignored");
          for (const auto& [sname, sn] : p) {
            if (sname == "s") sec.fixed_sentences.push_back(sn.data());
          }
        } else {
          for (auto& sentence : segment_sentences(p.data(), abbreviations)) {
            sec.fixed_sentences.push_back(std::move(sentence));
          }
        }
      }
      sections.push_back(std::move(sec));
    }
  }

  std::vector<RawReference> refs;
  bool saw_references = false;
  if (const auto list = root->get_child_optional("references")) {
    saw_references = true;
    warn_unknown(*list, {"ref"}, "references", warnings);
    for (const auto& [name, r] : *list) {
      if (name != "ref") continue;
      const std::string raw = text::trim(r.data());
      if (raw.empty()) {
        warnings.push_back("empty <ref> ignored");
        continue;
      }
      RawReference ref{raw, std::nullopt, 0};
      if (const auto id = r.get_optional<std::string>("<xmlattr>.id")) ref.explicit_id = text::trim(*id);
      refs.push_back(std::move(ref));
    }
  }
  if (!saw_references) warnings.push_back("missing <references> element");
  warn_unknown(*root, {"meta", "body", "references"}, "document", warnings);
  return assemble(std::move(meta), std::move(sections), std::move(refs), std::move(warnings), abbreviations);
}

}  // namespace

Document parse_document(std::string_view bytes, InputFormat format, const AbbreviationList& abbreviations) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (!text::is_valid_utf8(bytes)) throw Error(ErrorKind::malformed_input, "input is not valid UTF-8");
  if (bytes.find('\0') != std::string_view::npos) throw Error(ErrorKind::malformed_input, "input contains NUL bytes");
  return format == InputFormat::structured_xml ? parse_xml(bytes, abbreviations) : parse_plain(bytes, abbreviations);
}

std::string write_structured_xml(const Document& doc) {
  pt::ptree root;
  pt::ptree& d = root.add_child("document", pt::ptree{});
  d.put("<xmlattr>.id", doc.metadata.doc_id);
  pt::ptree& meta = d.add_child("meta", pt::ptree{});
  meta.put("title", doc.metadata.title);
  pt::ptree& authors = meta.add_child("authors", pt::ptree{});
  for (const auto& a : doc.metadata.authors) authors.add("author", a.raw);
  pt::ptree& venue = meta.add("venue", doc.metadata.venue_name);
  if (doc.metadata.venue_type) venue.put("<xmlattr>.type", to_string(*doc.metadata.venue_type));
  if (doc.metadata.year) meta.put("year", *doc.metadata.year);
  if (doc.metadata.domain_override) meta.put("domain", label(Category::K, static_cast<int>(*doc.metadata.domain_override)));
  pt::ptree& body = d.add_child("body", pt::ptree{});
  for (const auto& sec : doc.sections) {
    pt::ptree& s = body.add_child("section", pt::ptree{});
    s.put("<xmlattr>.header", sec.raw_header);
    if (sec.sentence_count == 0) continue;
    pt::ptree& p = s.add_child("p", pt::ptree{});
    for (std::size_t i = sec.first_sentence; i < sec.end_sentence(); ++i) p.add("s", doc.sentences[i]);
  }
  if (!doc.references.empty()) {
    pt::ptree& refs = d.add_child("references", pt::ptree{});
    for (const auto& r : doc.references) {
      pt::ptree& ref = refs.add("ref", r.raw);
      ref.put("<xmlattr>.id", r.ref_id);
    }
  }
  std::ostringstream out;
  pt::write_xml(out, root, pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

}  // namespace cca
