#include "cca/semantic.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "cca/error.hpp"
#include "cca/text.hpp"

namespace cca {

namespace {

constexpr std::pair<std::string_view, CueTag> kTags[] = {
    {"negative", CueTag::negative},         {"positive", CueTag::positive},   {"evidence", CueTag::evidence},
    {"framework", CueTag::framework},       {"background", CueTag::background},
    {"experimental", CueTag::experimental}, {"empirical", CueTag::empirical}, {"theoretical", CueTag::theoretical},
};

// Mirrors data/lexicons and data/venues.csv; a unit test keeps them in step.
const std::pair<const char*, const char*> kDefaultLexicons[] = {
      {"negative", R"csv(# Contrast and limitation cues. Drive J2 and I4.
phrase,tag
however,negative
but,negative
problem,negative
suffer,negative
nevertheless,negative
limit,negative
limitation,negative
weak,negative
weakness,negative
undermine,negative
ignore,negative
drawback,negative
shortcoming,negative
fail,negative
lack,negative
)csv"},
      {"positive", R"csv(# Approval cues. Drive J1. Edit freely.
phrase,tag
seminal,positive
influential,positive
accurate,positive
successfully,positive
importantly,positive
valuable,positive
effective,positive
useful,positive
pioneering,positive
)csv"},
      {"evidence", R"csv(phrase,tag
has shown,evidence
have shown,evidence
it has been shown,evidence
has been shown,evidence
have been shown,evidence
empirical work,evidence
evidence,evidence
found that,evidence
)csv"},
      {"framework", R"csv(phrase,tag
adapted from,framework
based on,framework
solution concept,framework
framework,framework
following,framework
we use,framework
)csv"},
      {"focus", R"csv(# Whole-document cues for the research focus (L).
# A trailing * matches any continuation of the last word.
phrase,tag
experiment,experimental
laboratory,experimental
assay,experimental
manipulat*,experimental
survey,empirical
interview,empirical
regression,empirical
hypotheses,empirical
hypothesis,empirical
content analysis,empirical
theorem,theoretical
we prove,theoretical
conceptual framework,theoretical
epistemolog*,theoretical
)csv"},
};

const char* const kDefaultVenues = R"csv(# Venue name substring -> domain. Case-insensitive, first match wins, so
# list specific patterns before general ones.
venue_pattern,K_value
information science,K1
jasist,K1
journal of documentation,K1
scientometrics,K1
informetrics,K1
corporate communications,K1
management,K1
marketing,K1
sociolog,K1
psycholog,K1
econom,K1
education,K1
philosoph,K2
history,K2
literature,K2
linguistic,K2
religio,K2
engineering,K4
computer,K4
computing,K4
ieee,K4
artificial intelligence,K4
multiagent,K4
electronic commerce,K4
genome,K3
physics,K3
chemistry,K3
biolog,K3
nature,K3
cell,K3
)csv";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CsvLine {
  std::size_t number;
  std::string left;
  std::string right;
};

std::string unquote(std::string s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// Two-column CSV: '#' comments, blank lines skipped, the first data line must
// equal `header`. The split is at the last comma.
std::vector<CsvLine> two_column_csv(std::string_view input, std::string_view header, ErrorKind kind,
                                    std::string_view what) {
  std::vector<CsvLine> rows;
  bool seen_header = false;
  std::size_t number = 0;
  std::istringstream in{std::string(input)};
  std::string line;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!seen_header) {
      std::string h;
      for (char c : t) {
        if (!text::is_space(c)) h.push_back(c);
      }
      if (text::to_lower(h) != header) {
        throw Error(kind, std::string(what) + ": expected header '" + std::string(header) + "'", number);
      }
      seen_header = true;
      continue;
    }
    const auto comma = t.rfind(',');
    if (comma == std::string::npos) throw Error(kind, std::string(what) + ": expected two columns", number);
    rows.push_back(CsvLine{number, unquote(t.substr(0, comma)), unquote(t.substr(comma + 1))});
  }
  return rows;
}

}  // namespace

std::string to_string(CueTag t) {
  for (const auto& [name, tag] : kTags) {
    if (tag == t) return std::string(name);
  }
  return "";
}

std::optional<CueTag> parse_cue_tag(std::string_view s) {
  const std::string l = text::to_lower(text::trim(s));
  for (const auto& [name, tag] : kTags) {
    if (name == l) return tag;
  }
  return std::nullopt;
}

CueLexicon parse_lexicon(std::string_view input, std::string name, std::vector<std::string>* warnings) {
  if (!text::is_valid_utf8(input)) throw Error(ErrorKind::malformed_lexicon, name + ": invalid UTF-8");
  CueLexicon lex;
  lex.name = std::move(name);
  std::set<std::string> seen;
  for (const auto& row : two_column_csv(input, "phrase,tag", ErrorKind::malformed_lexicon, lex.name)) {
    CueEntry e;
    std::string phrase = text::to_lower(text::collapse_whitespace(text::fold_ascii(row.left)));
    if (!phrase.empty() && phrase.back() == '*') {
      e.prefix = true;
      phrase.pop_back();
    }
    e.tokens = text::word_tokens(phrase);
    if (e.tokens.empty()) throw Error(ErrorKind::malformed_lexicon, lex.name + ": empty phrase", row.number);
    const auto tag = parse_cue_tag(row.right);
    if (!tag) throw Error(ErrorKind::malformed_lexicon, lex.name + ": unknown tag '" + row.right + "'", row.number);
    e.tag = *tag;
    e.phrase = text::trim(phrase) + (e.prefix ? "*" : "");
    std::string canonical;
    for (const auto& tok : e.tokens) canonical += tok + ' ';
    canonical += e.prefix ? "*" : "";
    if (!seen.insert(canonical).second) {
      throw Error(ErrorKind::malformed_lexicon, lex.name + ": duplicate phrase '" + e.phrase + "'", row.number);
    }
    lex.entries.push_back(std::move(e));
  }
  if (lex.entries.empty() && warnings) warnings->push_back("lexicon " + lex.name + " is empty");
  return lex;
}

CueLexicon load_lexicon(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return parse_lexicon(read_file(path), path.stem().string(), warnings);
}

std::vector<CueLexicon> default_lexicons() {
  std::vector<CueLexicon> out;
  for (const auto& [name, body] : kDefaultLexicons) out.push_back(parse_lexicon(body, name));
  return out;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool last_token_matches(const std::string& word, const std::string& stem, bool prefix) {
  if (prefix) return word.compare(0, stem.size(), stem) == 0;
  if (word.size() < stem.size() || word.compare(0, stem.size(), stem) != 0) {
    // e-dropping: "ignore" -> "ignoring"
    return stem.size() > 1 && stem.back() == 'e' && word.size() == stem.size() + 2 &&
           word.compare(0, stem.size() - 1, stem, 0, stem.size() - 1) == 0 && word.compare(stem.size() - 1, 3, "ing") == 0;
  }
  const std::string_view rest = std::string_view(word).substr(stem.size());
  if (rest.empty() || rest == "s" || rest == "es" || rest == "ed" || rest == "ing") return true;
  return rest == "d" && stem.back() == 'e';
}

// Keys under which a single-token entry could be filed for this word.
std::vector<std::string> stem_candidates(const std::string& w) {
  std::vector<std::string> keys{w};
  const auto strip = [&](std::size_t n, std::string_view add = {}) {
    if (w.size() > n + 1) keys.push_back(w.substr(0, w.size() - n) + std::string(add));
  };
  const auto ends = [&](std::string_view s) { return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0; };
  if (ends("s")) strip(1);
  if (ends("es")) strip(2);
  if (ends("ed")) {
    strip(2);
    strip(1);
  }
  if (ends("ing")) {
    strip(3);
    strip(3, "e");
  }
  return keys;
}

}  // namespace

CueMatcher::CueMatcher(std::span<const CueLexicon> lexicons) : lexicons_(lexicons.begin(), lexicons.end()) {
  for (std::size_t l = 0; l < lexicons_.size(); ++l) {
    for (std::size_t e = 0; e < lexicons_[l].entries.size(); ++e) {
      const auto& entry = lexicons_[l].entries[e];
      if (entry.prefix && entry.tokens.size() == 1) {
        prefix_single_[entry.tokens.front()].push_back(Ref{l, e});
      } else {
        by_first_[entry.tokens.front()].push_back(Ref{l, e});
      }
    }
  }
}

std::vector<CueMatch> CueMatcher::match(std::string_view input) const {
  std::vector<CueMatch> out;
  if (lexicons_.empty()) return out;
  const auto words = text::word_tokens(text::fold_ascii(input));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  const auto record = [&](const Ref& r) {
    if (!seen.insert({r.lexicon, r.entry}).second) return;
    const auto& e = lexicons_[r.lexicon].entries[r.entry];
    out.push_back(CueMatch{e.phrase, e.tag, lexicons_[r.lexicon].name});
  };
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string& w = words[i];
    for (const auto& key : stem_candidates(w)) {
      const auto it = by_first_.find(key);
      if (it == by_first_.end()) continue;
      for (const Ref& r : it->second) {
        const auto& e = lexicons_[r.lexicon].entries[r.entry];
        const std::size_t n = e.tokens.size();
        if (i + n > words.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k + 1 < n && ok; ++k) ok = words[i + k] == e.tokens[k];
        if (ok) ok = last_token_matches(words[i + n - 1], e.tokens.back(), e.prefix);
        if (ok) record(r);
      }
    }
    for (std::size_t len = 1; len <= w.size(); ++len) {
      const auto it = prefix_single_.find(w.substr(0, len));
      if (it == prefix_single_.end()) continue;
      for (const Ref& r : it->second) record(r);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// I and J

namespace {

bool any_tag(std::span<const CueMatch> cues, CueTag tag) {
  return std::any_of(cues.begin(), cues.end(), [&](const CueMatch& m) { return m.tag == tag; });
}

std::vector<CueMatch> only(std::vector<CueMatch> cues, std::initializer_list<CueTag> tags) {
  std::erase_if(cues, [&](const CueMatch& m) { return std::find(tags.begin(), tags.end(), m.tag) == tags.end(); });
  return cues;
}

Function section_prior(Location d) {
  switch (d) {
    case Location::abstract:
    case Location::introduction:
    case Location::literature_review: return Function::background;
    case Location::methodology: return Function::framework;
    case Location::results_discussion: return Function::evidence;
    case Location::conclusion: return Function::challenges;
    case Location::other: return Function::background;
  }
  return Function::background;
}

}  // namespace

SemanticCode code_disposition(const CitationContext& context, const CueMatcher& matcher) {
  SemanticCode out;
  out.cues = only(matcher.match(context.text), {CueTag::negative, CueTag::positive});
  const bool neg = any_tag(out.cues, CueTag::negative);
  const bool pos = any_tag(out.cues, CueTag::positive);
  if (neg && pos) {
    out.code = Code::of(Category::J, Disposition::mixed, "J:mixed-cues");
  } else if (neg) {
    out.code = Code::of(Category::J, Disposition::negative, "J:negative-cue");
  } else if (pos) {
    out.code = Code::of(Category::J, Disposition::positive, "J:positive-cue");
  } else {
    out.code = Code::of(Category::J, Disposition::neutral, "J:no-cue");
  }
  return out;
}

SemanticCode code_function(const CitationContext& context, Location location, const CueMatcher& matcher) {
  SemanticCode out;
  out.cues = only(matcher.match(context.text),
                  {CueTag::negative, CueTag::evidence, CueTag::framework, CueTag::background});
  if (any_tag(out.cues, CueTag::negative)) {
    out.code = Code::of(Category::I, Function::challenges, "I:negative-cue");
  } else if (any_tag(out.cues, CueTag::evidence)) {
    out.code = Code::of(Category::I, Function::evidence, "I:evidence-cue");
  } else if (any_tag(out.cues, CueTag::framework)) {
    out.code = Code::of(Category::I, Function::framework, "I:framework-cue");
  } else if (any_tag(out.cues, CueTag::background)) {
    out.code = Code::of(Category::I, Function::background, "I:background-cue");
  } else {
    out.code = Code::of(Category::I, section_prior(location), "I:section-prior:" + label(Category::D, static_cast<int>(location)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// K and L

namespace {

std::optional<Domain> parse_domain(std::string_view s) {
  const std::string l = text::to_lower(text::trim(s));
  if (l == "k1" || l == "social") return Domain::social;
  if (l == "k2" || l == "humanities") return Domain::humanities;
  if (l == "k3" || l == "natural") return Domain::natural;
  if (l == "k4" || l == "applied") return Domain::applied;
  return std::nullopt;
}

}  // namespace

VenueMap VenueMap::parse(std::string_view input) {
  VenueMap map;
  for (const auto& row : two_column_csv(input, "venue_pattern,k_value", ErrorKind::malformed_config, "venue map")) {
    const std::string pattern = text::to_lower(text::collapse_whitespace(text::fold_ascii(row.left)));
    if (pattern.empty()) throw Error(ErrorKind::malformed_config, "venue map: empty pattern", row.number);
    const auto domain = parse_domain(row.right);
    if (!domain) throw Error(ErrorKind::malformed_config, "venue map: bad K value '" + row.right + "'", row.number);
    map.rows_.push_back(Row{pattern, *domain});
  }
  return map;
}

VenueMap VenueMap::load(const std::filesystem::path& path) { return parse(read_file(path)); }

VenueMap VenueMap::defaults() { return parse(kDefaultVenues); }

const VenueMap::Row* VenueMap::lookup(std::string_view venue) const {
  const std::string v = text::to_lower(text::collapse_whitespace(text::fold_ascii(venue)));
  if (v.empty()) return nullptr;
  for (const auto& row : rows_) {
    if (v.find(row.pattern) != std::string::npos) return &row;
  }
  return nullptr;
}

Code code_domain(const DocumentMetadata& meta, const VenueMap& venues) {
  if (meta.domain_override) return Code::of(Category::K, *meta.domain_override, "K:override");
  if (const auto* row = venues.lookup(meta.venue_name)) return Code::of(Category::K, row->domain, "K:venue:" + row->pattern);
  return Code::uncodable(Category::K, "unmapped-venue", "K:unmapped-venue");
}

std::vector<CueMatch> document_focus_cues(const Document& doc, const CueMatcher& matcher) {
  std::string all = doc.metadata.title;
  for (const auto& s : doc.sentences) {
    all.push_back('\n');
    all += s;
  }
  return only(matcher.match(all), {CueTag::experimental, CueTag::empirical, CueTag::theoretical});
}

SemanticCode code_focus(const Code& domain, std::span<const CueMatch> full_text_cues) {
  SemanticCode out;
  const auto pick = [&](CueTag tag, Focus focus, const char* rule) {
    for (const auto& m : full_text_cues) {
      if (m.tag == tag) out.cues.push_back(m);
    }
    out.code = Code::of(Category::L, focus, rule);
  };
  if (any_tag(full_text_cues, CueTag::experimental)) {
    pick(CueTag::experimental, Focus::experimental, "L:experimental-cue");
  } else if (any_tag(full_text_cues, CueTag::empirical)) {
    pick(CueTag::empirical, Focus::empirical, "L:empirical-cue");
  } else if (any_tag(full_text_cues, CueTag::theoretical)) {
    pick(CueTag::theoretical, Focus::theoretical, "L:theoretical-cue");
  } else if (!domain.codable()) {
    out.code = Code::of(Category::L, Focus::other, "L:no-cue-no-domain");
  } else {
    switch (static_cast<Domain>(domain.value)) {
      case Domain::humanities: out.code = Code::of(Category::L, Focus::theoretical, "L:domain-prior:K2"); break;
      case Domain::social: out.code = Code::of(Category::L, Focus::empirical, "L:domain-prior:K1"); break;
      case Domain::natural: out.code = Code::of(Category::L, Focus::experimental, "L:domain-prior:K3"); break;
      case Domain::applied: out.code = Code::of(Category::L, Focus::experimental, "L:domain-prior:K4"); break;
    }
  }
  return out;
}

}  // namespace cca
