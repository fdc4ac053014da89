#include "cca/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cca/error.hpp"
#include "cca/syntactic.hpp"
#include "cca/text.hpp"

namespace fs = std::filesystem;

namespace cca {

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Config

namespace {

constexpr std::string_view kBuiltin = "builtin";

int parse_int(const std::string& key, const std::string& v, std::size_t line) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorKind::malformed_config, key + ": expected an integer, got '" + v + "'", line);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v, std::size_t line) {
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorKind::malformed_config, key + ": expected a number, got '" + v + "'", line);
  }
  return out;
}

std::string format_real(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? p : buf);
}

std::string path_text(const std::optional<fs::path>& p) { return p ? p->generic_string() : std::string(kBuiltin); }

fs::path resolve(const fs::path& base, const std::string& v) {
  const fs::path p(v);
  return (p.is_absolute() ? p : fs::absolute(base / p)).lexically_normal();
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::string_view input, const fs::path& base_dir) {
  PipelineConfig c;
  std::set<std::string> seen;
  std::istringstream in{std::string(input)};
  std::string raw;
  std::size_t line = 0;
  const auto optional_path = [&](const std::string& v) -> std::optional<fs::path> {
    if (v.empty() || v == kBuiltin) return std::nullopt;
    return resolve(base_dir, v);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = text::trim(raw);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::malformed_config, "expected key=value", line);
    const std::string key = text::trim(t.substr(0, eq));
    const std::string value = text::trim(t.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(ErrorKind::malformed_config, "duplicate key '" + key + "'", line);
    if (key == "window_before") {
      c.window_before = parse_int(key, value, line);
    } else if (key == "window_after") {
      c.window_after = parse_int(key, value, line);
    } else if (key == "delta") {
      c.delta = parse_real(key, value, line);
    } else if (key == "lexicon_negative") {
      c.lexicon_negative = optional_path(value);
    } else if (key == "lexicon_positive") {
      c.lexicon_positive = optional_path(value);
    } else if (key == "lexicon_evidence") {
      c.lexicon_evidence = optional_path(value);
    } else if (key == "lexicon_framework") {
      c.lexicon_framework = optional_path(value);
    } else if (key == "lexicon_focus") {
      c.lexicon_focus = optional_path(value);
    } else if (key == "venue_map") {
      c.venue_map = optional_path(value);
    } else if (key == "abbreviations") {
      c.abbreviations = optional_path(value);
    } else if (key == "output_dir") {
      if (value.empty()) throw Error(ErrorKind::malformed_config, "output_dir is empty", line);
      c.output_dir = resolve(base_dir, value);
    } else if (key == "jobs") {
      c.jobs = parse_int(key, value, line);
    } else {
      throw Error(ErrorKind::malformed_config, "unknown key '" + key + "'", line);
    }
  }
  if (c.window_before < 0 || c.window_before > 5 || c.window_after < 0 || c.window_after > 5) {
    throw Error(ErrorKind::malformed_config, "context windows must lie in [0, 5]");
  }
  if (!(c.delta >= 0.0 && c.delta <= 1.0)) throw Error(ErrorKind::malformed_config, "delta must lie in [0, 1]");
  if (c.jobs < 1) throw Error(ErrorKind::malformed_config, "jobs must be at least 1");
  if (c.output_dir.is_relative()) c.output_dir = resolve(base_dir, c.output_dir.string());
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::string body;
  try {
    body = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::malformed_config, e.what());
  }
  return parse(body, fs::absolute(path).parent_path());
}

std::string PipelineConfig::to_text() const {
  std::ostringstream out;
  out << "window_before=" << window_before << '\n'
      << "window_after=" << window_after << '\n'
      << "delta=" << format_real(delta) << '\n'
      << "lexicon_negative=" << path_text(lexicon_negative) << '\n'
      << "lexicon_positive=" << path_text(lexicon_positive) << '\n'
      << "lexicon_evidence=" << path_text(lexicon_evidence) << '\n'
      << "lexicon_framework=" << path_text(lexicon_framework) << '\n'
      << "lexicon_focus=" << path_text(lexicon_focus) << '\n'
      << "venue_map=" << path_text(venue_map) << '\n'
      << "abbreviations=" << path_text(abbreviations) << '\n'
      << "output_dir=" << output_dir.generic_string() << '\n';
  return out.str();
}

void PipelineConfig::check_files() const {
  for (const auto* p : {&lexicon_negative, &lexicon_positive, &lexicon_evidence, &lexicon_framework, &lexicon_focus,
                        &venue_map, &abbreviations}) {
    if (*p && !fs::is_regular_file(**p)) throw Error(ErrorKind::malformed_config, "missing file " + (*p)->string());
  }
}

// ---------------------------------------------------------------------------
// Manifest

std::vector<ManifestEntry> parse_manifest(std::string_view input, const fs::path& base_dir) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(input)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (text::trim(raw).empty() || text::trim(raw)[0] == '#') continue;
    const auto tab = raw.find('\t');
    if (tab == std::string::npos) throw Error(ErrorKind::malformed_input, "manifest: expected <path><TAB><format>", line);
    const std::string name = text::trim(raw.substr(0, tab));
    const auto format = parse_input_format(text::trim(raw.substr(tab + 1)));
    if (name.empty() || !format) throw Error(ErrorKind::malformed_input, "manifest: bad path or format", line);
    out.push_back(ManifestEntry{resolve(base_dir, name), name, *format});
  }
  if (out.empty()) throw Error(ErrorKind::malformed_input, "manifest lists no documents");
  return out;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  return parse_manifest(read_text_file(path), fs::absolute(path).parent_path());
}

// ---------------------------------------------------------------------------
// Resources

CodingResources CodingResources::from_config(const PipelineConfig& config, std::vector<std::string>* warnings) {
  config.check_files();
  CodingResources r;
  r.abbreviations = config.abbreviations ? AbbreviationList::load(*config.abbreviations) : AbbreviationList::defaults();
  r.venues = config.venue_map ? VenueMap::load(*config.venue_map) : VenueMap::defaults();
  const auto defaults = default_lexicons();
  std::vector<CueLexicon> lexicons;
  const std::pair<const std::optional<fs::path>*, std::string_view> slots[] = {
      {&config.lexicon_negative, "negative"},   {&config.lexicon_positive, "positive"},
      {&config.lexicon_evidence, "evidence"},   {&config.lexicon_framework, "framework"},
      {&config.lexicon_focus, "focus"},
  };
  for (const auto& [path, name] : slots) {
    if (*path) {
      lexicons.push_back(load_lexicon(**path, warnings));
      lexicons.back().name = std::string(name);
    } else {
      for (const auto& d : defaults) {
        if (d.name == name) lexicons.push_back(d);
      }
    }
  }
  r.matcher = CueMatcher(lexicons);
  return r;
}

CodingResources CodingResources::defaults() {
  CodingResources r;
  r.abbreviations = AbbreviationList::defaults();
  r.venues = VenueMap::defaults();
  const auto lex = default_lexicons();
  r.matcher = CueMatcher(lex);
  return r;
}

CodingResources CodingResources::with_lexicons(std::span<const CueLexicon> lexicons) {
  CodingResources r = defaults();
  r.matcher = CueMatcher(lexicons);
  return r;
}

// ---------------------------------------------------------------------------
// Run

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct PendingRecord {
  const InTextCitation* citation = nullptr;
  CitationContext context;
  std::array<std::optional<Code>, kCategoryCount> codes;
  std::vector<MatchedCue> cues;
  int mentions = 0;
  std::vector<std::string> cited_keys;
};

struct DocumentWork {
  AnalyzedDocument analyzed;
  std::vector<PendingRecord> pending;
};

void put(PendingRecord& p, Code c) { p.codes[static_cast<std::size_t>(c.category)] = std::move(c); }

void add_cues(PendingRecord& p, Category c, const std::vector<CueMatch>& cues) {
  for (const auto& m : cues) p.cues.push_back(MatchedCue{c, m.phrase, to_string(m.tag)});
}

void code_without_relation(DocumentWork& work, const PipelineConfig& config, const CodingResources& res) {
  const Document& doc = work.analyzed.document;
  const Code g = code_document_type(doc.metadata);
  const Code h = code_authorship(doc.metadata.authors, Category::H);
  const Code k = code_domain(doc.metadata, res.venues);
  const SemanticCode l = code_focus(k, document_focus_cues(doc, res.matcher));
  for (const auto& c : work.analyzed.citations) {
    if (!c.resolved()) continue;
    const ReferenceEntry* ref = doc.find_reference(c.ref_id);
    PendingRecord p;
    p.citation = &c;
    p.context = extract_context(doc, c, config.window_before, config.window_after);
    p.mentions = work.analyzed.mention_counts.at(c.ref_id);
    for (const auto& a : ref->authors) p.cited_keys.push_back(a.key);
    const auto section = doc.section_of(c.sentence_index);
    const Location location = section ? doc.sections[*section].location : Location::other;
    put(p, code_document_type(*ref));
    put(p, code_authorship(ref->authors, Category::B));
    if (section) put(p, code_location(doc.sections[*section]));
    put(p, code_frequency(p.mentions));
    put(p, code_style(c, doc.sentences[c.sentence_index]));
    put(p, g);
    put(p, h);
    SemanticCode i = code_function(p.context, location, res.matcher);
    SemanticCode j = code_disposition(p.context, res.matcher);
    add_cues(p, Category::I, i.cues);
    add_cues(p, Category::J, j.cues);
    add_cues(p, Category::L, l.cues);
    put(p, std::move(i.code));
    put(p, std::move(j.code));
    put(p, k);
    put(p, l.code);
    work.pending.push_back(std::move(p));
  }
}

}  // namespace

RunResult code_documents(std::vector<Document> documents, const PipelineConfig& config,
                         const CodingResources& resources) {
  RunResult result;
  result.effective_config = config.to_text();
  std::vector<DocumentWork> work(documents.size());
  parallel_for(documents.size(), config.jobs, [&](std::size_t i) {
    work[i].analyzed = analyze(std::move(documents[i]));
    code_without_relation(work[i], config, resources);
  });

  std::vector<DocumentMetadata> metadata;
  for (const auto& w : work) metadata.push_back(w.analyzed.document.metadata);
  result.graph = build_coauthor_graph(metadata);
  const auto scores = capital_score(result.graph);

  std::vector<std::vector<CodedCitation>> per_doc(work.size());
  parallel_for(work.size(), config.jobs, [&](std::size_t i) {
    const Document& doc = work[i].analyzed.document;
    std::vector<std::string> citing;
    for (const auto& a : doc.metadata.authors) citing.push_back(a.key);
    for (auto& p : work[i].pending) {
      put(p, code_relation(citing, p.cited_keys, result.graph, scores, config.delta));
      per_doc[i].push_back(assemble_record(doc.metadata.doc_id, *p.citation, p.context, p.codes, std::move(p.cues),
                                           p.mentions));
    }
  });

  for (std::size_t i = 0; i < work.size(); ++i) {
    const auto& a = work[i].analyzed;
    const std::string& id = a.document.metadata.doc_id;
    ++result.documents_coded;
    result.citations_detected += a.citations.size();
    for (auto& r : per_doc[i]) result.records.push_back(std::move(r));
    for (const auto& c : a.citations) {
      if (c.resolved()) continue;
      const std::string& s = a.document.sentences[c.sentence_index];
      result.unresolved.push_back(UnresolvedCitation{id, c.citation_id, c.sentence_index, c.link,
                                                     s.substr(c.span_begin, c.span_end - c.span_begin), c.candidates});
    }
    for (const auto& ref : unmentioned_references(a)) result.unmentioned.emplace_back(id, ref);
    for (const auto& w : a.document.warnings) result.warnings.emplace_back(id, w);
  }
  sort_records(result.records);
  const auto by_doc = [](const auto& x, const auto& y) { return x.first < y.first; };
  std::stable_sort(result.unmentioned.begin(), result.unmentioned.end(), by_doc);
  std::stable_sort(result.warnings.begin(), result.warnings.end(), by_doc);
  std::stable_sort(result.unresolved.begin(), result.unresolved.end(), [](const auto& x, const auto& y) {
    return std::tie(x.doc_id, x.citation_id) < std::tie(y.doc_id, y.citation_id);
  });
  return result;
}

namespace {

bool is_input_error(ErrorKind k) {
  return k == ErrorKind::malformed_input || k == ErrorKind::empty_document || k == ErrorKind::duplicate_ref_id ||
         k == ErrorKind::unparseable_name || k == ErrorKind::io;
}

}  // namespace

RunResult run_pipeline(std::span<const ManifestEntry> manifest, const PipelineConfig& config, bool strict) {
  std::vector<std::string> resource_warnings;
  const CodingResources resources = CodingResources::from_config(config, &resource_warnings);

  std::vector<std::optional<Document>> parsed(manifest.size());
  std::vector<std::optional<Error>> failures(manifest.size());
  parallel_for(manifest.size(), config.jobs, [&](std::size_t i) {
    try {
      parsed[i] = parse_document(read_text_file(manifest[i].path), manifest[i].format, resources.abbreviations);
    } catch (const Error& e) {
      if (!is_input_error(e.kind())) throw;
      failures[i] = e;
    }
  });

  std::vector<SkippedDocument> skipped;
  std::vector<Document> documents;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (!failures[i] && !ids.insert(parsed[i]->metadata.doc_id).second) {
      failures[i] = Error(ErrorKind::malformed_input, "duplicate doc_id '" + parsed[i]->metadata.doc_id + "'");
    }
    if (failures[i]) {
      if (strict) throw Error(failures[i]->kind(), manifest[i].name + ": " + failures[i]->what(), failures[i]->line());
      skipped.push_back(SkippedDocument{manifest[i].name, failures[i]->what()});
      continue;
    }
    documents.push_back(std::move(*parsed[i]));
  }

  RunResult result = code_documents(std::move(documents), config, resources);
  result.documents_listed = manifest.size();
  result.skipped = std::move(skipped);
  for (auto& w : resource_warnings) result.warnings.insert(result.warnings.begin(), {"", std::move(w)});
  return result;
}

std::string RunResult::summary_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  std::size_t ambiguous = 0;
  for (const auto& u : unresolved) ambiguous += u.status == LinkStatus::ambiguous ? 1 : 0;
  j["documents"] = ordered_json{{"listed", documents_listed}, {"coded", documents_coded}, {"skipped", skipped.size()}};
  j["citations"] = ordered_json{{"detected", citations_detected},
                                {"coded", records.size()},
                                {"unresolved", unresolved.size() - ambiguous},
                                {"ambiguous", ambiguous}};
  ordered_json sk = ordered_json::array();
  for (const auto& s : skipped) sk.push_back(ordered_json{{"document", s.name}, {"error", s.error}});
  j["skipped_documents"] = std::move(sk);
  ordered_json un = ordered_json::array();
  for (const auto& u : unresolved) {
    un.push_back(ordered_json{{"doc_id", u.doc_id},
                              {"citation_id", u.citation_id},
                              {"sentence_index", u.sentence_index},
                              {"status", to_string(u.status)},
                              {"marker", u.marker},
                              {"candidates", u.candidates}});
  }
  j["unresolved_citations"] = std::move(un);
  ordered_json um = ordered_json::array();
  for (const auto& [doc, ref] : unmentioned) um.push_back(ordered_json{{"doc_id", doc}, {"ref_id", ref}});
  j["unmentioned_references"] = std::move(um);
  ordered_json wa = ordered_json::array();
  for (const auto& [doc, msg] : warnings) wa.push_back(ordered_json{{"doc_id", doc}, {"message", msg}});
  j["warnings"] = std::move(wa);
  j["coauthor_graph"] = ordered_json{{"nodes", graph.size()}, {"edges", graph.edges().size()}};
  ordered_json cfg = ordered_json::object();
  std::istringstream in(effective_config);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["config"] = std::move(cfg);
  return j.dump(2) + "\n";
}

std::string RunResult::frequencies_csv() const {
  std::ostringstream out;
  out << "category,value,count\n";
  for (const Category c : kAllCategories) {
    const FrequencyTable t = aggregate(records, c);
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) out << letter(c) << ',' << t.row_labels[r] << ',' << t.counts[r][0] << '\n';
  }
  return out.str();
}

void write_outputs(const RunResult& result, const fs::path& dir, std::string_view log) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "coded.jsonl", to_jsonl(result.records));
  write_text_file(dir / "summary.json", result.summary_json());
  write_text_file(dir / "frequencies.csv", result.frequencies_csv());
  write_text_file(dir / "coauthors.tsv", write_edge_list(result.graph));
  write_text_file(dir / "effective.conf", result.effective_config);
  write_text_file(dir / "run.log", log);
}

}  // namespace cca
