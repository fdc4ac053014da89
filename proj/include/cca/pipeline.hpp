#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cca/ingest.hpp"
#include "cca/network.hpp"
#include "cca/report.hpp"

// End-to-end corpus coding: config, manifest, the staged run and its outputs.
namespace cca {

/// Flat key=value file. Relative paths resolve against the file's directory;
/// an unset lexicon, venue map or abbreviation path means the built-in list.
struct PipelineConfig {
  int window_before = 1;
  int window_after = 1;
  double delta = 0.2;
  std::optional<std::filesystem::path> lexicon_negative;
  std::optional<std::filesystem::path> lexicon_positive;
  std::optional<std::filesystem::path> lexicon_evidence;
  std::optional<std::filesystem::path> lexicon_framework;
  std::optional<std::filesystem::path> lexicon_focus;
  std::optional<std::filesystem::path> venue_map;
  std::optional<std::filesystem::path> abbreviations;
  std::filesystem::path output_dir = "cca-out";
  int jobs = 1;

  /// Throws Error(malformed_config) on unknown keys, bad values or ranges.
  static PipelineConfig parse(std::string_view text, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);
  /// Effective configuration in the same key=value syntax. `jobs` is left
  /// out: it changes scheduling only, never output.
  std::string to_text() const;
  /// Throws Error(malformed_config) when a referenced file is missing.
  void check_files() const;
};

struct ManifestEntry {
  std::filesystem::path path;
  /// Path as written in the manifest; used in reports.
  std::string name;
  InputFormat format = InputFormat::plain_annotated;
};

/// One "<path><TAB><format>" per line; blank lines and '#' comments skipped.
/// Throws Error(malformed_input) with the line number.
std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

/// Immutable coding resources shared by all workers.
struct CodingResources {
  AbbreviationList abbreviations;
  CueMatcher matcher;
  VenueMap venues;

  static CodingResources from_config(const PipelineConfig& config, std::vector<std::string>* warnings = nullptr);
  /// Built-in lists, or the given lexicons in place of the built-in ones.
  static CodingResources defaults();
  static CodingResources with_lexicons(std::span<const CueLexicon> lexicons);
};

struct SkippedDocument {
  std::string name;
  std::string error;
};

struct UnresolvedCitation {
  std::string doc_id;
  int citation_id = 0;
  std::size_t sentence_index = 0;
  LinkStatus status = LinkStatus::unresolved;
  std::string marker;
  std::vector<std::string> candidates;
};

struct RunResult {
  std::vector<CodedCitation> records;
  std::vector<SkippedDocument> skipped;
  std::vector<UnresolvedCitation> unresolved;
  std::vector<std::pair<std::string, std::string>> unmentioned;
  std::vector<std::pair<std::string, std::string>> warnings;
  std::size_t documents_listed = 0;
  std::size_t documents_coded = 0;
  std::size_t citations_detected = 0;
  CoauthorGraph graph;
  std::string effective_config;

  std::string summary_json() const;
  /// Long-form counts: "category,value,count" over every category.
  std::string frequencies_csv() const;
};

/// Codes already-parsed documents. C uses the coauthor graph of all of them.
RunResult code_documents(std::vector<Document> documents, const PipelineConfig& config,
                         const CodingResources& resources);

/// Reads, parses and codes a manifest's documents. A document that fails to
/// parse is skipped, or rethrown when `strict`.
RunResult run_pipeline(std::span<const ManifestEntry> manifest, const PipelineConfig& config, bool strict);

/// Writes coded.jsonl, summary.json, frequencies.csv, coauthors.tsv,
/// effective.conf and run.log into config.output_dir. Only run.log carries
/// timestamps.
void write_outputs(const RunResult& result, const std::filesystem::path& dir, std::string_view log);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cca
