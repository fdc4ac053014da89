// Command-line front end: code, report, eval, net.
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cca/error.hpp"
#include "cca/pipeline.hpp"
#include "cca/text.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    cca::write_text_file(out_path, content);
  }
}

cca::Category category_arg(const std::string& s) {
  const auto c = cca::parse_category(cca::text::trim(s));
  if (!c) throw cca::Error(cca::ErrorKind::unknown_category, "unknown category '" + s + "'");
  return *c;
}

int cmd_code(const std::string& manifest_path, const std::string& config_path, bool strict, int jobs,
             const std::string& out_dir) {
  const auto started = std::chrono::steady_clock::now();
  std::ostringstream log;
  log << timestamp() << " start code manifest=" << manifest_path << " config=" << config_path << '\n';
  cca::PipelineConfig config = cca::PipelineConfig::load(config_path);
  if (jobs > 0) config.jobs = jobs;
  if (!out_dir.empty()) config.output_dir = fs::absolute(out_dir).lexically_normal();
  const auto manifest = cca::load_manifest(manifest_path);
  const cca::RunResult result = cca::run_pipeline(manifest, config, strict);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  log << timestamp() << " documents=" << result.documents_coded << "/" << result.documents_listed
      << " records=" << result.records.size() << " jobs=" << config.jobs << " seconds=" << seconds << '\n';
  for (const auto& s : result.skipped) {
    std::cerr << "skipped " << s.name << ": " << s.error << '\n';
    log << "skipped " << s.name << ": " << s.error << '\n';
  }
  cca::write_outputs(result, config.output_dir, log.str());
  return kOk;
}

int cmd_report(const std::string& input, const std::string& rows, const std::string& cols, const std::string& out) {
  const cca::Category r = category_arg(rows);
  std::optional<cca::Category> c;
  if (!cols.empty()) c = category_arg(cols);
  const auto records = cca::read_jsonl(cca::read_text_file(input));
  emit(cca::aggregate(records, r, c).to_csv(), out);
  return kOk;
}

int cmd_eval(const std::string& input, const std::string& gold_path, const std::string& categories,
             const std::string& out) {
  std::vector<cca::Category> cats;
  for (const auto& part : cca::text::split(categories, ',')) {
    if (!cca::text::trim(part).empty()) cats.push_back(category_arg(part));
  }
  if (cats.empty()) throw cca::Error(cca::ErrorKind::unknown_category, "no categories given");
  const auto coded = cca::read_jsonl(cca::read_text_file(input));
  const auto gold = cca::read_gold_jsonl(cca::read_text_file(gold_path));
  const auto result = cca::evaluate(coded, gold, cats);
  emit(cca::agreement_csv(result.reports), out);
  std::cerr << "matched " << result.matched << ", unmatched gold " << result.unmatched_gold.size() << '\n';
  for (const auto& u : result.unmatched_gold) std::cerr << "unmatched " << u << '\n';
  return kOk;
}

int cmd_net(const std::string& manifest_path, const std::string& out, bool strict) {
  const auto manifest = cca::load_manifest(manifest_path);
  std::vector<cca::DocumentMetadata> corpus;
  for (const auto& entry : manifest) {
    try {
      corpus.push_back(cca::parse_document(cca::read_text_file(entry.path), entry.format).metadata);
    } catch (const cca::Error& e) {
      if (strict || e.kind() == cca::ErrorKind::incomplete_coding) throw;
      std::cerr << "skipped " << entry.name << ": " << e.what() << '\n';
    }
  }
  cca::write_text_file(out, cca::write_edge_list(cca::build_coauthor_graph(corpus)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codes in-text citations of a corpus with a twelve-category codebook."};
  app.require_subcommand(1);

  std::string manifest, config, out_dir, input, rows, cols, gold, categories, out;
  bool strict = false;
  int jobs = 0;

  auto* code = app.add_subcommand("code", "Code every citation of a corpus");
  code->add_option("--manifest", manifest, "Manifest: <path><TAB><format> per line")->required();
  code->add_option("--config", config, "key=value configuration file")->required();
  code->add_flag("--strict", strict, "Fail on the first malformed document");
  code->add_option("--jobs", jobs, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
  code->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* report = app.add_subcommand("report", "Frequency table or cross-tab of coded output");
  report->add_option("--input", input, "coded.jsonl")->required();
  report->add_option("--rows", rows, "Row category (A-L)")->required();
  report->add_option("--cols", cols, "Column category (A-L)");
  report->add_option("--out", out, "Write CSV here instead of stdout");

  auto* eval = app.add_subcommand("eval", "Agreement between coded output and gold annotations");
  eval->add_option("--input", input, "coded.jsonl")->required();
  eval->add_option("--gold", gold, "Gold JSONL")->required();
  eval->add_option("--categories", categories, "Comma-separated categories, e.g. I,J")->required();
  eval->add_option("--out", out, "Write CSV here instead of stdout");

  auto* net = app.add_subcommand("net", "Export the coauthorship edge list");
  net->add_option("--manifest", manifest, "Manifest: <path><TAB><format> per line")->required();
  net->add_option("--out", out, "Edge list path")->required();
  net->add_flag("--strict", strict, "Fail on the first malformed document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (code->parsed()) return cmd_code(manifest, config, strict, jobs, out_dir);
    if (report->parsed()) return cmd_report(input, rows, cols, out);
    if (eval->parsed()) return cmd_eval(input, gold, categories, out);
    if (net->parsed()) return cmd_net(manifest, out, strict);
  } catch (const cca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == cca::ErrorKind::incomplete_coding ? kInternal : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
