#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cca/error.hpp"
#include "cca/pipeline.hpp"
#include "expected.hpp"
#include "synthetic.hpp"

using namespace cca;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

std::string joined(const CodedCitation& r) {
  std::string s;
  for (Category c : kAllCategories) {
    if (!s.empty()) s += ' ';
    s += r.code(c).label();
  }
  return s;
}

}  // namespace

TEST_CASE("config parsing") {
  const fs::path base = "/work/conf";
  SUBCASE("defaults") {
    const auto c = PipelineConfig::parse("", base);
    CHECK(c.window_before == 1);
    CHECK(c.window_after == 1);
    CHECK(c.delta == doctest::Approx(0.2));
    CHECK_FALSE(c.lexicon_negative);
    CHECK(c.output_dir == fs::path("/work/conf/cca-out"));
  }
  SUBCASE("values, comments and relative paths") {
    const auto c = PipelineConfig::parse(
        "# windows\nwindow_before = 0\nwindow_after=3\ndelta=0.5\nlexicon_negative=lex/neg.csv\n"
        "venue_map=builtin\noutput_dir=/tmp/out\njobs=4\n",
        base);
    CHECK(c.window_before == 0);
    CHECK(c.window_after == 3);
    CHECK(c.delta == doctest::Approx(0.5));
    CHECK(*c.lexicon_negative == fs::path("/work/conf/lex/neg.csv"));
    CHECK_FALSE(c.venue_map);
    CHECK(c.jobs == 4);
  }
  SUBCASE("echo parses back to the same configuration") {
    const auto c = PipelineConfig::parse("window_after=2\ndelta=0.35\nlexicon_focus=f.csv\n", base);
    const auto again = PipelineConfig::parse(c.to_text(), "/elsewhere");
    CHECK(again.to_text() == c.to_text());
    CHECK(c.to_text().find("jobs") == std::string::npos);
  }
  SUBCASE("errors") {
    for (const char* bad : {"window_before=6\n", "window_after=-1\n", "delta=1.5\n", "delta=abc\n", "colour=red\n",
                            "delta=0.1\ndelta=0.2\n", "no equals sign\n", "jobs=0\n"}) {
      CAPTURE(bad);
      CHECK(kind_of([&] { PipelineConfig::parse(bad, base); }) == ErrorKind::malformed_config);
    }
    CHECK(kind_of([] { PipelineConfig::load("/nonexistent/cca.conf"); }) == ErrorKind::malformed_config);
    CHECK(kind_of([&] { PipelineConfig::parse("lexicon_negative=/nonexistent.csv\n", base).check_files(); }) ==
          ErrorKind::malformed_config);
  }
}

TEST_CASE("manifest parsing") {
  const auto m = parse_manifest("# corpus\na.txt\tplain_annotated\n\n/abs/b.xml\tstructured_xml\n", "/base");
  REQUIRE(m.size() == 2);
  CHECK(m[0].path == fs::path("/base/a.txt"));
  CHECK(m[0].name == "a.txt");
  CHECK(m[1].format == InputFormat::structured_xml);
  try {
    parse_manifest("a.txt\tplain_annotated\nb.txt plain_annotated\n", "/base");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::malformed_input);
    CHECK(e.line() == 2);
  }
  CHECK(kind_of([] { parse_manifest("a.txt\tpdf\n", "/"); }) == ErrorKind::malformed_input);
  CHECK(kind_of([] { parse_manifest("# nothing\n", "/"); }) == ErrorKind::malformed_input);
}

TEST_CASE("fixture corpus codes end to end") {
  const auto manifest = load_manifest(fs::path(CCA_FIXTURE_DIR) / "paper" / "manifest.tsv");
  const auto result = run_pipeline(manifest, PipelineConfig::parse("", "/tmp"), true);
  CHECK(result.skipped.empty());
  CHECK(result.unresolved.empty());
  const auto& expected = testing::expected_fixture_codes();
  REQUIRE(result.records.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& r = result.records[i];
    CAPTURE(r.doc_id);
    CAPTURE(r.citation_id);
    CHECK(r.doc_id == expected[i].doc_id);
    CHECK(r.citation_id == expected[i].citation_id);
    CHECK(r.ref_id == expected[i].ref_id);
    CHECK(joined(r) == expected[i].codes);
  }
}

TEST_CASE("malformed documents") {
  const fs::path dir = testing::scratch_dir("pipeline-malformed");
  const fs::path fixtures = fs::path(CCA_FIXTURE_DIR) / "paper";
  std::ofstream(dir / "broken.txt") << "#META id: broken\n#SECTION Introduction\nText.\n#FIGURE 1\n";
  std::ofstream(dir / "manifest.tsv") << (fixtures / "paper_a.txt").string() << "\tplain_annotated\n"
                                      << "broken.txt\tplain_annotated\n";
  const auto manifest = load_manifest(dir / "manifest.tsv");
  const auto config = PipelineConfig::parse("", dir);

  const auto lenient = run_pipeline(manifest, config, false);
  REQUIRE(lenient.skipped.size() == 1);
  CHECK(lenient.skipped[0].name == "broken.txt");
  CHECK(lenient.documents_coded == 1);
  CHECK(lenient.records.size() == 3);
  CHECK(lenient.summary_json().find("broken.txt") != std::string::npos);

  CHECK_THROWS_AS(run_pipeline(manifest, config, true), Error);
}

TEST_CASE("output is independent of worker count") {
  const fs::path dir = testing::scratch_dir("pipeline-jobs");
  const auto manifest = load_manifest(testing::write_synthetic_corpus(dir, 12, {20, 8, 0.5}, 99));
  auto one = PipelineConfig::parse("jobs=1\n", dir);
  auto three = PipelineConfig::parse("jobs=3\n", dir);
  const auto a = run_pipeline(manifest, one, true);
  const auto b = run_pipeline(manifest, three, true);
  CHECK_FALSE(a.records.empty());
  CHECK(to_jsonl(a.records) == to_jsonl(b.records));
  CHECK(a.frequencies_csv() == b.frequencies_csv());
  CHECK(a.summary_json() == b.summary_json());
}

TEST_CASE("empty lexicons fall back to priors") {
  const auto manifest = load_manifest(fs::path(CCA_FIXTURE_DIR) / "paper" / "manifest.tsv");
  std::vector<Document> docs;
  for (const auto& m : manifest) {
    std::ifstream in(m.path);
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back(parse_document(ss.str(), m.format));
  }
  const auto res = code_documents(docs, PipelineConfig::parse("", "/tmp"), CodingResources::with_lexicons({}));
  REQUIRE_FALSE(res.records.empty());
  for (const auto& r : res.records) {
    CHECK(r.code(Category::J).label() == "J4");
    CHECK(r.matched_cues.empty());
    const auto& rules = r.code(Category::I).rules;
    REQUIRE(rules.size() == 1);
    CHECK(rules[0].rfind("I:section-prior:", 0) == 0);
  }
}
