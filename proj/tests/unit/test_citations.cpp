#include <doctest.h>

#include "cca/citations.hpp"
#include "cca/error.hpp"
#include "cca/ingest.hpp"

using namespace cca;

namespace {

std::string span_of(const std::string& s, const CitationMarker& m) { return s.substr(m.begin, m.end - m.begin); }

std::vector<ReferenceEntry> refs_of(std::initializer_list<const char*> lines) {
  std::vector<ReferenceEntry> out;
  for (const char* l : lines) out.push_back(parse_reference_entry(l));
  return out;
}

}  // namespace

TEST_CASE("parenthetical groups expand to one marker per work") {
  const std::string s = "Markets forecast well (Berg et al. 2001; Wolfers and Zitzewitz 2004; Goel et al. 2010).";
  const auto m = scan_markers(s);
  REQUIRE(m.size() == 3);
  CHECK(m[0].surnames == std::vector<std::string>{"berg"});
  CHECK(m[0].et_al);
  CHECK(m[1].surnames == std::vector<std::string>{"wolfers", "zitzewitz"});
  CHECK_FALSE(m[1].et_al);
  CHECK(m[2].year == 2010);
  for (const auto& x : m) {
    CHECK(x.style == MarkerStyle::parenthetical);
    CHECK(span_of(s, x) == "(Berg et al. 2001; Wolfers and Zitzewitz 2004; Goel et al. 2010)");
  }
}

TEST_CASE("same authors with several years") {
  const auto m = scan_markers("As argued (Chen, 2006; Chen & Hicks, 2004, 2005b).");
  REQUIRE(m.size() == 3);
  CHECK(m[1].surnames == std::vector<std::string>{"chen", "hicks"});
  CHECK(m[2].year == 2005);
  CHECK(m[2].year_suffix == 'b');
}

TEST_CASE("narrative markers") {
  SUBCASE("possessive and non-ASCII name") {
    const std::string s = "Hj\xC3\xB8rland's (1991) criticized this approach.";
    const auto m = scan_markers(s);
    REQUIRE(m.size() == 1);
    CHECK(m[0].style == MarkerStyle::narrative);
    CHECK(m[0].surnames == std::vector<std::string>{"hjorland"});
    CHECK(span_of(s, m[0]) == "Hj\xC3\xB8rland's (1991)");
  }
  SUBCASE("two authors and et al.") {
    CHECK(scan_markers("Voos and Dagaev (1976) report this.").at(0).surnames ==
          std::vector<std::string>{"voos", "dagaev"});
    const auto m = scan_markers("Duncan et al. (1981) listed categories.");
    CHECK(m.at(0).et_al);
    CHECK(m.at(0).surnames == std::vector<std::string>{"duncan"});
  }
  SUBCASE("page locator inside narrative parentheses") {
    CHECK(scan_markers("Smith (2011, p. 16) states that.").at(0).page_locator);
  }
  SUBCASE("life dates are not citations") { CHECK(scan_markers("Thomas Kuhn (1922-1996) wrote.").empty()); }
}

TEST_CASE("cue and locator flags") {
  const auto m = scan_markers("See the discussion (see, e.g., Mayr, 1997, pp. 98\xE2\x80\x93" "99).");
  REQUIRE(m.size() == 1);
  CHECK(m[0].example_cue);
  CHECK(m[0].page_locator);
  CHECK(scan_markers("Quoted (Smith, 2011, P. xx).").at(0).page_locator);
  CHECK_FALSE(scan_markers("Plain (Smith, 2011).").at(0).example_cue);
  const auto g = scan_markers("Many (e.g. Spence 1973; Cho 1987).");
  REQUIRE(g.size() == 2);
  CHECK(g[1].example_cue);
}

TEST_CASE("numeric markers") {
  const auto m = scan_markers("Prior work [3, 5-7] and [12].");
  REQUIRE(m.size() == 5);
  CHECK(m[0].label == "3");
  CHECK(m[3].label == "7");
  CHECK(m[4].label == "12");
  CHECK(scan_markers("An array a[i] is not a citation.").empty());
  CHECK(scan_markers("Huge [1-100000] is refused.").empty());
}

TEST_CASE("linking rules") {
  const auto refs = refs_of({
      "Hj\xC3\xB8rland, B. (1991). Information seeking. Westport, CT: Greenwood Press.",
      "Hj\xC3\xB8rland, B., & Albrechtsen, H. (1995). Toward a new horizon. JASIS, 46(6), 400-425.",
      "Small, H. (2011a). One. Scientometrics, 1(1), 1-2.",
      "Small, H. (2011b). Two. Scientometrics, 1(2), 3-4.",
      "Kuhn, T. S. (1962). The structure of scientific revolutions. Chicago: University of Chicago Press.",
  });
  const ReferenceIndex index(refs);
  const auto link = [&](const std::string& s) { return index.link(scan_markers(s).at(0), s); };

  CHECK(link("(Hj\xC3\xB8rland, 1991)").ref_id == "hjorland-1991");
  CHECK(link("(Hj\xC3\xB8rland & Albrechtsen, 1995)").ref_id == "hjorland-albrechtsen-1995");
  CHECK(link("(Small, 2011a)").ref_id == "small-2011a");
  const auto amb = link("(Small, 2011)");
  CHECK(amb.status == LinkStatus::ambiguous);
  CHECK(amb.candidates.size() == 2);
  CHECK(link("(Nobody, 2011)").status == LinkStatus::unresolved);
  const auto lookback = link("Thomas Kuhn wrote The Structure of Scientific Revolutions (1962).");
  CHECK(lookback.status == LinkStatus::resolved);
  CHECK(lookback.ref_id == "kuhn-1962");
  CHECK(lookback.rule == "link:narrative-lookback");
}

TEST_CASE("numeric linking by label or by position") {
  const auto labelled = refs_of({"[1] A, B. (2000). X.", "[2] C, D. (2001). Y."});
  CHECK(link_citation(scan_markers("[2]").at(0), labelled).ref_id == "2");
  CHECK(link_citation(scan_markers("[3]").at(0), labelled).status == LinkStatus::unresolved);
  const auto plain = refs_of({"Able, B. (2000). X.", "Cole, D. (2001). Y."});
  CHECK(link_citation(scan_markers("[2]").at(0), plain).ref_id == "cole-2001");
}

namespace {

Document sample_document() {
  return parse_document(R"(#META id: s
#META authors: Doe, Jane
#SECTION Introduction
Zero. One cites (Kuhn, 1962). Two. Three cites Kuhn (1962) again.
#SECTION Methods
Four cites (Kuhn, 1962). Five.
#REFERENCES
Kuhn, T. S. (1962). The structure of scientific revolutions. Chicago: University of Chicago Press.
Mayr, E. (1997). This is biology. Cambridge, MA: Harvard University Press.
)",
                        InputFormat::plain_annotated);
}

}  // namespace

TEST_CASE("analysis numbers citations in document order and counts mentions") {
  const auto a = analyze(sample_document());
  REQUIRE(a.citations.size() == 3);
  CHECK(a.citations[0].citation_id == 1);
  CHECK(a.citations[2].citation_id == 3);
  CHECK(a.citations[2].sentence_index == 4);
  CHECK(count_mentions(a, "kuhn-1962") == 3);
  CHECK(count_mentions(a, "mayr-1997") == 0);
  CHECK(unmentioned_references(a) == std::vector<std::string>{"mayr-1997"});
  CHECK_THROWS_AS(count_mentions(a, "nope"), Error);
}

TEST_CASE("context windows are clamped to the section") {
  const auto a = analyze(sample_document());
  const Document& d = a.document;
  const auto c0 = extract_context(d, a.citations[0], 0, 0);
  CHECK(c0.level == ContextLevel::single_sentence);
  CHECK(c0.sentence_indices == std::vector<std::size_t>{1});
  const auto c1 = extract_context(d, a.citations[1], 2, 2);
  CHECK(c1.sentence_indices == std::vector<std::size_t>{1, 2, 3});
  const auto c2 = extract_context(d, a.citations[2], 1, 1);
  CHECK(c2.sentence_indices == std::vector<std::size_t>{4, 5});
  CHECK(c2.text == "Four cites (Kuhn, 1962). Five.");
  CHECK_THROWS_AS(extract_context(d, a.citations[0], 6, 0), std::invalid_argument);
  CHECK_THROWS_AS(extract_context(d, a.citations[0], 0, -1), std::invalid_argument);
}

TEST_CASE("context width is monotone in the window") {
  const auto a = analyze(sample_document());
  for (const auto& c : a.citations) {
    std::size_t previous = 0;
    for (int w = 0; w <= 5; ++w) {
      const auto ctx = extract_context(a.document, c, w, w);
      CHECK(ctx.sentence_indices.size() >= previous);
      previous = ctx.sentence_indices.size();
    }
  }
}
