#include <doctest.h>

#include <random>

#include "cca/error.hpp"
#include "cca/ingest.hpp"
#include "cca/sentences.hpp"
#include "cca/text.hpp"
#include "synthetic.hpp"

using namespace cca;

TEST_CASE("fold maps curly quotes, dashes and accents to ASCII with offsets") {
  const std::string s = "Hj\xC3\xB8rland\xE2\x80\x99s (1922\xE2\x80\x93" "1996)";
  const auto f = text::fold(s);
  CHECK(f.ascii == "Hjorland's (1922-1996)");
  REQUIRE(f.source_offset.size() == f.ascii.size() + 1);
  CHECK(f.source_offset[2] == 2);  // 'o' comes from the two-byte o-slash
  CHECK(f.source_offset[3] == 4);
  CHECK(f.source_offset.back() == s.size());
}

TEST_CASE("utf8 validation") {
  CHECK(text::is_valid_utf8("plain"));
  CHECK(text::is_valid_utf8("\xC3\xA9"));
  CHECK_FALSE(text::is_valid_utf8("\xC3"));
  CHECK_FALSE(text::is_valid_utf8("\xFF\xFE"));
  CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));  // surrogate
}

TEST_CASE("sentence segmentation respects abbreviations and brackets") {
  const auto abbr = AbbreviationList::defaults();
  SUBCASE("abbreviations do not split") {
    const auto s = segment_sentences("See e.g. the work of Berg et al. on markets. It works.", abbr);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == "See e.g. the work of Berg et al. on markets.");
  }
  SUBCASE("no split inside parentheses") {
    const auto s = segment_sentences("Shown before (Smith, 2011, p. 4. Also Lee, 2003). Next one.", abbr);
    REQUIRE(s.size() == 2);
  }
  SUBCASE("closing quotes stay with the sentence") {
    const auto s = segment_sentences("He said \"it is done.\" Then left.", abbr);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == "He said \"it is done.\"");
  }
  SUBCASE("a custom list can protect more tokens") {
    AbbreviationList custom = AbbreviationList::parse("# comment\napprox.\n");
    CHECK(segment_sentences("It is approx. ten. Done.", custom).size() == 2);
    CHECK(segment_sentences("It is approx. ten. Done.", AbbreviationList{}).size() == 3);
  }
}

TEST_CASE("author name normalization") {
  CHECK(normalize_author_name("Hj\xC3\xB8rland, B.").key == "hjorland,b");
  CHECK(normalize_author_name("Birger Hj\xC3\xB8rland").key == "hjorland,b");
  CHECK(normalize_author_name("Smith J").key == "smith,j");
  CHECK(normalize_author_name("van Raan, Anthony").key == "raan,a");
  CHECK(normalize_author_name("Lipetz").key == "lipetz,");
  CHECK_THROWS_AS(normalize_author_name("123 ."), Error);
  SUBCASE("normalization is idempotent on keys") {
    for (const char* raw : {"Small, H.", "Klavans, Richard", "Garcia-Lopez, M."}) {
      const auto once = normalize_author_name(raw);
      CHECK(normalize_author_name(once.key).key == once.key);
    }
  }
}

TEST_CASE("reference entries: authors, year and venue signals") {
  SUBCASE("conference paper") {
    const auto r = parse_reference_entry(
        "Othman, A., & Sandholm, T. (2010). Decision rules and decision markets. In Proceedings of the 9th "
        "International Conference on Autonomous Agents and Multiagent Systems (pp. 625-632).");
    REQUIRE(r.authors.size() == 2);
    CHECK(r.authors[0].key == "othman,a");
    CHECK(r.authors[1].key == "sandholm,t");
    CHECK(r.year == 2010);
    CHECK(r.venue_signals.count(VenueSignal::proceedings) == 1);
    CHECK(r.ref_id == "othman-sandholm-2010");
  }
  SUBCASE("book with edition and place:publisher") {
    const auto r = parse_reference_entry(
        "Krippendorff, K. (2004). Content analysis: An introduction to its methodology (2nd ed.). CA: Sage.");
    CHECK(r.venue_signals.count(VenueSignal::edition) == 1);
    CHECK(r.venue_signals.count(VenueSignal::publisher) == 1);
    CHECK(r.venue_signals.count(VenueSignal::proceedings) == 0);
  }
  SUBCASE("web resource") {
    const auto r = parse_reference_entry(
        "Priem, J., Taraborelli, D., Groth, P., & Neylon, C. (2010). Altmetrics: A manifesto (v.1.0), Retrieved on "
        "August 1, 2012 at http://altmetrics.org/manifesto");
    CHECK(r.authors.size() == 4);
    CHECK(r.venue_signals.count(VenueSignal::retrieved) == 1);
    CHECK(r.venue_signals.count(VenueSignal::url) == 1);
    CHECK(r.ref_id == "priem-etal-2010");
  }
  SUBCASE("journal article with suffix year") {
    const auto r = parse_reference_entry("Small, H., & Klavans, R. (2011a). Identifying scientific breakthroughs. "
                                         "Scientometrics, 88(2), 579-595.");
    CHECK(r.year == 2011);
    CHECK(r.year_suffix == 'a');
    CHECK(r.venue_signals.count(VenueSignal::volume_issue) == 1);
    CHECK(r.ref_id == "small-klavans-2011a");
  }
  SUBCASE("numeric label") {
    const auto r = parse_reference_entry("[12] Lipetz, B. (1965). Improvement of the selectivity of citation "
                                         "indexes. American Documentation, 16(2), 81-90.");
    CHECK(r.ref_id == "12");
    CHECK(r.numeric_label);
    CHECK(r.authors.front().key == "lipetz,b");
  }
  SUBCASE("missing year is absent, not an error") {
    std::vector<std::string> warnings;
    const auto r = parse_reference_entry("Anonymous pamphlet without a date.", &warnings);
    CHECK_FALSE(r.year.has_value());
  }
}

TEST_CASE("section header normalization table") {
  CHECK(normalize_section_header("Abstract") == Location::abstract);
  CHECK(normalize_section_header("1. Introduction") == Location::introduction);
  CHECK(normalize_section_header("Literature Review") == Location::literature_review);
  CHECK(normalize_section_header("Related Work") == Location::literature_review);
  CHECK(normalize_section_header("III. Methods") == Location::methodology);
  CHECK(normalize_section_header("Materials and Methods") == Location::methodology);
  CHECK(normalize_section_header("Results and Discussion") == Location::results_discussion);
  CHECK(normalize_section_header("Conclusions") == Location::conclusion);
  CHECK(normalize_section_header("Acknowledgements") == Location::other);
  CHECK(normalize_section_header("Results and Conclusions") == Location::other);
}

namespace {

const char* kPlain = R"(#META id: d1
#META title: A title
#META authors: Smith, John; Lee, Ann
#META venue: Scientometrics
#META venue-type: journal
#META year: 2011
#SECTION Introduction
First sentence cites (Kuhn, 1962). Second sentence.

Third sentence in a new paragraph.
#SECTION Acknowledgements
Thanks.
#REFERENCES
Kuhn, T. S. (1962). The structure of scientific revolutions. Chicago: University of Chicago Press.
)";

}  // namespace

TEST_CASE("plain annotated grammar") {
  const Document d = parse_document(kPlain, InputFormat::plain_annotated);
  CHECK(d.metadata.doc_id == "d1");
  REQUIRE(d.metadata.authors.size() == 2);
  CHECK(d.metadata.authors[1].key == "lee,a");
  CHECK(d.metadata.venue_type == VenueType::journal);
  REQUIRE(d.sections.size() == 2);
  CHECK(d.sections[0].sentence_count == 3);
  CHECK(d.sections[1].location == Location::other);
  CHECK(d.sentences[2] == "Third sentence in a new paragraph.");
  REQUIRE(d.references.size() == 1);
  CHECK(d.references[0].ref_id == "kuhn-1962");
  CHECK(d.section_of(3) == 1u);
}

TEST_CASE("plain grammar errors carry kinds and lines") {
  const auto kind_of = [](const std::string& text) {
    try {
      parse_document(text, InputFormat::plain_annotated);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;  // sentinel: no error
  };
  CHECK(kind_of("#META title: x\n#SECTION Intro\nText.\n") == ErrorKind::malformed_input);  // no id
  CHECK(kind_of("#META id: x\n#REFERENCES\n") == ErrorKind::empty_document);
  CHECK(kind_of("#META id: x\n#SECTION A\nT.\n#REFERENCES\n#SECTION B\n") == ErrorKind::malformed_input);
  CHECK(kind_of("#META id: x\n#BOGUS\n") == ErrorKind::malformed_input);
  CHECK(kind_of(std::string("#META id: x\n#SECTION A\nbad \xFF byte\n")) == ErrorKind::malformed_input);
  CHECK(kind_of("#META id: x\n#SECTION A\nT.\n#REFERENCES\n[1] A, B. (2000). X.\n[1] C, D. (2001). Y.\n") ==
        ErrorKind::duplicate_ref_id);
  try {
    parse_document("#META id: x\n#SECTION A\nT.\n#META year: 2000\n", InputFormat::plain_annotated);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("missing authors or references are warnings, not errors") {
  const Document d = parse_document("#META id: x\n#SECTION Intro\nText here.\n", InputFormat::plain_annotated);
  CHECK(d.metadata.metadata_incomplete);
  CHECK(d.references_missing);
  CHECK_FALSE(d.warnings.empty());
}

TEST_CASE("structured XML grammar") {
  const char* xml = R"(<?xml version="1.0"?>
<document id="x1">
  <meta>
    <title>Domain analysis</title>
    <authors><author>Hj&#248;rland, Birger</author></authors>
    <venue type="journal">Journal of Documentation</venue>
    <year>2002</year>
    <domain>K1</domain>
  </meta>
  <body>
    <section header="Introduction">
      <p>One sentence (Kuhn, 1962). Another one.</p>
    </section>
    <section header="Methods"><p><s>Pre-split sentence.</s><s>And another.</s></p></section>
  </body>
  <references>
    <ref>Kuhn, T. S. (1962). The structure of scientific revolutions. Chicago: University of Chicago Press.</ref>
    <ref id="7">Mayr, E. (1997). This is biology. Cambridge, MA: Harvard University Press.</ref>
  </references>
</document>)";
  const Document d = parse_document(xml, InputFormat::structured_xml);
  CHECK(d.metadata.doc_id == "x1");
  CHECK(d.metadata.authors.at(0).key == "hjorland,b");
  CHECK(d.metadata.domain_override == Domain::social);
  CHECK(d.sentences.size() == 4);
  CHECK(d.sections.at(1).location == Location::methodology);
  CHECK(d.references.at(0).ref_id == "kuhn-1962");
  CHECK(d.references.at(1).ref_id == "7");
  CHECK(d.references.at(1).numeric_label);

  CHECK_THROWS_AS(parse_document("<document id='a'><body>", InputFormat::structured_xml), Error);
  std::string deep = "<document id='a'>";
  for (int i = 0; i < 200; ++i) deep += "<x>";
  CHECK_THROWS_AS(parse_document(deep, InputFormat::structured_xml), Error);
}

TEST_CASE("round trip through the canonical XML form preserves content") {
  for (int i = 0; i < 20; ++i) {
    testing::SyntheticShape shape;
    shape.sentences = 12;
    shape.references = 6;
    const Document d = parse_document(testing::synthetic_document(i, shape, 99), InputFormat::plain_annotated);
    const Document back = parse_document(write_structured_xml(d), InputFormat::structured_xml);
    CHECK(same_content(d, back));
    CHECK(write_structured_xml(back) == write_structured_xml(d));
  }
  const Document fixture = parse_document(kPlain, InputFormat::plain_annotated);
  CHECK(same_content(fixture, parse_document(write_structured_xml(fixture), InputFormat::structured_xml)));
}

TEST_CASE("random bytes give a document or a structured error") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string s(rng() % 200, '\0');
    for (auto& c : s) c = static_cast<char>(rng() % 256);
    for (auto fmt : {InputFormat::plain_annotated, InputFormat::structured_xml}) {
      try {
        parse_document(s, fmt);
      } catch (const Error&) {
      }
    }
  }
}
