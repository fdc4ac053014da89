#include <doctest.h>

#include <algorithm>

#include "cca/error.hpp"
#include "cca/ingest.hpp"
#include "cca/syntactic.hpp"

using namespace cca;

namespace {

std::string a_code(const char* ref) { return code_document_type(parse_reference_entry(ref)).label(); }

Code f_code(const std::string& sentence, std::size_t which = 0) {
  const auto refs = std::vector<ReferenceEntry>{parse_reference_entry("Smith, J. (2011). T. J, 1(1), 1-2.")};
  const auto cits = detect_citations(sentence, refs);
  return code_style(cits.at(which), sentence);
}

}  // namespace

TEST_CASE("document type from reference strings") {
  CHECK(a_code("Othman, A., & Sandholm, T. (2010). Decision rules and decision markets. In Proceedings of the 9th "
               "International Conference on Autonomous Agents and Multiagent Systems (pp. 625-632).") == "A2");
  CHECK(a_code("Krippendorff, K. (2004). Content analysis: An introduction to its methodology (2nd ed.). CA: Sage.") ==
        "A3");
  CHECK(a_code("Priem, J., Taraborelli, D., Groth, P., & Neylon, C. (2010). Altmetrics: A manifesto (v.1.0), "
               "Retrieved on August 1, 2012 at http://altmetrics.org/manifesto") == "A5");
  CHECK(a_code("Small, H. (1978). Cited documents as concept symbols. Social Studies of Science, 8(3), 327-340.") ==
        "A1");
  CHECK(a_code("Pew Research Center. (1998). Technical report on Internet use. Washington.") == "A4");
  CHECK(a_code("Someone, A. (2001). Something.") == "A6");
}

TEST_CASE("document type precedence ignores signal insertion order") {
  const std::vector<VenueSignal> all = {VenueSignal::proceedings, VenueSignal::volume_issue, VenueSignal::publisher,
                                        VenueSignal::edition,     VenueSignal::editor,       VenueSignal::report,
                                        VenueSignal::news,        VenueSignal::url,          VenueSignal::retrieved};
  for (unsigned mask = 1; mask < (1u << all.size()); mask += 7) {
    std::vector<VenueSignal> chosen;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask & (1u << i)) chosen.push_back(all[i]);
    }
    ReferenceEntry forward;
    ReferenceEntry backward;
    for (auto s : chosen) forward.venue_signals.insert(s);
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) backward.venue_signals.insert(*it);
    CHECK(code_document_type(forward) == code_document_type(backward));
  }
}

TEST_CASE("citing document type") {
  DocumentMetadata m;
  m.venue_type = VenueType::conference;
  CHECK(code_document_type(m).label() == "G2");
  m.venue_type.reset();
  m.venue_name = "Journal of Documentation";
  CHECK(code_document_type(m).label() == "G1");
  m.venue_name = "";
  CHECK(code_document_type(m).label() == "G6");
}

TEST_CASE("authorship") {
  const std::vector<AuthorName> one = {normalize_author_name("Lipetz, B.")};
  const std::vector<AuthorName> two = {normalize_author_name("Small, H."), normalize_author_name("Klavans, R.")};
  CHECK(code_authorship(one, Category::B).label() == "B1");
  CHECK(code_authorship(two, Category::B).label() == "B2");
  CHECK(code_authorship(two, Category::H).label() == "H2");
  const Code none = code_authorship({}, Category::B);
  CHECK_FALSE(none.codable());
  CHECK(none.reason == "missing-authors");
}

TEST_CASE("location carries the raw header for D7") {
  Section s;
  s.raw_header = "Literature Review";
  s.location = normalize_section_header(s.raw_header);
  CHECK(code_location(s).label() == "D3");
  s.raw_header = "Related Work";
  s.location = normalize_section_header(s.raw_header);
  CHECK(code_location(s).label() == "D3");
  s.raw_header = "Acknowledgements";
  s.location = normalize_section_header(s.raw_header);
  const Code d7 = code_location(s);
  CHECK(d7.label() == "D7");
  CHECK(d7.payload == "Acknowledgements");
}

TEST_CASE("frequency boundaries") {
  CHECK(code_frequency(1).label() == "E1");
  CHECK(code_frequency(2).label() == "E2");
  CHECK(code_frequency(3).label() == "E2");
  CHECK(code_frequency(4).label() == "E2");
  CHECK(code_frequency(5).label() == "E3");
  CHECK(code_frequency(17).label() == "E3");
  CHECK_THROWS_AS(code_frequency(0), Error);
  CHECK_THROWS_AS(code_frequency(-3), Error);
  int previous = 0;
  for (int n = 1; n <= 200; ++n) {
    const int v = code_frequency(n).value;
    CHECK(v >= previous);
    if (v != previous && n > 1) CHECK((n == 2 || n == 5));
    previous = v;
  }
}

TEST_CASE("style of mentioning") {
  CHECK(f_code("Some studies have proposed this (e.g., Smith, 2011).").label() == "F1");
  CHECK(f_code("Some studies have proposed this (Smith, 2011).").label() == "F1");
  CHECK(f_code("Smith (2011) states that contexts matter.").label() == "F2");
  CHECK(f_code("It is \"a social process of acknowledgement\" (Smith, 2011, P. xx).").label() == "F3");
  CHECK(f_code("It is \"a social process of acknowledgement\" (Smith, 2011).").label() == "F3");
  CHECK(f_code("Smith (2011, p. 4) states that.").label() == "F3");
  CHECK(f_code("For instance \"one two\" (Smith, 2011).").label() == "F1");  // quote too short
  SUBCASE("a quote goes to the nearest marker only") {
    const std::string s = "Smith (2011) disagrees with Lee, who wrote \"markets are never wrong\" (Lee, 2000).";
    const auto refs = std::vector<ReferenceEntry>{parse_reference_entry("Smith, J. (2011). T. J, 1(1), 1-2."),
                                                  parse_reference_entry("Lee, A. (2000). U. J, 1(1), 1-2.")};
    const auto cits = detect_citations(s, refs);
    REQUIRE(cits.size() == 2);
    CHECK(code_style(cits[0], s).label() == "F2");
    CHECK(code_style(cits[1], s).label() == "F3");
  }
}
