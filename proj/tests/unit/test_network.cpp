#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cca/ingest.hpp"
#include "cca/network.hpp"
#include "oracles.hpp"

using namespace cca;

namespace {

CoauthorGraph graph_of(std::vector<std::vector<std::string>> lists) { return CoauthorGraph(lists); }

double at(const CoauthorGraph& g, const std::vector<double>& v, const std::string& key) { return v[*g.index_of(key)]; }

// Mean-rank percentile written out directly: (#below + (#equal + 1) / 2) / n.
double percentile_by_count(const std::vector<double>& v, std::size_t i) {
  double below = 0;
  double equal = 0;
  for (double x : v) {
    below += x < v[i] ? 1 : 0;
    equal += x == v[i] ? 1 : 0;
  }
  return (below + (equal + 1) / 2) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("graph construction") {
  SUBCASE("one document is a clique") {
    const auto g = graph_of({{"x", "y", "z"}});
    CHECK(g.size() == 3);
    CHECK(g.edges().size() == 3);
  }
  SUBCASE("two documents form a path") {
    const auto g = graph_of({{"x", "y"}, {"y", "z"}});
    CHECK(g.adjacent("x", "y"));
    CHECK_FALSE(g.adjacent("x", "z"));
  }
  SUBCASE("single author is an isolated node; repeated names make no self-loop") {
    const auto g = graph_of({{"solo"}, {"a", "a"}});
    CHECK(g.size() == 2);
    CHECK(g.edges().empty());
  }
  SUBCASE("order independence") {
    std::vector<DocumentMetadata> corpus(4);
    const char* lists[4][3] = {{"A, B.", "C, D.", "E, F."}, {"C, D.", "G, H.", nullptr},
                               {"I, J.", nullptr, nullptr}, {"E, F.", "I, J.", nullptr}};
    for (int i = 0; i < 4; ++i) {
      for (const char* n : lists[i]) {
        if (n) corpus[i].authors.push_back(normalize_author_name(n));
      }
    }
    const auto reference = build_coauthor_graph(corpus);
    std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) { return a.authors.size() < b.authors.size(); });
    do {
      const auto g = build_coauthor_graph(corpus);
      CHECK(g.edges() == reference.edges());
      CHECK(write_edge_list(g) == write_edge_list(reference));
    } while (std::next_permutation(corpus.begin(), corpus.end(),
                                   [](const auto& a, const auto& b) { return a.authors.size() < b.authors.size(); }));
  }
}

TEST_CASE("centralities on small fixtures") {
  const auto path = graph_of({{"x", "y"}, {"y", "z"}});
  const auto deg = centrality_degree(path);
  CHECK(deg[*path.index_of("y")] == 2);
  CHECK(deg[*path.index_of("x")] == 1);
  const auto h = centrality_harmonic(path);
  CHECK(at(path, h, "y") == doctest::Approx(2.0));
  CHECK(at(path, h, "x") == doctest::Approx(1.5));
  CHECK(at(path, centrality_betweenness(path), "y") == doctest::Approx(1.0));

  const auto triangle = graph_of({{"a", "b", "c"}});
  for (double b : centrality_betweenness(triangle)) CHECK(b == 0.0);

  const auto star = graph_of({{"c", "l1"}, {"c", "l2"}, {"c", "l3"}});
  CHECK(at(star, centrality_betweenness(star), "c") == doctest::Approx(3.0));

  const auto isolated = graph_of({{"x", "y"}, {"lonely"}});
  CHECK(at(isolated, centrality_harmonic(isolated), "lonely") == 0.0);
  CHECK(centrality_degree(isolated)[*isolated.index_of("lonely")] == 0);
}

TEST_CASE("fast centralities match the definitional oracles on random graphs") {
  for (unsigned seed = 0; seed < 60; ++seed) {
    const int n = 1 + static_cast<int>(seed % 8);
    const double p = 0.15 + 0.1 * (seed % 7);
    const auto g = testing::random_graph(n, p, seed);
    const auto fast_b = centrality_betweenness(g);
    const auto slow_b = testing::betweenness_by_enumeration(g);
    const auto fast_h = centrality_harmonic(g);
    const auto slow_h = testing::harmonic_by_definition(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(fast_b[i] - slow_b[i]) <= 1e-9);
      CHECK(fast_h[i] == slow_h[i]);
    }
  }
}

TEST_CASE("percentile ranks and composite scores") {
  SUBCASE("all tied gives 0.5") {
    const auto g = graph_of({{"a", "b", "c", "d"}});
    for (const auto& [k, s] : capital_score(g)) CHECK(s.composite == doctest::Approx(0.5));
  }
  SUBCASE("single author gives 0.5") {
    const auto g = graph_of({{"only"}});
    CHECK(capital_score(g).at("only").composite == doctest::Approx(0.5));
  }
  SUBCASE("hand-ranked five-author fixture") {
    // Path a-b-c-e plus pendant d on b: b dominates every metric.
    const auto g = graph_of({{"a", "b"}, {"b", "c"}, {"b", "d"}, {"c", "e"}});
    const auto scores = capital_score(g);
    CHECK(scores.at("b").composite == doctest::Approx(1.0));
    // e: degree 1 (tied with a, d), lowest closeness, zero betweenness (tied).
    const std::vector<double> deg = {1, 3, 2, 1, 1};
    const std::vector<double> clo = {1 + 0.5 + 0.5 + 1.0 / 3, 3 + 0.5, 2 + 0.5 + 0.5, 1 + 0.5 + 0.5 + 1.0 / 3,
                                     1 + 0.5 + 1.0 / 3 + 1.0 / 3};
    const std::vector<double> btw = {0, 5, 3, 0, 0};
    for (std::size_t i = 0; i < 5; ++i) {
      const double expected =
          (percentile_by_count(deg, i) + percentile_by_count(clo, i) + percentile_by_count(btw, i)) / 3.0;
      CHECK(scores.at(g.nodes()[i]).composite == doctest::Approx(expected));
    }
  }
  SUBCASE("strict maximum and minimum on four nodes") {
    const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
    const auto p = percentile_ranks(v);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.25));
  }
  SUBCASE("composite is invariant under monotone rescaling") {
    const auto g = testing::random_graph(8, 0.35, 11);
    const auto deg = centrality_degree(g);
    auto h = centrality_harmonic(g);
    auto b = centrality_betweenness(g);
    const auto base = capital_score(g, deg, h, b);
    for (auto& x : h) x = std::exp(3 * x) + 7;
    for (auto& x : b) x = x * x * x + 0.5;
    const auto scaled = capital_score(g, deg, h, b);
    for (const auto& [k, s] : base) CHECK(scaled.at(k).composite == doctest::Approx(s.composite));
  }
  SUBCASE("composites stay in [0, 1]") {
    for (unsigned seed = 0; seed < 30; ++seed) {
      for (const auto& [k, s] : capital_score(testing::random_graph(8, 0.3, seed))) {
        CHECK(s.composite >= 0.0);
        CHECK(s.composite <= 1.0);
      }
    }
  }
}

TEST_CASE("relation code") {
  // Six authors: hub h with leaves a, b, c; d hangs off c; e writes alone.
  const auto g = graph_of({{"h", "a"}, {"h", "b"}, {"h", "c"}, {"c", "d"}, {"e"}});
  const auto scores = capital_score(g);
  const std::vector<std::string> e = {"e"};
  const std::vector<std::string> h = {"h"};

  SUBCASE("self-citation and coauthor citation, as in the worked pair") {
    const std::vector<std::string> citing = {"hjorland,b"};
    const std::vector<std::string> alone = {"hjorland,b"};
    const std::vector<std::string> pair = {"hjorland,b", "albrechtsen,h"};
    CHECK(code_relation(citing, alone, g, scores, 0.2).label() == "C1");
    CHECK(code_relation(citing, pair, g, scores, 0.2).label() == "C2");
  }
  SUBCASE("coauthorship edge gives parallel") {
    const std::vector<std::string> a = {"a"};
    CHECK(code_relation(a, h, g, scores, 0.2).label() == "C2");
    CHECK(code_relation(a, h, g, scores, 0.2).rules.at(0) == "C:coauthor-edge");
  }
  SUBCASE("large capital gap gives hierarchical") {
    const double gap = scores.at("h").composite - scores.at("e").composite;
    REQUIRE(gap >= 0.2);
    CHECK(code_relation(e, h, g, scores, 0.2).label() == "C3");
    CHECK(code_relation(e, h, g, scores, std::min(1.0, gap + 0.01)).label() == "C2");
  }
  SUBCASE("small gap defaults to parallel") {
    const std::vector<std::string> a = {"a"};
    const std::vector<std::string> b = {"b"};
    const Code c = code_relation(a, b, g, scores, 0.2);
    CHECK(c.label() == "C2");
    CHECK(c.payload == "default-assigned");
  }
  SUBCASE("missing authors") {
    CHECK_FALSE(code_relation({}, h, g, scores, 0.2).codable());
    CHECK(code_relation(e, {}, g, scores, 0.2).reason == "missing-authors");
  }
}
