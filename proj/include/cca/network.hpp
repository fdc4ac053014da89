#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cca/codebook.hpp"
#include "cca/document.hpp"

// Coauthorship graph, centralities and the relation code (C).
namespace cca {

/// Undirected simple graph over author keys. Nodes are kept sorted so that
/// indices, and everything derived from them, do not depend on input order.
class CoauthorGraph {
 public:
  CoauthorGraph() = default;
  /// Each list becomes a clique; a single-author list adds an isolated node.
  explicit CoauthorGraph(const std::vector<std::vector<std::string>>& author_lists);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<int>& neighbors(std::size_t i) const { return adj_[i]; }
  std::optional<std::size_t> index_of(const std::string& key) const;
  bool contains(const std::string& key) const { return index_of(key).has_value(); }
  bool adjacent(const std::string& a, const std::string& b) const;
  /// Sorted (a < b) pairs.
  std::vector<std::pair<std::string, std::string>> edges() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<int>> adj_;
};

CoauthorGraph build_coauthor_graph(std::span<const DocumentMetadata> corpus);

/// Tab-separated "a<TAB>b" lines in sorted order.
std::string write_edge_list(const CoauthorGraph& g);

// Per-node results are indexed like g.nodes().
std::vector<int> centrality_degree(const CoauthorGraph& g);
/// Sum of 1/d(a,b) over reachable b != a.
std::vector<double> centrality_harmonic(const CoauthorGraph& g);
/// Brandes accumulation, halved for the undirected case.
std::vector<double> centrality_betweenness(const CoauthorGraph& g);

struct CapitalScore {
  std::string author;
  int degree = 0;
  double harmonic_closeness = 0.0;
  double betweenness = 0.0;
  double composite = 0.0;
};

/// Rank percentile of each value: mean 1-based rank of its tie group over n.
/// Values within 1e-9 relative are ties. A constant vector (including
/// n == 1) maps to 0.5 everywhere.
std::vector<double> percentile_ranks(std::span<const double> values);

std::map<std::string, CapitalScore> capital_score(const CoauthorGraph& g, std::span<const int> degree,
                                                  std::span<const double> harmonic,
                                                  std::span<const double> betweenness);
std::map<std::string, CapitalScore> capital_score(const CoauthorGraph& g);

/// C. Self-citation when every cited author is a citing author; parallel when
/// the sets share an author or a coauthorship edge; hierarchical when the
/// best cited composite exceeds the best citing composite by at least delta;
/// parallel otherwise. Either set empty gives uncodable("missing-authors").
Code code_relation(std::span<const std::string> citing_authors, std::span<const std::string> cited_authors,
                   const CoauthorGraph& g, const std::map<std::string, CapitalScore>& scores, double delta);

}  // namespace cca
