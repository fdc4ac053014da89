#include "cca/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cca {

CoauthorGraph::CoauthorGraph(const std::vector<std::vector<std::string>>& author_lists) {
  std::set<std::string> keys;
  for (const auto& list : author_lists) keys.insert(list.begin(), list.end());
  nodes_.assign(keys.begin(), keys.end());
  std::vector<std::set<int>> adj(nodes_.size());
  for (const auto& list : author_lists) {
    std::vector<int> ids;
    for (const auto& k : list) ids.push_back(static_cast<int>(*index_of(k)));
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (ids[a] == ids[b]) continue;
        adj[ids[a]].insert(ids[b]);
        adj[ids[b]].insert(ids[a]);
      }
    }
  }
  adj_.reserve(adj.size());
  for (const auto& s : adj) adj_.emplace_back(s.begin(), s.end());
}

std::optional<std::size_t> CoauthorGraph::index_of(const std::string& key) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), key);
  if (it == nodes_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool CoauthorGraph::adjacent(const std::string& a, const std::string& b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (!ia || !ib) return false;
  const auto& n = adj_[*ia];
  return std::binary_search(n.begin(), n.end(), static_cast<int>(*ib));
}

std::vector<std::pair<std::string, std::string>> CoauthorGraph::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t a = 0; a < adj_.size(); ++a) {
    for (int b : adj_[a]) {
      if (static_cast<std::size_t>(b) > a) out.emplace_back(nodes_[a], nodes_[b]);
    }
  }
  return out;
}

CoauthorGraph build_coauthor_graph(std::span<const DocumentMetadata> corpus) {
  std::vector<std::vector<std::string>> lists;
  lists.reserve(corpus.size());
  for (const auto& meta : corpus) {
    std::vector<std::string> keys;
    for (const auto& a : meta.authors) keys.push_back(a.key);
    lists.push_back(std::move(keys));
  }
  return CoauthorGraph(lists);
}

std::string write_edge_list(const CoauthorGraph& g) {
  std::ostringstream out;
  for (const auto& [a, b] : g.edges()) out << a << '\t' << b << '\n';
  return out.str();
}

std::vector<int> centrality_degree(const CoauthorGraph& g) {
  std::vector<int> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = static_cast<int>(g.neighbors(i).size());
  return out;
}

namespace {

std::vector<int> bfs_distances(const CoauthorGraph& g, std::size_t source) {
  std::vector<int> dist(g.size(), -1);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(static_cast<std::size_t>(w));
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> centrality_harmonic(const CoauthorGraph& g) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t a = 0; a < g.size(); ++a) {
    const auto dist = bfs_distances(g, a);
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (b != a && dist[b] > 0) out[a] += 1.0 / dist[b];
    }
  }
  return out;
}

std::vector<double> centrality_betweenness(const CoauthorGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> cb(n, 0.0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<int>> pred(n);
  std::vector<double> sigma(n);
  std::vector<int> dist(n);
  std::vector<double> delta(n);
  for (std::size_t s = 0; s < n; ++s) {
    stack.clear();
    for (std::size_t v = 0; v < n; ++v) {
      pred[v].clear();
      sigma[v] = 0.0;
      dist[v] = -1;
      delta[v] = 0.0;
    }
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      stack.push_back(v);
      for (int w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(static_cast<std::size_t>(w));
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(static_cast<int>(v));
        }
      }
    }
    while (!stack.empty()) {
      const std::size_t w = stack.back();
      stack.pop_back();
      for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  for (auto& v : cb) v /= 2.0;
  return cb;
}

std::vector<double> percentile_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.5);
  if (n == 0) return out;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  // Centralities summed in different orders can differ in the last bits;
  // such values are ties.
  const auto tied = [](double a, double b) { return std::abs(b - a) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
  if (tied(values[order.front()], values[order.back()])) return out;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && tied(values[order[i]], values[order[j + 1]])) ++j;
    // 1-based ranks i+1 .. j+1 share their mean.
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = mean_rank / static_cast<double>(n);
    i = j + 1;
  }
  return out;
}

std::map<std::string, CapitalScore> capital_score(const CoauthorGraph& g, std::span<const int> degree,
                                                  std::span<const double> harmonic,
                                                  std::span<const double> betweenness) {
  if (degree.size() != g.size() || harmonic.size() != g.size() || betweenness.size() != g.size()) {
    throw std::invalid_argument("centrality vectors do not match the graph");
  }
  const std::vector<double> deg(degree.begin(), degree.end());
  const auto pd = percentile_ranks(deg);
  const auto ph = percentile_ranks(harmonic);
  const auto pb = percentile_ranks(betweenness);
  std::map<std::string, CapitalScore> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CapitalScore s;
    s.author = g.nodes()[i];
    s.degree = degree[i];
    s.harmonic_closeness = harmonic[i];
    s.betweenness = betweenness[i];
    s.composite = (pd[i] + ph[i] + pb[i]) / 3.0;
    out.emplace(s.author, s);
  }
  return out;
}

std::map<std::string, CapitalScore> capital_score(const CoauthorGraph& g) {
  return capital_score(g, centrality_degree(g), centrality_harmonic(g), centrality_betweenness(g));
}

namespace {

std::optional<double> best_composite(std::span<const std::string> authors,
                                     const std::map<std::string, CapitalScore>& scores) {
  std::optional<double> best;
  for (const auto& a : authors) {
    const auto it = scores.find(a);
    if (it != scores.end() && (!best || it->second.composite > *best)) best = it->second.composite;
  }
  return best;
}

}  // namespace

Code code_relation(std::span<const std::string> citing_authors, std::span<const std::string> cited_authors,
                   const CoauthorGraph& g, const std::map<std::string, CapitalScore>& scores, double delta) {
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta must lie in [0, 1]");
  if (citing_authors.empty() || cited_authors.empty()) {
    return Code::uncodable(Category::C, "missing-authors", "C:missing-authors");
  }
  const auto is_citing = [&](const std::string& a) {
    return std::find(citing_authors.begin(), citing_authors.end(), a) != citing_authors.end();
  };
  if (std::all_of(cited_authors.begin(), cited_authors.end(), is_citing)) {
    return Code::of(Category::C, Relation::reciprocal, "C:self-citation");
  }
  for (const auto& cited : cited_authors) {
    if (is_citing(cited)) return Code::of(Category::C, Relation::parallel, "C:shared-author");
    for (const auto& citing : citing_authors) {
      if (g.adjacent(citing, cited)) return Code::of(Category::C, Relation::parallel, "C:coauthor-edge");
    }
  }
  const auto cited_best = best_composite(cited_authors, scores);
  const auto citing_best = best_composite(citing_authors, scores);
  if (cited_best && citing_best && *cited_best - *citing_best >= delta) {
    return Code::of(Category::C, Relation::hierarchical, "C:capital-gap");
  }
  Code c = Code::of(Category::C, Relation::parallel, "C:default");
  c.payload = "default-assigned";
  return c;
}

}  // namespace cca
