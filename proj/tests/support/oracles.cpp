#include "oracles.hpp"

#include <functional>
#include <random>
#include <string>

namespace cca::testing {

std::vector<std::vector<int>> all_pairs_distances(const CoauthorGraph& g) {
  const std::size_t n = g.size();
  constexpr int kInf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (int j : g.neighbors(i)) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  for (auto& row : d) {
    for (auto& v : row) {
      if (v >= kInf) v = -1;
    }
  }
  return d;
}

std::vector<double> harmonic_by_definition(const CoauthorGraph& g) {
  const auto d = all_pairs_distances(g);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (a != b && d[a][b] > 0) out[a] += 1.0 / d[a][b];
    }
  }
  return out;
}

std::vector<double> betweenness_by_enumeration(const CoauthorGraph& g) {
  const std::size_t n = g.size();
  const auto d = all_pairs_distances(g);
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] < 2) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> path{s};
      std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        for (int w : g.neighbors(v)) {
          if (d[s][w] == d[s][v] + 1 && d[w][t] == d[v][t] - 1) {
            path.push_back(static_cast<std::size_t>(w));
            walk(static_cast<std::size_t>(w));
            path.pop_back();
          }
        }
      };
      walk(s);
      std::vector<int> through(n, 0);
      for (const auto& p : paths) {
        for (std::size_t k = 1; k + 1 < p.size(); ++k) ++through[p[k]];
      }
      for (std::size_t v = 0; v < n; ++v) out[v] += static_cast<double>(through[v]) / static_cast<double>(paths.size());
    }
  }
  return out;
}

CoauthorGraph random_graph(int n, double p, unsigned seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution edge(p);
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < n; ++i) {
    lists.push_back({"n" + std::to_string(i)});
    for (int j = i + 1; j < n; ++j) {
      if (edge(rng)) lists.push_back({"n" + std::to_string(i), "n" + std::to_string(j)});
    }
  }
  return CoauthorGraph(lists);
}

}  // namespace cca::testing
