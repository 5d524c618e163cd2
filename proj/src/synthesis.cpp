#include "beliefflow/synthesis.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "beliefflow/errors.hpp"
#include "beliefflow/rng.hpp"

namespace beliefflow {

void SynthesisConfig::validate() const {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (n < m + 1)
    throw ConfigError("n must be >= m+1 (got n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) + ")");
}

namespace {

std::vector<std::pair<int, int>> complete_graph_edges(int k) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
  return edges;
}

}  // namespace

Graph synthesize_ba(const SynthesisConfig& config) {
  config.validate();
  const int n = config.n;
  const int m = config.m;
  Rng rng(config.seed);

  auto edges = complete_graph_edges(m + 1);

  // Degree-proportional sampling via the repeated-node list: node i appears
  // d_i times. Duplicate draws are rejected, which is exactly sampling
  // without replacement with renormalized weights. The list is extended only
  // after the arriving node finishes, so all m draws see the same snapshot.
  std::vector<int> degree_pool;
  degree_pool.reserve(2 * (edges.size() + static_cast<std::size_t>(n) * m));
  for (const auto& [u, v] : edges) {
    degree_pool.push_back(u);
    degree_pool.push_back(v);
  }

  std::vector<int> targets;
  targets.reserve(m);
  for (int v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      int candidate = degree_pool[rng.next_below(degree_pool.size())];
      if (std::find(targets.begin(), targets.end(), candidate) == targets.end())
        targets.push_back(candidate);
    }
    for (int t : targets) edges.emplace_back(t, v);
    for (int t : targets) {
      degree_pool.push_back(t);
      degree_pool.push_back(v);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph synthesize_gmg(const SynthesisConfig& config) {
  config.validate();
  const int n = config.n;
  const int m = config.m;
  const double alpha = config.alpha;
  Rng rng(config.seed);

  // Growth state; gamma is kept current per edge so that triangles formed by
  // an arriving node's earlier edges influence its later draws.
  std::vector<std::unordered_set<int>> adj(n);
  std::vector<int> degree(n, 0);
  std::vector<long long> triangles(n, 0);
  std::vector<double> gamma(n, 0.0);
  std::vector<std::pair<int, int>> edges;

  auto refresh_gamma = [&](int v) {
    const long long d = degree[v];
    gamma[v] = d <= 1 ? 0.0
                      : 2.0 * static_cast<double>(triangles[v]) / (d * (d - 1));
  };

  auto insert_edge = [&](int u, int v) {
    // Common neighbors before insertion close new triangles.
    const auto& small = adj[u].size() <= adj[v].size() ? adj[u] : adj[v];
    const auto& large = adj[u].size() <= adj[v].size() ? adj[v] : adj[u];
    long long common = 0;
    for (int w : small) {
      if (large.count(w)) {
        ++common;
        ++triangles[w];
        refresh_gamma(w);
      }
    }
    adj[u].insert(v);
    adj[v].insert(u);
    ++degree[u];
    ++degree[v];
    triangles[u] += common;
    triangles[v] += common;
    refresh_gamma(u);
    refresh_gamma(v);
    edges.emplace_back(u, v);
  };

  for (const auto& [u, v] : complete_graph_edges(m + 1)) insert_edge(u, v);

  // Same growth skeleton as synthesize_ba: the degree factor is snapshotted
  // when a node arrives, while gamma stays current per edge (the arriving
  // node's earlier edges can close triangles at existing nodes).
  std::vector<double> weights(n, 0.0);
  std::vector<int> degree_snapshot;
  for (int v = m + 1; v < n; ++v) {
    degree_snapshot.assign(degree.begin(), degree.begin() + v);
    std::vector<int> chosen;
    for (int e = 0; e < m; ++e) {
      double total = 0.0;
      for (int i = 0; i < v; ++i) {
        weights[i] = degree_snapshot[i] * std::pow(1.0 + gamma[i], alpha);
        total += weights[i];
      }
      for (int c : chosen) {
        total -= weights[c];
        weights[c] = 0.0;
      }
      int t = rng.weighted_pick({weights.data(), static_cast<std::size_t>(v)},
                                total);
      insert_edge(t, v);
      chosen.push_back(t);
    }
  }
  Graph out = Graph::from_edges(n, std::move(edges));
  for (int i = 0; i < n; ++i)
    assert(std::abs(gamma[i] - out.clustering_list()[i]) < 1e-9);
  return out;
}

}  // namespace beliefflow
