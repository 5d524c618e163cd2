#pragma once

#include <utility>
#include <vector>

#include "beliefflow/graph.hpp"
#include "beliefflow/dynamics.hpp"
#include "beliefflow/rng.hpp"

namespace testutil {

inline beliefflow::Graph make_graph(int n,
                                    std::vector<std::pair<int, int>> edges) {
  return beliefflow::Graph::from_edges(n, std::move(edges));
}

inline beliefflow::Graph triangle() { return make_graph(3, {{0, 1}, {0, 2}, {1, 2}}); }

inline beliefflow::Graph path3() { return make_graph(3, {{0, 1}, {1, 2}}); }

/// Erdos-Renyi G(n, p), seeded.
inline beliefflow::Graph gnp(int n, double p, std::uint64_t seed) {
  beliefflow::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_double() < p) edges.emplace_back(i, j);
  return beliefflow::Graph::from_edges(n, std::move(edges));
}

/// G(n, p) with isolated nodes wired to a random other node, so every node
/// has degree >= 1.
inline beliefflow::Graph gnp_min_degree_one(int n, double p,
                                            std::uint64_t seed) {
  beliefflow::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.next_double() < p) {
        edges.emplace_back(i, j);
        ++degree[i];
        ++degree[j];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (degree[i] == 0) {
      int j = static_cast<int>(rng.next_below(n - 1));
      if (j >= i) ++j;
      edges.emplace_back(std::min(i, j), std::max(i, j));
      ++degree[i];
      ++degree[j];
    }
  }
  return beliefflow::Graph::from_edges(n, std::move(edges));
}

inline std::vector<double> random_beliefs(int n, beliefflow::Rng& rng) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(-1.0, 1.0);
  return w;
}

/// Random control strategy over up to max_c nodes with beliefs in [-1, 1].
inline beliefflow::ControlStrategy random_strategy(int n, int max_c,
                                                   beliefflow::Rng& rng) {
  beliefflow::ControlStrategy c;
  const int count = max_c == 0 ? 0 : static_cast<int>(rng.next_below(max_c + 1));
  std::vector<int> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = i;
  rng.shuffle(nodes);
  for (int k = 0; k < count; ++k) {
    c.control_set.push_back(nodes[k]);
    c.controlled_beliefs.push_back(rng.uniform(-1.0, 1.0));
  }
  return c;
}

}  // namespace testutil
