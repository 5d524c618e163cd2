#include "beliefflow/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "beliefflow/errors.hpp"
#include "beliefflow/rng.hpp"

namespace beliefflow {

namespace {

// Triangles per node via edge-wise sorted-neighbor intersection.
std::vector<long long> triangle_counts(const std::vector<std::vector<int>>& adj,
                                       const std::vector<std::pair<int, int>>& edges) {
  std::vector<long long> tri(adj.size(), 0);
  for (const auto& [u, v] : edges) {
    const auto& a = adj[u];
    const auto& b = adj[v];
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) {
        ++i;
      } else if (a[i] > b[j]) {
        ++j;
      } else {
        ++tri[a[i]];  // common neighbor closes a triangle; u and v get
        ++i;          // their shares when their own edges are visited
        ++j;
      }
    }
  }
  // Each triangle {x,y,z} was seen once per edge, crediting the third node,
  // so tri[x] already counts triangles through x exactly once per pair of
  // its neighbors that are connected.
  return tri;
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw ConfigError("node count must be non-negative");
  for (auto& [u, v] : edges) {
    if (u == v) throw ConfigError("self-loop at node " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ConfigError("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.adj_.assign(n, {});
  for (const auto& [u, v] : g.edges_) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());

  g.degree_.resize(n);
  for (int i = 0; i < n; ++i) g.degree_[i] = static_cast<int>(g.adj_[i].size());

  const auto tri = triangle_counts(g.adj_, g.edges_);
  g.clustering_.resize(n);
  for (int i = 0; i < n; ++i) {
    const long long d = g.degree_[i];
    g.clustering_[i] =
        d <= 1 ? 0.0 : 2.0 * static_cast<double>(tri[i]) / (d * (d - 1));
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return false;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const int target = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(a.begin(), a.end(), target);
}

double Graph::average_clustering() const {
  if (n_ == 0) return 0.0;
  double sum = 0.0;
  for (double c : clustering_) sum += c;
  return sum / n_;
}

AdjustedAdjacency::AdjustedAdjacency(const Graph& g) : n_(g.node_count()) {
  const auto& deg = g.degree_list();
  if (n_ < kDenseNodeLimit) {
    dense_.emplace(Eigen::MatrixXd::Zero(n_, n_));
    for (const auto& [u, v] : g.edges()) {
      (*dense_)(u, v) = 1.0 / (1.0 + deg[v]);
      (*dense_)(v, u) = 1.0 / (1.0 + deg[u]);
    }
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * g.edges().size());
    for (const auto& [u, v] : g.edges()) {
      trips.emplace_back(u, v, 1.0 / (1.0 + deg[v]));
      trips.emplace_back(v, u, 1.0 / (1.0 + deg[u]));
    }
    sparse_.emplace(n_, n_);
    sparse_->setFromTriplets(trips.begin(), trips.end());
  }
}

const Eigen::MatrixXd& AdjustedAdjacency::dense() const {
  if (!dense_) throw Error("adjusted adjacency is stored sparse");
  return *dense_;
}

const Eigen::SparseMatrix<double>& AdjustedAdjacency::sparse() const {
  if (!sparse_) throw Error("adjusted adjacency is stored dense");
  return *sparse_;
}

std::vector<double> AdjustedAdjacency::column_sums() const {
  std::vector<double> sums(n_, 0.0);
  if (dense_) {
    for (int j = 0; j < n_; ++j) sums[j] = dense_->col(j).sum();
  } else {
    for (int j = 0; j < n_; ++j) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(*sparse_, j); it; ++it)
        sums[j] += it.value();
    }
  }
  return sums;
}

AdjustedAdjacency adjusted_adjacency(const Graph& g) {
  return AdjustedAdjacency(g);
}

ParsedEdgeList parse_edge_list(std::istream& in) {
  std::vector<std::pair<long long, long long>> raw;
  long skipped = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;  // blank
    if (line[pos] == '#') continue;          // comment
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u >> v))
      throw ParseError("expected two integer node ids", lineno);
    std::string trailing;
    if (ls >> trailing)
      throw ParseError("unexpected trailing token '" + trailing + "'", lineno);
    if (u == v) {
      ++skipped;
      continue;
    }
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw ConfigError("edge list is empty");

  std::vector<long long> ids;
  ids.reserve(2 * raw.size());
  for (const auto& [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  ParsedEdgeList out;
  out.index_to_id = ids;
  out.skipped_self_loops = skipped;
  out.id_to_index.reserve(ids.size());
  for (int i = 0; i < static_cast<int>(ids.size()); ++i)
    out.id_to_index.emplace(ids[i], i);

  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (const auto& [u, v] : raw)
    edges.emplace_back(out.id_to_index.at(u), out.id_to_index.at(v));
  out.graph = Graph::from_edges(static_cast<int>(ids.size()), std::move(edges));
  return out;
}

void serialize_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  return parse_edge_list(in).graph;
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  serialize_edge_list(g, out);
}

Graph snowball_sample(const Graph& g, int target_size, std::uint64_t seed) {
  if (target_size < 1) throw ConfigError("snowball target size must be >= 1");
  const int n = g.node_count();
  const int want = std::min(target_size, n);

  Rng rng(seed);
  std::vector<char> visited(n, 0);
  std::vector<int> picked;
  picked.reserve(want);

  std::vector<int> queue;
  std::size_t head = 0;

  auto visit = [&](int v) {
    visited[v] = 1;
    picked.push_back(v);
    queue.push_back(v);
  };

  auto random_unvisited = [&]() {
    std::uint64_t skip = rng.next_below(static_cast<std::uint64_t>(n - picked.size()));
    for (int v = 0; v < n; ++v) {
      if (visited[v]) continue;
      if (skip == 0) return v;
      --skip;
    }
    return -1;  // unreachable: picked.size() < n
  };

  visit(random_unvisited());
  while (static_cast<int>(picked.size()) < want) {
    if (head == queue.size()) {
      visit(random_unvisited());  // component exhausted: restart
      continue;
    }
    int v = queue[head++];
    std::vector<int> frontier;
    for (int u : g.neighbors(v))
      if (!visited[u]) frontier.push_back(u);
    rng.shuffle(frontier);
    for (int u : frontier) {
      if (static_cast<int>(picked.size()) == want) break;
      visit(u);
    }
  }

  // Remap picked nodes in ascending original-index order.
  std::sort(picked.begin(), picked.end());
  std::vector<int> index_of(n, -1);
  for (int i = 0; i < want; ++i) index_of[picked[i]] = i;

  std::vector<std::pair<int, int>> edges;
  for (int v : picked) {
    for (int u : g.neighbors(v)) {
      if (u > v && index_of[u] >= 0)
        edges.emplace_back(index_of[v], index_of[u]);
    }
  }
  return Graph::from_edges(want, std::move(edges));
}

}  // namespace beliefflow
