#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace beliefflow {

/// Undirected simple graph, immutable after construction. Node indices are
/// dense 0..n-1. Degree and local clustering coefficient lists are computed
/// once at construction, so instances are safely shareable across threads.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. Edges are normalized to u < v, sorted and
  /// deduplicated. Throws ConfigError on self-loops or out-of-range indices.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Sorted list of (u, v) pairs with u < v.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Neighbor indices of v, ascending.
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }

  bool has_edge(int u, int v) const;

  const std::vector<int>& degree_list() const { return degree_; }

  /// Local clustering coefficients gamma_i = 2 T_i / (d_i (d_i - 1)),
  /// with gamma_i = 0 whenever d_i <= 1.
  const std::vector<double>& clustering_list() const { return clustering_; }

  double average_clustering() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> degree_;
  std::vector<double> clustering_;
};

/// Matrix A* with entries A_ij / (1 + d_j); column j sums to d_j / (1 + d_j),
/// which is the contraction bound that makes the belief series converge.
/// Dense storage up to kDenseNodeLimit nodes, sparse above.
class AdjustedAdjacency {
 public:
  static constexpr int kDenseNodeLimit = 2000;

  explicit AdjustedAdjacency(const Graph& g);

  int size() const { return n_; }
  bool is_dense() const { return dense_.has_value(); }
  const Eigen::MatrixXd& dense() const;
  const Eigen::SparseMatrix<double>& sparse() const;

  std::vector<double> column_sums() const;

 private:
  int n_ = 0;
  std::optional<Eigen::MatrixXd> dense_;
  std::optional<Eigen::SparseMatrix<double>> sparse_;
};

AdjustedAdjacency adjusted_adjacency(const Graph& g);

/// Result of ingesting an external edge list: the graph plus the mapping
/// between original node ids and dense indices (sorted-id order).
struct ParsedEdgeList {
  Graph graph;
  std::vector<long long> index_to_id;
  std::unordered_map<long long, int> id_to_index;
  long skipped_self_loops = 0;
};

/// Parses SNAP-style text: '#' comment lines, "u v" integer pairs. Duplicate
/// and reversed edges collapse; self-loop lines are skipped and counted.
/// Throws ParseError (with line number) on malformed lines, ConfigError if
/// no nodes survive.
ParsedEdgeList parse_edge_list(std::istream& in);

/// Writes sorted "u v" lines with u < v, using dense indices.
void serialize_edge_list(const Graph& g, std::ostream& out);

Graph read_edge_list_file(const std::string& path);
void write_edge_list_file(const Graph& g, const std::string& path);

/// Node-induced subgraph of min(target_size, n) nodes grown by seeded BFS
/// from a uniform start node, restarting at a random unvisited node when the
/// frontier empties. Deterministic for a fixed seed.
Graph snowball_sample(const Graph& g, int target_size, std::uint64_t seed);

}  // namespace beliefflow
