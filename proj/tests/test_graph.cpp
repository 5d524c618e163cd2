#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "beliefflow/errors.hpp"
#include "beliefflow/graph.hpp"
#include "test_util.hpp"

using namespace beliefflow;
using testutil::make_graph;

namespace {

// Independent oracle: triple-loop triangle counting.
std::vector<double> brute_force_clustering(const Graph& g) {
  const int n = g.node_count();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int d = g.degree_list()[i];
    if (d <= 1) continue;
    long long closed = 0;
    for (int j = 0; j < n; ++j) {
      if (!g.has_edge(i, j)) continue;
      for (int k = j + 1; k < n; ++k) {
        if (g.has_edge(i, k) && g.has_edge(j, k)) ++closed;
      }
    }
    out[i] = 2.0 * closed / (static_cast<double>(d) * (d - 1));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_edge_list handles comments and duplicates") {
  std::istringstream in("# c\n0 1\n1 2");
  auto parsed = parse_edge_list(in);
  CHECK(parsed.graph.node_count() == 3);
  CHECK(parsed.graph.edges() ==
        std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(parsed.skipped_self_loops == 0);

  std::istringstream rev("0 1\n1 0");
  auto deduped = parse_edge_list(rev);
  CHECK(deduped.graph.node_count() == 2);
  CHECK(deduped.graph.edge_count() == 1);
}

TEST_CASE("parse_edge_list skips and counts self-loops") {
  std::istringstream in("0 0\n0 1");
  auto parsed = parse_edge_list(in);
  CHECK(parsed.graph.node_count() == 2);
  CHECK(parsed.graph.edges() == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(parsed.skipped_self_loops == 1);
}

TEST_CASE("parse_edge_list reports malformed lines with their number") {
  std::istringstream bad("0 1\nfoo 2\n");
  try {
    parse_edge_list(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream trailing("0 1 2\n");
  CHECK_THROWS_AS(parse_edge_list(trailing), ParseError);

  std::istringstream empty("# only comments\n\n");
  CHECK_THROWS_AS(parse_edge_list(empty), ConfigError);
}

TEST_CASE("parse_edge_list remaps sparse ids densely") {
  std::istringstream in("10 30\n30 20");
  auto parsed = parse_edge_list(in);
  CHECK(parsed.graph.node_count() == 3);
  CHECK(parsed.index_to_id == std::vector<long long>{10, 20, 30});
  CHECK(parsed.id_to_index.at(30) == 2);
  CHECK(parsed.graph.has_edge(0, 2));  // 10-30
  CHECK(parsed.graph.has_edge(1, 2));  // 20-30
}

TEST_CASE("serialize then parse is the identity on (n, edges)") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = testutil::gnp_min_degree_one(25, 0.15, seed);
    std::ostringstream out;
    serialize_edge_list(g, out);
    std::istringstream in(out.str());
    auto parsed = parse_edge_list(in);
    CHECK(parsed.graph.node_count() == g.node_count());
    CHECK(parsed.graph.edges() == g.edges());
  }
}

TEST_CASE("clustering coefficients on canonical graphs") {
  const auto tri = testutil::triangle().clustering_list();
  CHECK(tri == std::vector<double>{1.0, 1.0, 1.0});

  const auto path = testutil::path3().clustering_list();
  CHECK(path == std::vector<double>{0.0, 0.0, 0.0});

  // K4 minus the edge {2,3}: degree-3 nodes have 2 of 3 neighbor pairs
  // closed, degree-2 nodes have their single pair closed.
  const Graph k4m = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
  const auto cl = k4m.clustering_list();
  CHECK(cl[0] == doctest::Approx(2.0 / 3.0));
  CHECK(cl[1] == doctest::Approx(2.0 / 3.0));
  CHECK(cl[2] == doctest::Approx(1.0));
  CHECK(cl[3] == doctest::Approx(1.0));
}

TEST_CASE("clustering agrees with the triple-loop oracle") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 5 + static_cast<int>(seed % 46);
    const Graph g = testutil::gnp(n, 0.2, 1000 + seed);
    const auto fast = g.clustering_list();
    const auto slow = brute_force_clustering(g);
    for (int i = 0; i < n; ++i) {
      CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
      CHECK(fast[i] >= 0.0);
      CHECK(fast[i] <= 1.0);
    }
  }
}

TEST_CASE("degree list is consistent with the edge set") {
  const Graph g = testutil::gnp(40, 0.1, 7);
  long long total = 0;
  for (int d : g.degree_list()) total += d;
  CHECK(total == 2 * g.edge_count());
}

TEST_CASE("adjusted adjacency entries and column sums") {
  const AdjustedAdjacency tri(testutil::triangle());
  REQUIRE(tri.is_dense());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = i == j ? 0.0 : 1.0 / 3.0;
      CHECK(tri.dense()(i, j) == doctest::Approx(expected));
    }
  }

  const AdjustedAdjacency path(testutil::path3());
  CHECK(path.dense()(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(path.dense()(1, 0) == doctest::Approx(1.0 / 2.0));

  const Graph with_isolated = make_graph(3, {{0, 1}});
  const AdjustedAdjacency iso(with_isolated);
  CHECK(iso.dense().row(2).norm() == 0.0);
  CHECK(iso.dense().col(2).norm() == 0.0);
}

TEST_CASE("column sums equal d_j/(1+d_j) and stay below one") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = testutil::gnp(30, 0.2, 50 + seed);
    const auto sums = AdjustedAdjacency(g).column_sums();
    for (int j = 0; j < g.node_count(); ++j) {
      const double d = g.degree_list()[j];
      CHECK(sums[j] == doctest::Approx(d / (1.0 + d)).epsilon(1e-12));
      CHECK(sums[j] < 1.0);
    }
  }
}

TEST_CASE("adjusted adjacency switches to sparse storage") {
  std::vector<std::pair<int, int>> ring;
  const int n = AdjustedAdjacency::kDenseNodeLimit + 10;
  for (int i = 0; i < n; ++i) ring.emplace_back(std::min(i, (i + 1) % n),
                                                std::max(i, (i + 1) % n));
  const Graph g = Graph::from_edges(n, std::move(ring));
  const AdjustedAdjacency a(g);
  CHECK_FALSE(a.is_dense());
  const auto sums = a.column_sums();
  for (double s : sums) CHECK(s == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("snowball saturates at the whole graph") {
  const Graph g = testutil::gnp(15, 0.3, 3);
  const Graph s = snowball_sample(g, 50, 42);
  CHECK(s.node_count() == g.node_count());
  CHECK(s.edges() == g.edges());
}

TEST_CASE("snowball is deterministic per seed") {
  const Graph g = testutil::gnp(60, 0.08, 9);
  const Graph a = snowball_sample(g, 20, 7);
  const Graph b = snowball_sample(g, 20, 7);
  CHECK(a.edges() == b.edges());
  CHECK(a.node_count() == b.node_count());
}

TEST_CASE("snowball on a star keeps the center") {
  // center 0 with 5 leaves; any size-3 sample is center + two leaves
  const Graph star =
      make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph s = snowball_sample(star, 3, seed);
    CHECK(s.node_count() == 3);
    CHECK(s.edge_count() == 2);
    // the center is the unique degree-2 node of the sample
    CHECK(*std::max_element(s.degree_list().begin(), s.degree_list().end()) ==
          2);
  }
}

TEST_CASE("snowball restarts over disconnected components") {
  // two triangles; a size-4 sample exhausts one and restarts in the other
  const Graph two = make_graph(6, {{0, 1}, {0, 2}, {1, 2},
                                   {3, 4}, {3, 5}, {4, 5}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph s = snowball_sample(two, 4, seed);
    CHECK(s.node_count() == 4);
    CHECK(s.edge_count() == 3);  // one full triangle + an isolated node
  }
}

TEST_CASE("from_edges rejects invalid input") {
  CHECK_THROWS_AS(make_graph(3, {{1, 1}}), ConfigError);
  CHECK_THROWS_AS(make_graph(2, {{0, 5}}), ConfigError);
}
