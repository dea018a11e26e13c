#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ctmap/digest.hpp"
#include "ctmap/errors.hpp"
#include "ctmap/group_examples.hpp"
#include "ctmap/metric_graph.hpp"
#include "oracles/oracles.hpp"

using namespace ctmap;

namespace {

std::vector<Edge> to_edges(const oracle::Edges& e) {
  std::vector<Edge> out;
  for (auto [u, v] : e) out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return out;
}

oracle::Edges from_graph(const MetricGraph& g) {
  oracle::Edges out;
  for (auto [u, v] : g.edges()) out.emplace_back(static_cast<int>(u), static_cast<int>(v));
  return out;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

// Tripod: center 0, legs of length 2 (to a), 3 (to b), 4 (to x).
MetricGraph tripod() {
  return build_graph(std::vector<Edge>{{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 5}, {0, 6}, {6, 7}, {7, 8}, {8, 9}});
}

}  // namespace

TEST_CASE("build_graph: path, disconnected input, self loop, empty list") {
  const auto p3 = build_graph(std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(p3.vertex_count() == 3);
  CHECK(distance(p3, 0, 2) == 2);

  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1}, {2, 3}}); }) == ErrorKind::DisconnectedGraph);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1}, {1, 1}}); }) == ErrorKind::SelfLoop);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{}); }) == ErrorKind::EmptyEdgeList);
  try {
    build_graph(std::vector<Edge>{{0, 1}, {2, 3}, {4, 5}});
  } catch (const Error& e) {
    // names the components
    CHECK(std::string(e.what()).find("3 components") != std::string::npos);
  }
}

TEST_CASE("build_graph: duplicate edges collapse, edge list is canonical") {
  const auto g = build_graph(std::vector<Edge>{{2, 1}, {0, 1}, {1, 2}, {1, 0}});
  CHECK(g.edge_count() == 2);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{1, 2});
  auto n = g.neighbors(1);
  CHECK(std::vector<Vertex>(n.begin(), n.end()) == std::vector<Vertex>{0, 2});
}

TEST_CASE("distance: examples and unknown vertex") {
  const auto p5 = build_graph(to_edges(oracle::path(5)));
  CHECK(distance(p5, 0, 4) == 4);
  CHECK(distance(p5, 3, 3) == 0);
  const auto c6 = build_graph(to_edges(oracle::cycle(6)));
  // oracle: shortest of all enumerated paths
  CHECK(distance(c6, 0, 3) == oracle::all_geodesics(oracle::cycle(6), 6, 0, 3).front().size() - 1);
  CHECK(distance(c6, 0, 3) == 3);
  CHECK(kind_of([&] { distance(p5, 0, 5); }) == ErrorKind::UnknownVertex);
}

TEST_CASE("distance agrees with Floyd-Warshall on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial;
    auto e = oracle::random_tree(n, rng);
    for (int extra = 0; extra < n / 2; ++extra) {
      const int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (u != v) e.emplace_back(u, v);
    }
    const auto g = build_graph(to_edges(e));
    const auto d = oracle::floyd_warshall(e, n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) REQUIRE(static_cast<int>(g.distance(u, v)) == d[u][v]);
    int diam = 0;
    for (auto& row : d) diam = std::max(diam, *std::max_element(row.begin(), row.end()));
    CHECK(static_cast<int>(g.diameter()) == diam);
  }
}

TEST_CASE("triangle inequality on a tiling ball") {
  const auto g = tiling_ball(7, 3, 3);
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      CHECK((g.distance(u, v) == 0) == (u == v));
      for (Vertex w = 0; w < n; ++w) {
        const auto duw = static_cast<long>(g.distance(u, w));
        const auto dvw = static_cast<long>(g.distance(v, w));
        REQUIRE(std::abs(duw - dvw) <= static_cast<long>(g.distance(u, v)));
      }
    }
}

TEST_CASE("geodesic: examples and the lowest-id tie-break") {
  const auto p5 = build_graph(to_edges(oracle::path(5)));
  CHECK(geodesic(p5, 0, 4).vertices == std::vector<Vertex>{0, 1, 2, 3, 4});
  const auto c4 = build_graph(to_edges(oracle::cycle(4)));
  CHECK(geodesic(c4, 0, 2).vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(geodesic(c4, 0, 0).vertices == std::vector<Vertex>{0});
  CHECK(kind_of([&] { geodesic(c4, 0, 9); }) == ErrorKind::UnknownVertex);
}

TEST_CASE("geodesic is the reverse-lexicographically least of all geodesics") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8 + trial % 4;
    auto e = oracle::random_tree(n, rng);
    for (int extra = 0; extra < 4; ++extra) {
      const int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (u != v) e.emplace_back(u, v);
    }
    const auto g = build_graph(to_edges(e));
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        auto all = oracle::all_geodesics(e, n, u, v);
        // walking back from v with the lowest id first = least reversed list
        for (auto& p : all) std::reverse(p.begin(), p.end());
        auto best = *std::min_element(all.begin(), all.end());
        std::reverse(best.begin(), best.end());
        const auto seg = geodesic(g, u, v);
        REQUIRE(std::vector<int>(seg.vertices.begin(), seg.vertices.end()) == best);
        // interval = union of all geodesics
        std::set<int> union_set;
        for (auto& p : all) union_set.insert(p.begin(), p.end());
        const auto iv = geodesic_interval(g, u, v);
        REQUIRE(std::vector<int>(iv.begin(), iv.end()) == std::vector<int>(union_set.begin(), union_set.end()));
      }
  }
}

TEST_CASE("geodesic on a {7,3} ball at distance 6") {
  const auto g = tiling_ball(7, 3, 4);
  int checked = 0;
  for (Vertex v = 0; v < g.vertex_count() && checked < 10; ++v) {
    for (Vertex w = v + 1; w < g.vertex_count() && checked < 10; ++w) {
      if (g.distance(v, w) != 6) continue;
      const auto seg = geodesic(g, v, w);
      CHECK(seg.vertices.size() == 7);
      CHECK(is_path(g, seg.vertices));
      CHECK(seg.graph_id == g.id());
      CHECK(geodesic(g, v, w).vertices == seg.vertices);
      ++checked;
    }
  }
  CHECK(checked == 10);
}

TEST_CASE("gromov_product: examples and bounds") {
  const auto p5 = build_graph(to_edges(oracle::path(5)));
  CHECK(gromov_product(p5, 0, 4, 2) == HalfInt::from_int(0));
  CHECK(gromov_product(p5, 1, 1, 4) == HalfInt::from_int(3));
  // tripod legs 2, 3, 4 to a = 2, b = 5, x = 9: (a,b)_x = 4
  const auto t = tripod();
  CHECK(gromov_product(t, 2, 5, 9) == HalfInt::from_int(4));
  const auto c5 = build_graph(to_edges(oracle::cycle(5)));
  CHECK(gromov_product(c5, 0, 2, 1) == HalfInt::from_int(0));
  CHECK(gromov_product(c5, 1, 3, 0) == HalfInt::from_twice(1));  // (1 + 2 - 2) / 2
  const auto g = tiling_ball(7, 3, 2);
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b)
      for (Vertex c = 0; c < n; c += 3) {
        const auto gp = gromov_product(g, a, b, c);
        REQUIRE(gp >= HalfInt::from_int(0));
        REQUIRE(gp <= HalfInt::from_int(std::min(g.distance(a, c), g.distance(b, c))));
      }
  CHECK(kind_of([&] { gromov_product(p5, 0, 1, 7); }) == ErrorKind::UnknownVertex);
}

TEST_CASE("delta_four_point: trees are 0, C4 is 1, witness reproduces") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = build_graph(to_edges(oracle::random_tree(30 + trial, rng)));
    CHECK(delta_four_point(g).delta_four_point == HalfInt::from_int(0));
  }
  const auto c4 = build_graph(to_edges(oracle::cycle(4)));
  const auto r = delta_four_point(c4);
  CHECK(r.delta_four_point == HalfInt::from_int(1));
  auto [x, y, z, w] = r.witness_quadruple;
  CHECK(four_point_defect(c4, x, y, z, w) == r.delta_four_point);
  // lexicographically first maximiser
  CHECK(r.witness_quadruple == std::array<Vertex, 4>{0, 1, 2, 3});
}

TEST_CASE("delta_four_point matches the brute-force oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 6 + trial;
    auto e = oracle::random_tree(n, rng);
    for (int extra = 0; extra < 3; ++extra) {
      const int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (u != v) e.emplace_back(u, v);
    }
    const auto g = build_graph(to_edges(e));
    const auto r = delta_four_point(g);
    CHECK(r.delta_four_point.twice() == oracle::twice_delta(oracle::floyd_warshall(e, n)));
    auto [x, y, z, w] = r.witness_quadruple;
    CHECK(four_point_defect(g, x, y, z, w) == r.delta_four_point);
  }
  for (int n : {5, 6, 7, 8, 9, 10, 20}) {
    const auto g = build_graph(to_edges(oracle::cycle(n)));
    CHECK(delta_four_point(g).delta_four_point.twice() == oracle::twice_delta(oracle::floyd_warshall(oracle::cycle(n))));
  }
}

TEST_CASE("delta_four_point on a {7,3} ball is in (0, 4] and stable") {
  const auto g = tiling_ball(7, 3, 4);
  const auto a = delta_four_point(g);
  const auto b = delta_four_point(g);
  CHECK(a.delta_four_point > HalfInt::from_int(0));
  CHECK(a.delta_four_point <= HalfInt::from_int(4));
  CHECK(a.delta_four_point == b.delta_four_point);
  CHECK(a.witness_quadruple == b.witness_quadruple);
  CHECK(a.delta_four_point.twice() == oracle::twice_delta(oracle::floyd_warshall(from_graph(g))));
}

TEST_CASE("delta_four_point: cap and sampled mode") {
  const auto g = build_graph(to_edges(oracle::cycle(12)));
  FourPointOptions capped;
  capped.vertex_cap = 10;
  CHECK(kind_of([&] { delta_four_point(g, capped); }) == ErrorKind::GraphTooLarge);
  FourPointOptions sampled = capped;
  sampled.sample_count = 5000;
  sampled.seed = 9;
  const auto r1 = delta_four_point(g, sampled);
  const auto r2 = delta_four_point(g, sampled);
  CHECK(r1.sampled);
  CHECK(r1.delta_four_point == r2.delta_four_point);
  CHECK(r1.witness_quadruple == r2.witness_quadruple);
  CHECK(r1.delta_four_point <= delta_four_point(g).delta_four_point);
}

TEST_CASE("net_approximation: P2, P5 and the quasi-isometry bound") {
  const auto p2 = build_graph(std::vector<Edge>{{0, 1}});
  const auto n2 = net_approximation(p2);
  CHECK(n2.net.vertex_count() == 1);
  CHECK(n2.net.edge_count() == 0);
  CHECK(n2.centers == std::vector<Vertex>{0});

  const auto p5 = build_graph(to_edges(oracle::path(5)));
  const auto n5 = net_approximation(p5);
  CHECK(n5.centers == std::vector<Vertex>{0, 2, 4});
  // d(0, 4) = 4 is within the joining radius, so 0-4 is a net edge too
  CHECK(std::vector<Edge>(n5.net.edges().begin(), n5.net.edges().end()) == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  const auto n5r3 = net_approximation(p5, 3);
  CHECK(std::vector<Edge>(n5r3.net.edges().begin(), n5r3.net.edges().end()) == std::vector<Edge>{{0, 1}, {1, 2}});

  const auto g = tiling_ball(7, 3, 5);
  const auto net = net_approximation(g);
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex i = 0; i < net.centers.size(); ++i)
    for (Vertex j = i + 1; j < net.centers.size(); ++j) REQUIRE(g.distance(net.centers[i], net.centers[j]) >= 2);
  for (Vertex v = 0; v < n; ++v) REQUIRE(g.distance(v, net.centers[net.nearest[v]]) <= 1);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const Rational dg(g.distance(u, v));
      const Rational dn(net.net.distance(net.nearest[u], net.nearest[v]));
      REQUIRE(dg / Rational(4) - Rational(4) <= dn);
      REQUIRE(dn <= dg + Rational(4));
    }
}

TEST_CASE("ball: examples and free-group shell counts") {
  const auto p5 = build_graph(to_edges(oracle::path(5)));
  CHECK(ball(p5, 2, 0) == std::vector<Vertex>{2});
  CHECK(ball(p5, 2, 1) == std::vector<Vertex>{1, 2, 3});
  CHECK(kind_of([&] { ball(p5, 5, 1); }) == ErrorKind::UnknownVertex);
  const auto f2 = cayley_ball(GroupPresentationModel::free(2), 5);
  for (Distance R = 1; R <= 5; ++R) CHECK(ball(f2, 0, R).size() == 2 * static_cast<std::size_t>(std::pow(3, R)) - 1);
}

TEST_CASE("distances_to_set and is_path") {
  const auto p5 = build_graph(to_edges(oracle::path(5)));
  const std::vector<Vertex> s{0, 4};
  CHECK(distances_to_set(p5, s) == std::vector<Distance>{0, 1, 2, 1, 0});
  CHECK(kind_of([&] { distances_to_set(p5, std::vector<Vertex>{}); }) == ErrorKind::EmptySet);
  CHECK(is_path(p5, std::vector<Vertex>{0, 1, 2, 1}));
  CHECK_FALSE(is_path(p5, std::vector<Vertex>{0, 2}));
}

TEST_CASE("edge-list text format") {
  std::istringstream in("# comment\n0 1\n1 2  # trailing\n\n2 3\n");
  const auto e = parse_edge_list(in);
  CHECK(e == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  std::istringstream bad("0 x\n");
  CHECK(kind_of([&] { parse_edge_list(bad); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_edge_list_file("/nonexistent/graph.txt"); }) == ErrorKind::ParseError);
}

TEST_CASE("labels and digests") {
  const auto f2 = cayley_ball(GroupPresentationModel::free(2), 1);
  CHECK(f2.has_labels());
  CHECK(f2.label(0) == "1");
  CHECK(f2.find_label("a").has_value());
  CHECK_FALSE(f2.find_label("ab").has_value());
  const auto a = build_graph(std::vector<Edge>{{0, 1}, {1, 2}});
  const auto b = build_graph(std::vector<Edge>{{1, 2}, {0, 1}});
  CHECK(digest_graph(a) == digest_graph(b));
  CHECK(digest_hex("abc").size() == 16);
  CHECK(digest_hex("") == "cbf29ce484222325");
}
