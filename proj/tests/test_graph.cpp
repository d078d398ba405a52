#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qcongest/generators.hpp"
#include "qcongest/graph.hpp"
#include "qcongest/graph_io.hpp"

using namespace qcongest;

namespace {

WeightedGraph triangle() { return WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}}); }

WeightedGraph unit_star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t v = 1; v <= leaves; ++v) edges.push_back({0, static_cast<NodeId>(v), 1});
  return WeightedGraph(leaves + 1, edges);
}

std::int64_t raw(Distance d) { return d.is_finite() ? d.value() : oracle::kInf; }

}  // namespace

TEST_CASE("distance arithmetic saturates at infinity") {
  CHECK(Distance(3) + Distance(4) == Distance(7));
  CHECK_FALSE((Distance(3) + Distance::infinite()).is_finite());
  CHECK(Distance::infinite() > Distance(std::numeric_limits<Weight>::max() - 1));
  CHECK_FALSE((Distance(std::numeric_limits<Weight>::max() - 2) + Distance(5)).is_finite());
  CHECK_THROWS_AS(Distance::infinite().value(), std::domain_error);
}

TEST_CASE("graph construction validates its input") {
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, 1}, {1, 0, 2}}), std::invalid_argument);
  CHECK_THROWS(WeightedGraph(2, {{0, 2, 1}}));
  try {
    WeightedGraph(4, {{0, 1, 1}, {2, 3, 1}});
    FAIL("disconnected graph accepted");
  } catch (const DisconnectedGraph& e) {
    REQUIRE(e.components().size() == 2);
    CHECK(e.components()[0] == std::vector<NodeId>{0, 1});
    CHECK(e.components()[1] == std::vector<NodeId>{2, 3});
  }
  const WeightedGraph g(4, {{0, 1, 2}, {2, 3, 5}}, WeightedGraph::Connectivity::kAllowDisconnected);
  CHECK(g.max_weight() == 5);
  CHECK(g.weight(1, 0) == 2);
  CHECK_FALSE(g.weight(0, 3).has_value());
}

TEST_CASE("exact sssp on small fixed graphs") {
  const auto path = path_graph({2, 3});
  CHECK(exact_sssp(path, 0).at(0, 2) == Distance(5));
  const WeightedGraph single(1, {});
  CHECK(exact_sssp(single, 0).at(0, 0) == Distance(0));
  CHECK_THROWS(exact_sssp(path, 7));
}

TEST_CASE("exact sssp agrees with cubic relaxation on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = random_connected(12, 0.2, {1, 10}, seed);
    const auto fw = oracle::floyd_warshall(g);
    const auto table = all_pairs(g);
    for (NodeId s = 0; s < 12; ++s) {
      const auto single = exact_sssp(g, s);
      for (NodeId v = 0; v < 12; ++v) {
        REQUIRE(raw(single.at(s, v)) == fw[s][v]);
        REQUIRE(table.at(s, v) == single.at(s, v));
        REQUIRE(table.at(s, v) == table.at(v, s));
      }
    }
  }
}

TEST_CASE("bounded-hop distances") {
  const auto g = triangle();
  CHECK(exact_bounded_hop(g, 0, 1).at(0, 2) == Distance(3));
  CHECK(exact_bounded_hop(g, 0, 2).at(0, 2) == Distance(2));
  const auto zero = exact_bounded_hop(g, 0, 0);
  CHECK(zero.at(0, 0) == Distance(0));
  CHECK_FALSE(zero.at(0, 1).is_finite());
  CHECK_FALSE(zero.at(0, 2).is_finite());

  SUBCASE("matches explicit path enumeration") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g12 = random_connected(12, 0.15, {1, 10}, 100 + seed);
      for (NodeId s = 0; s < 12; s += 5) {
        const auto enumerated = oracle::bounded_hop_by_enumeration(g12, s, 3);
        const auto relaxed = oracle::bounded_hop_bellman_ford(g12, s, 3);
        const auto table = exact_bounded_hop(g12, s, 3);
        for (NodeId v = 0; v < 12; ++v) {
          REQUIRE(raw(table.at(s, v)) == enumerated[v]);
          REQUIRE(relaxed[v] == enumerated[v]);
        }
      }
    }
  }

  SUBCASE("non-increasing in the hop bound, exact once hops cover shortest paths") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g10 = random_connected(10, 0.3, {1, 10}, 200 + seed);
      const auto fw = oracle::floyd_warshall_hops(g10);
      for (NodeId s = 0; s < 10; ++s) {
        std::vector<std::int64_t> prev(10, oracle::kInf);
        for (std::int64_t l = 0; l <= 9; ++l) {
          const auto t = exact_bounded_hop(g10, s, l);
          for (NodeId v = 0; v < 10; ++v) {
            REQUIRE(raw(t.at(s, v)) <= prev[v]);
            prev[v] = raw(t.at(s, v));
            if (fw[s][v].second <= l) REQUIRE(raw(t.at(s, v)) == fw[s][v].first);
          }
        }
      }
    }
  }
}

TEST_CASE("eccentricity, diameter, radius, hop diameter") {
  const auto star = unit_star(4);
  CHECK(radius(star) == 1);
  CHECK(diameter(star) == 2);
  CHECK(eccentricity(star, 0) == 1);
  const WeightedGraph edge(2, {{0, 1, 7}});
  CHECK(diameter(edge) == 7);
  CHECK(radius(edge) == 7);
  CHECK(hop_diameter(triangle()) == 2);
  CHECK(diameter(cycle_graph(16, {1, 1}, 1)) == 8);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_connected(12, 0.2, {1, 10}, 300 + seed);
    const auto fw = oracle::floyd_warshall(g);
    std::int64_t d = 0, r = oracle::kInf;
    for (const auto& row : fw) {
      const auto e = *std::max_element(row.begin(), row.end());
      d = std::max(d, e);
      r = std::min(r, e);
    }
    CHECK(diameter(g) == d);
    CHECK(radius(g) == r);
    CHECK(r <= d);
    CHECK(d <= 2 * r);
    CHECK(hop_diameter(g) == oracle::hop_diameter(g));
    const auto hops = hop_distances(g, 0);
    const auto fwh = oracle::floyd_warshall_hops(g);
    for (NodeId v = 0; v < 12; ++v) CHECK(hops[v] == fwh[0][v].second);
  }
}

TEST_CASE("unweighted distances ignore weights") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_connected(16, 0.1, {1, 10}, 400 + seed);
    std::int64_t diam = 0;
    for (NodeId s = 0; s < 16; ++s) {
      const auto bfs = oracle::bfs_hops(g, s);
      CHECK(unweighted_distances(g, s) == bfs);
      diam = std::max(diam, *std::max_element(bfs.begin(), bfs.end()));
    }
    CHECK(unweighted_diameter(g) == diam);
  }
}

TEST_CASE("unit-edge contraction") {
  SUBCASE("a path of unit edges collapses to one node") {
    const auto g = path_graph({1, 1, 1});
    const auto c = contract_unit_edges(g);
    CHECK(c.graph.node_count() == 1);
    CHECK(diameter(g) == 3);
    CHECK(diameter(g) <= diameter(c.graph) + 4);
  }
  SUBCASE("no unit edges means no change") {
    const auto g = random_connected(9, 0.3, {2, 9}, 5);
    const auto c = contract_unit_edges(g);
    CHECK(c.graph.node_count() == g.node_count());
    CHECK(c.graph.edge_count() == g.edge_count());
    for (const auto& e : g.edges()) CHECK(c.graph.weight(c.node_map[e.u], c.node_map[e.v]) == e.w);
  }
  SUBCASE("parallel edges keep the smaller weight") {
    const WeightedGraph g(3, {{0, 1, 1}, {0, 2, 7}, {1, 2, 4}});
    const auto c = contract_unit_edges(g);
    REQUIRE(c.graph.node_count() == 2);
    CHECK(c.node_map[0] == c.node_map[1]);
    CHECK(c.graph.weight(c.node_map[0], c.node_map[2]) == 4);
  }
  SUBCASE("diameter and radius move by less than n") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto g = random_connected(14, 0.2, {1, 3}, 500 + seed);
      const auto c = contract_unit_edges(g);
      const auto n = static_cast<Weight>(g.node_count());
      const Weight d = diameter(g), dc = diameter(c.graph);
      const Weight r = radius(g), rc = radius(c.graph);
      CHECK(dc <= d);
      CHECK(d <= dc + n);
      CHECK(rc <= r);
      CHECK(r <= rc + n);
      // Path-level statement: every distance shrinks by less than n.
      const auto fw = oracle::floyd_warshall(g);
      const auto fc = oracle::floyd_warshall(c.graph);
      for (NodeId u = 0; u < 14; ++u)
        for (NodeId v = 0; v < 14; ++v) {
          const auto dcuv = fc[c.node_map[u]][c.node_map[v]];
          REQUIRE(dcuv <= fw[u][v]);
          REQUIRE(fw[u][v] < dcuv + n);
        }
    }
  }
}

TEST_CASE("graph text and JSON formats round-trip") {
  const auto g = random_connected(8, 0.3, {1, 20}, 9);
  std::stringstream text;
  write_graph_text(text, g);
  const auto back = read_graph_text(text);
  CHECK(back.edges().size() == g.edges().size());
  for (const auto& e : g.edges()) CHECK(back.weight(e.u, e.v) == e.w);

  const auto from_json = read_graph_json(write_graph_json(g));
  for (const auto& e : g.edges()) CHECK(from_json.weight(e.u, e.v) == e.w);

  // Named nodes get ids in sorted name order.
  const auto named = read_graph_json(R"({"n":3,"m":2,"edges":[{"u":"c","v":"a","w":4},{"u":"a","v":"b","w":1}]})");
  CHECK(named.weight(0, 2) == 4);
  CHECK(named.weight(0, 1) == 1);

  std::stringstream bad("2 1\n0 1 0\n");
  CHECK_THROWS(read_graph_text(bad));
}

TEST_CASE("generators are seeded and connected") {
  const auto a = random_connected(20, 0.1, {3, 7}, 42);
  const auto b = random_connected(20, 0.1, {3, 7}, 42);
  REQUIRE(a.edges().size() == b.edges().size());
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    CHECK(a.edges()[i].u == b.edges()[i].u);
    CHECK(a.edges()[i].w == b.edges()[i].w);
  }
  for (const auto& e : a.edges()) {
    CHECK(e.w >= 3);
    CHECK(e.w <= 7);
  }
  CHECK(cycle_graph(9, {1, 1}, 0).edge_count() == 9);
  CHECK(star_graph(6, {1, 1}, 0).degree(0) == 5);
  CHECK(grid_graph(3, 4, {1, 1}, 0).edge_count() == 17);
}
