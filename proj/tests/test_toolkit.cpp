#include "doctest.h"
#include "oracles.hpp"
#include "qcongest/engine.hpp"
#include "qcongest/generators.hpp"
#include "qcongest/toolkit.hpp"
#include "qcongest/tree_programs.hpp"

using namespace qcongest;

namespace {

std::int64_t raw(Distance d) { return d.is_finite() ? d.value() : oracle::kInf; }

// Rounded-weight search written out directly: for each level, integer weights
// ceil(2*hops*q*w / 2^level), exact distances on those, kept when within the
// budget, translated back and minimized.
std::vector<Rational> rounded_oracle(const WeightedGraph& g, NodeId s, std::int64_t hops, int q) {
  const std::size_t n = g.node_count();
  std::uint64_t top = 2 * n * static_cast<std::uint64_t>(g.max_weight()) * static_cast<std::uint64_t>(q);
  int levels = 1;
  while ((std::uint64_t{1} << (levels - 1)) < top) ++levels;
  const std::int64_t budget = (1 + 2 * q) * hops;
  std::vector<Rational> best(n, Rational::infinite());
  for (int i = 0; i < levels; ++i) {
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
      const std::int64_t num = 2 * hops * q * e.w;
      const std::int64_t den = std::int64_t{1} << i;
      edges.push_back({e.u, e.v, std::max<std::int64_t>((num + den - 1) / den, 1)});
    }
    const auto fw = oracle::floyd_warshall(WeightedGraph(n, edges));
    for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
      if (fw[s][v] > budget) continue;
      const Rational cand = Rational(fw[s][v]) * Rational(std::int64_t{1} << i, 2 * hops * q);
      if (cand < best[v]) best[v] = cand;
    }
  }
  return best;
}

Network ready(WeightedGraph g, std::uint64_t seed = 0) {
  Network net(std::move(g), {0, 0, seed});
  build_bfs_tree(net);
  return net;
}

}  // namespace

TEST_CASE("epsilon and rounding scheme") {
  CHECK(eps_denominator(1) == 1);
  CHECK(eps_denominator(16) == 4);
  CHECK(eps_denominator(17) == 5);
  CHECK(eps_denominator(1 << 20) == 16);
  CHECK(eps_denominator(1 << 20, 8) == 8);
  CHECK(sandwich_factor(2) == Rational(9, 4));

  // w = 5, hops = 4, eps = 1/2: level 3 rounds to ceil(2*4*5 / (1/2 * 8)) = 10.
  const auto scheme = RoundingScheme::make(8, Rational(5), 4, 2);
  CHECK(scheme.weight(Rational(5), 3) == 10);
  CHECK(scheme.value(10, 3) == Rational(5));
  CHECK(scheme.budget == 20);
  CHECK(scheme.levels == 9);  // ceil(log2(2*8*5*2)) + 1
  CHECK(scheme.total_rounds() == 9 * 21);
  CHECK(scheme.weight(Rational(1), 40) == 1);
  CHECK_THROWS(RoundingScheme::make(8, Rational(5), 0, 2));
}

TEST_CASE("bounded-distance search") {
  auto net = ready(path_graph({1, 1, 1}));
  const auto& g = net.topology();

  SUBCASE("budget 2 on a unit path") {
    const auto run = bounded_distance_sssp(net, g, 0, 2);
    CHECK(run.distance[2] == Distance(2));
    CHECK_FALSE(run.distance[3].is_finite());
    CHECK(run.cost.rounds() == 3);
  }
  SUBCASE("budget 0 reaches only the source") {
    const auto run = bounded_distance_sssp(net, g, 0, 0);
    CHECK(run.distance[0] == Distance(0));
    CHECK_FALSE(run.distance[1].is_finite());
    CHECK(run.cost.rounds() == 1);
  }
  SUBCASE("matches exact distances below the budget and takes budget + 1 rounds") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto rnet = ready(random_connected(14, 0.2, {1, 10}, 700 + seed));
      const auto fw = oracle::floyd_warshall(rnet.topology());
      const std::int64_t budget = 5 + static_cast<std::int64_t>(seed) * 3;
      const auto run = bounded_distance_sssp(rnet, rnet.topology(), 3, budget);
      CHECK(run.cost.rounds() == budget + 1);
      for (NodeId v = 0; v < 14; ++v) {
        const std::int64_t expect = fw[3][v] <= budget ? fw[3][v] : oracle::kInf;
        REQUIRE(raw(run.distance[v]) == expect);
      }
    }
  }
}

TEST_CASE("bounded-hop sssp equals the rounded-weight construction") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 6 + seed % 8;
    auto net = ready(random_connected(n, 0.25, {1, 10}, 800 + seed));
    const int q = eps_denominator(n);
    const std::int64_t hops = 1 + static_cast<std::int64_t>(seed % 4);
    const NodeId s = static_cast<NodeId>(seed % n);
    const auto run = bounded_hop_sssp(net, s, hops, q);
    const auto expect = rounded_oracle(net.topology(), s, hops, q);
    const auto fw = oracle::floyd_warshall(net.topology());
    const auto eps = epsilon_of(q);
    CHECK(run.cost.rounds() == run.scheme.total_rounds());
    for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
      REQUIRE(run.approx[v] == expect[v]);
      // Sandwich against exact and hop-bounded distances.
      const auto bounded = oracle::bounded_hop_by_enumeration(net.topology(), s, hops);
      REQUIRE(Rational(fw[s][v]) <= run.approx[v]);
      if (bounded[v] < oracle::kInf) REQUIRE(run.approx[v] <= (Rational(1) + eps) * Rational(bounded[v]));
    }
  }
}

TEST_CASE("bounded-hop sssp on a triangle with one hop") {
  auto net = ready(WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}}));
  const auto run = bounded_hop_sssp(net, 0, 1, 2);
  CHECK(run.approx[0] == Rational(0));
  CHECK(Rational(2) <= run.approx[2]);
  CHECK(run.approx[2] <= Rational(9, 2));
  CHECK(run.approx[1] <= Rational(3, 2));
}

TEST_CASE("multi-source runs reproduce single-source runs") {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const std::size_t n = 10 + seed % 6;
    auto net = ready(random_connected(n, 0.2, {1, 10}, 900 + seed), seed);
    const int q = eps_denominator(n);
    const std::int64_t hops = 2 + static_cast<std::int64_t>(seed % 3);
    std::vector<NodeId> sources;
    for (NodeId v = 0; v < static_cast<NodeId>(n); v += 2) sources.push_back(v);
    MsspRun multi;
    try {
      multi = bounded_hop_mssp(net, sources, hops, q);
    } catch (const CongestionFailure&) {
      ++failures;
      continue;
    }
    CHECK(multi.sources == sources);
    CHECK(multi.slot >= 1);
    for (NodeId s : sources) {
      const auto single = bounded_hop_sssp(net, s, hops, q);
      for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) REQUIRE(multi.from(s)[v] == single.approx[v]);
    }
  }
  CHECK(failures <= 1);

  SUBCASE("one source") {
    auto net = ready(random_connected(9, 0.3, {1, 10}, 77));
    const std::vector<NodeId> one{4};
    const auto multi = bounded_hop_mssp(net, one, 3, 3);
    const auto single = bounded_hop_sssp(net, 4, 3, 3);
    CHECK(multi.approx.size() == 1);
    CHECK(multi.from(4) == single.approx);
  }
}

// With hops = n the single-attempt failure rate stays low; short hop bounds
// pack each copy's broadcasts into few rounds and fail far more often.
TEST_CASE("multi-source failures are congestion failures, never bandwidth overruns") {
  int failures = 0;
  const int runs = 60;
  for (int t = 0; t < runs; ++t) {
    auto net = ready(random_connected(16, 0.15, {1, 10}, 1000 + static_cast<std::uint64_t>(t)),
                     static_cast<std::uint64_t>(t));
    std::vector<NodeId> all(16);
    for (NodeId v = 0; v < 16; ++v) all[v] = v;
    MsspOptions options;
    options.max_retries = 0;
    try {
      bounded_hop_mssp(net, all, 16, eps_denominator(16), options);
    } catch (const CongestionFailure& e) {
      CHECK(e.copies() > 0);
      ++failures;
    }
  }
  CHECK(failures <= runs / 10);
}

TEST_CASE("skeleton sampling is node-local and seeded") {
  auto net = ready(random_connected(40, 0.1, {1, 5}, 3), 11);
  const auto before = net.ledger().rounds();
  const auto a = sample_skeleton_sets(net, 8, 5);
  const auto b = sample_skeleton_sets(net, 8, 5);
  const auto c = sample_skeleton_sets(net, 8, 5, 1);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(net.ledger().rounds() == before);
}
