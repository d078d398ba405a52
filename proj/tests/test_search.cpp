#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qcongest/engine.hpp"
#include "qcongest/generators.hpp"
#include "qcongest/quantum_opt.hpp"
#include "qcongest/tree_programs.hpp"

using namespace qcongest;

namespace {

SearchProblem one_marked(std::size_t size, std::size_t marked) {
  SearchProblem p;
  p.table.assign(size, Score(Rational(1)));
  p.table[marked] = Rational(2);
  p.rho = 1.0 / static_cast<double>(size);
  p.delta = 1.0 / 8;
  p.t0 = 17;
  p.t = 5;
  return p;
}

std::vector<NodeId> all_nodes(std::size_t n) {
  std::vector<NodeId> s(n);
  for (std::size_t v = 0; v < n; ++v) s[v] = static_cast<NodeId>(v);
  return s;
}

}  // namespace

TEST_CASE("evaluation budget") {
  CHECK(evaluation_budget(1.0, 1.0 / 8) == static_cast<std::int64_t>(std::floor(3 * std::sqrt(std::log(8.0)))));
  CHECK(evaluation_budget(1.0 / 64, 1.0 / 8) == static_cast<std::int64_t>(std::floor(3 * std::sqrt(64 * std::log(8.0)))));
  CHECK(evaluation_budget(1.0, 0.99) == 1);
  CHECK(better(Rational(3), Rational(2), Objective::kMaximize));
  CHECK(better(Rational(2), Rational(3), Objective::kMinimize));
  CHECK(better(Rational(2), std::nullopt, Objective::kMinimize));
  CHECK_FALSE(better(std::nullopt, Rational(2), Objective::kMaximize));
}

TEST_CASE("a constant function needs a single evaluation") {
  SearchProblem p;
  p.table.assign(20, Score(Rational(4)));
  p.rho = 1.0;
  p.t0 = 3;
  p.t = 2;
  const auto trace = amplified_max_search(p, 5);
  CHECK(trace.evaluations == 1);
  CHECK(trace.success);
  CHECK(trace.charged_rounds == 3 + 2);
  CHECK(trace.value == Score(Rational(4)));
}

TEST_CASE("one marked element out of 64") {
  const int runs = 400;
  int successes = 0;
  double evaluations = 0;
  for (int t = 0; t < runs; ++t) {
    const auto p = one_marked(64, static_cast<std::size_t>(t) % 64);
    const auto trace = amplified_max_search(p, 1000 + static_cast<std::uint64_t>(t));
    successes += trace.success ? 1 : 0;
    evaluations += static_cast<double>(trace.evaluations);
    REQUIRE(trace.evaluations <= trace.budget);
    REQUIRE(trace.charged_rounds == p.t0 + trace.evaluations * p.t);
    if (trace.success) REQUIRE(trace.found == static_cast<std::size_t>(t) % 64);
  }
  CHECK(static_cast<double>(successes) / runs >= 7.0 / 8);
  CHECK(evaluations / runs <= kAmplificationConstant * std::sqrt(64 * std::log(8.0)));
}

TEST_CASE("exhaustive search bounds every stochastic run") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SearchProblem p;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 30; ++i) p.table.push_back(Rational(static_cast<std::int64_t>(rng() % 100)));
    p.rho = 1.0 / 30;
    for (auto objective : {Objective::kMaximize, Objective::kMinimize}) {
      p.objective = objective;
      const auto full = exhaustive_search(p);
      const auto fast = amplified_max_search(p, seed);
      CHECK(full.evaluations == 30);
      CHECK(full.success);
      CHECK_FALSE(better(fast.value, full.value, objective));
    }
  }
  SearchProblem empty;
  CHECK_THROWS_AS(amplified_max_search(empty, 0), std::invalid_argument);
}

TEST_CASE("parameter schedule") {
  const auto s = ParameterSchedule::make(64, 16);
  CHECK(s.q == 6);
  CHECK(s.r == static_cast<std::int64_t>(std::ceil(std::pow(64.0, 0.4) * std::pow(16.0, -0.2))));
  // n log n / r exceeds n here; shortest paths never need more than n - 1 hops.
  CHECK(s.hops == std::min<std::int64_t>(64, static_cast<std::int64_t>(std::ceil(64.0 * 6 / static_cast<double>(s.r)))));
  const auto wide = ParameterSchedule::make(4096, 4);
  CHECK(wide.hops == static_cast<std::int64_t>(std::ceil(4096.0 * 12 / static_cast<double>(wide.r))));
  CHECK(s.k == 4);
  const auto one = ParameterSchedule::make(1, 0);
  CHECK(one.r == 1);
  CHECK(one.hops == 1);
  CHECK(one.k == 0);
  CHECK(ParameterSchedule::make(1 << 20, 100, 8).q == 8);
  CHECK_THROWS(ParameterSchedule::make(0, 0));
}

TEST_CASE("evaluating one skeleton set") {
  const auto g = random_connected(12, 0.2, {1, 10}, 61);
  Network net(g, {0, 0, 3});
  build_bfs_tree(net);
  const auto before = net.ledger().rounds();
  const auto schedule = ParameterSchedule::make(12, unweighted_diameter(g));
  const auto exact = all_pairs(g);
  const auto ecc = eccentricities(g);
  const auto factor = sandwich_factor(schedule.q);
  const SearchConfig config;

  SUBCASE("a single node") {
    const std::vector<NodeId> one{7};
    const auto e = evaluate_f_i(net, one, 0, schedule, Objective::kMaximize, config, 1, &exact);
    REQUIRE(e.value.has_value());
    CHECK(e.inner.evaluations == 1);
    CHECK(Rational(ecc[7]) <= *e.value);
    CHECK(*e.value <= factor * Rational(ecc[7]));
    CHECK(e.sandwich_ok == true);
  }
  SUBCASE("an empty set has no value") {
    const std::vector<NodeId> none;
    const auto e = evaluate_f_i(net, none, 0, schedule, Objective::kMaximize, config, 1, &exact);
    CHECK_FALSE(e.value.has_value());
  }
  SUBCASE("every node, both objectives") {
    const auto all = all_nodes(12);
    for (auto objective : {Objective::kMaximize, Objective::kMinimize}) {
      SearchConfig exhaustive = config;
      exhaustive.exhaustive = true;
      const auto e = evaluate_f_i(net, all, 0, schedule, objective, exhaustive, 1, &exact);
      REQUIRE(e.value.has_value());
      CHECK(e.value == e.exact);
      CHECK(e.sandwich_ok == true);
      const Weight target = objective == Objective::kMaximize ? diameter(g) : radius(g);
      CHECK(Rational(target) <= *e.value);
      CHECK(*e.value <= factor * Rational(target));
      CHECK(e.charged.rounds() == e.init.rounds() + e.inner.evaluations * e.branch.rounds());
    }
  }
  // The caller's network is untouched.
  CHECK(net.ledger().rounds() == before);
}

TEST_CASE("end-to-end on small fixed graphs") {
  SUBCASE("one edge of weight 9") {
    Network net(WeightedGraph(2, {{0, 1, 9}}));
    const auto d = approx_diameter(net);
    CHECK(d.true_value == 9);
    CHECK(d.success);
    const auto r = approx_radius(net);
    CHECK(r.true_value == 9);
    CHECK(r.success);
  }
  SUBCASE("unit star") {
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= 8; ++v) edges.push_back({0, v, 1});
    Network net(WeightedGraph(9, edges), {0, 0, 2});
    const auto d = approx_diameter(net);
    CHECK(d.true_value == 2);
    CHECK(d.success);
    Network again(WeightedGraph(9, edges), {0, 0, 2});
    const auto r = approx_radius(again);
    CHECK(r.true_value == 1);
    CHECK(r.success);
  }
  SUBCASE("unit cycle of 16") {
    Network net(cycle_graph(16, {1, 1}, 0), {0, 0, 4});
    const auto d = approx_diameter(net);
    CHECK(d.true_value == 8);
    CHECK(d.success);
    CHECK(d.schedule.d_g == 8);
    CHECK(d.ledger.rounds() == net.ledger().rounds());
  }
}

TEST_CASE("charged rounds decompose into initialization plus evaluations") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Network net(random_connected(14, 0.2, {1, 10}, 1600 + seed), {0, 0, seed});
    const auto res = seed % 2 ? approx_radius(net) : approx_diameter(net);
    CHECK(res.outer.charged_rounds == res.outer.t0 + res.outer.evaluations * res.outer.t);
    CHECK(res.ledger.rounds() == res.outer.charged_rounds);
    CHECK(res.outer.evaluations <= res.outer.budget);
    CHECK(res.indices.size() == 14);
    const auto json = res.to_json();
    CHECK(json["rounds"] == res.ledger.rounds());
    CHECK(json["success"] == res.success);
  }
}

TEST_CASE("same seed, same result") {
  const auto g = random_connected(16, 0.2, {1, 10}, 1700);
  Network a(g, {0, 0, 9});
  Network b(g, {0, 0, 9});
  CHECK(approx_diameter(a).to_json().dump() == approx_diameter(b).to_json().dump());
}
