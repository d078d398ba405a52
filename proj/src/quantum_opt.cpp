#include "qcongest/quantum_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qcongest/generators.hpp"
#include "qcongest/tree_programs.hpp"

namespace qcongest {

namespace {

constexpr double kGrowth = 6.0 / 5.0;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_good(const Score& value, const Score& threshold, Objective objective) {
  if (!value) return false;
  if (!threshold) return true;
  return objective == Objective::kMaximize ? *value >= *threshold : *value <= *threshold;
}

Score optimum(const std::vector<Score>& table, Objective objective) {
  Score best;
  for (const auto& v : table) {
    if (better(v, best, objective)) best = v;
  }
  return best;
}

CostLedger scaled(const CostLedger& once, std::int64_t count) {
  CostLedger out;
  for (const auto& p : once.phases()) {
    out.charge(p.name, p.rounds * count, p.messages * static_cast<std::uint64_t>(count),
               p.bits * static_cast<std::uint64_t>(count));
  }
  return out;
}

nlohmann::ordered_json score_json(const Score& s) {
  if (!s) return nullptr;
  return nlohmann::ordered_json{{"value", s->to_double()}, {"exact", s->str()}};
}

void finish(SearchTrace& trace, const SearchProblem& problem) {
  trace.value = problem.table[trace.found];
  const Score threshold = problem.threshold ? problem.threshold : optimum(problem.table, problem.objective);
  trace.success = is_good(trace.value, threshold, problem.objective);
  trace.charged_rounds = trace.t0 + trace.evaluations * trace.t;
}

SearchTrace start_trace(const SearchProblem& problem) {
  if (problem.table.empty()) throw std::invalid_argument("search: empty domain");
  if (!(problem.rho > 0.0) || problem.rho > 1.0) throw std::invalid_argument("search: rho must be in (0, 1]");
  if (!(problem.delta > 0.0) || problem.delta >= 1.0) throw std::invalid_argument("search: delta must be in (0, 1)");
  SearchTrace trace;
  trace.t0 = problem.t0;
  trace.t = problem.t;
  trace.rho = problem.rho;
  trace.delta = problem.delta;
  trace.amplification = problem.amplification;
  trace.budget = evaluation_budget(problem.rho, problem.delta, problem.amplification);
  return trace;
}

}  // namespace

bool better(const Score& a, const Score& b, Objective objective) {
  if (!a) return false;
  if (!b) return true;
  return objective == Objective::kMaximize ? *a > *b : *a < *b;
}

std::int64_t evaluation_budget(double rho, double delta, double amplification) {
  const double raw = amplification * std::sqrt(std::log(1.0 / delta) / rho);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(raw + 1e-12)));
}

SearchTrace amplified_max_search(const SearchProblem& problem, std::uint64_t seed) {
  SearchTrace trace = start_trace(problem);
  const auto& table = problem.table;
  const auto size = static_cast<std::int64_t>(table.size());
  std::mt19937_64 rng(seed);

  trace.found = static_cast<std::size_t>(uniform_int(rng, 0, size - 1));
  trace.evaluations = 1;
  if (problem.rho < 1.0) {
    const double cap = std::max(1.0, 1.0 / std::sqrt(problem.rho));
    double m = 1.0;
    std::vector<std::size_t> marked, rest;
    while (trace.evaluations < trace.budget) {
      marked.clear();
      rest.clear();
      for (std::size_t x = 0; x < table.size(); ++x) {
        (better(table[x], table[trace.found], problem.objective) ? marked : rest).push_back(x);
      }
      const std::int64_t room = trace.budget - trace.evaluations;
      const std::int64_t j = uniform_int(rng, 0, std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(m)), room) - 1);
      double p = 0.0;
      if (!marked.empty()) {
        const double theta = std::asin(std::sqrt(static_cast<double>(marked.size()) / static_cast<double>(size)));
        p = std::pow(std::sin(static_cast<double>(2 * j + 1) * theta), 2);
      }
      const auto& pool = uniform_unit(rng) < p ? marked : rest;
      const std::size_t x = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
      trace.evaluations += j + 1;
      if (better(table[x], table[trace.found], problem.objective)) {
        trace.found = x;
        m = 1.0;
      } else {
        m = std::min(m * kGrowth, cap);
      }
    }
  }
  finish(trace, problem);
  return trace;
}

SearchTrace exhaustive_search(const SearchProblem& problem) {
  SearchTrace trace = start_trace(problem);
  trace.found = 0;
  for (std::size_t x = 1; x < problem.table.size(); ++x) {
    if (better(problem.table[x], problem.table[trace.found], problem.objective)) trace.found = x;
  }
  trace.evaluations = static_cast<std::int64_t>(problem.table.size());
  trace.budget = trace.evaluations;
  finish(trace, problem);
  return trace;
}

nlohmann::ordered_json SearchTrace::to_json() const {
  return {{"evaluations", evaluations}, {"budget", budget},   {"t0", t0},
          {"t", t},                     {"charged_rounds", charged_rounds},
          {"found", found},             {"value", score_json(value)},
          {"success", success},         {"rho", rho}};
}

ParameterSchedule ParameterSchedule::make(std::size_t n, std::int64_t d_g, int max_q) {
  if (n == 0) throw std::invalid_argument("ParameterSchedule: empty network");
  ParameterSchedule s;
  const auto nn = static_cast<double>(n);
  const double log_n = std::max(1.0, std::log2(nn));
  const double d = static_cast<double>(std::max<std::int64_t>(d_g, 1));
  s.d_g = d_g;
  s.q = eps_denominator(n, max_q);
  s.r = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(std::pow(nn, 0.4) * std::pow(d, -0.2) - 1e-9)),
                                 1, static_cast<std::int64_t>(n));
  s.hops = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(nn * log_n / static_cast<double>(s.r) - 1e-9)),
                                    1, static_cast<std::int64_t>(n));
  s.k = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(d_g)) - 1e-9));
  return s;
}

nlohmann::ordered_json ParameterSchedule::to_json() const {
  return {{"eps", "1/" + std::to_string(q)}, {"r", r}, {"l", hops}, {"k", k}};
}

IndexEvaluation evaluate_f_i(const Network& base, std::span<const NodeId> skeleton, std::size_t index,
                             const ParameterSchedule& schedule, Objective objective,
                             const SearchConfig& config, std::uint64_t seed,
                             const DistanceTable* exact) {
  Network net = base;
  if (!net.has_tree()) build_bfs_tree(net);
  const std::size_t n = net.node_count();
  IndexEvaluation out;
  out.skeleton.assign(skeleton.begin(), skeleton.end());
  std::sort(out.skeleton.begin(), out.skeleton.end());

  if (out.skeleton.empty()) {
    // The leader only learns that nobody joined.
    std::vector<std::int64_t> zeros(n, 0);
    out.init = convergecast(net, zeros, Aggregate::kSum, "init").cost;
    out.charged = out.init;
    out.inner.t0 = out.init.rounds();
    out.inner.charged_rounds = out.init.rounds();
    return out;
  }

  SkeletonState state;
  const CostLedger before = net.ledger();
  try {
    MsspOptions mssp;
    mssp.salt = index;
    state = build_skeleton(net, out.skeleton, schedule.hops, schedule.q, mssp);
  } catch (const CongestionFailure&) {
    out.congestion_failed = true;
    out.init.charge("mssp", net.ledger().rounds() - before.rounds(),
                    net.ledger().messages() - before.messages(), net.ledger().bits() - before.bits());
    out.charged = out.init;
    out.inner.t0 = out.init.rounds();
    out.inner.charged_rounds = out.init.rounds();
    return out;
  }
  out.init = state.local.cost;
  out.init.merge(embed_overlay(net, state, schedule.k, "embed"));

  std::vector<CostLedger> branches;
  std::vector<std::vector<GossipItem>> members(n);
  for (NodeId s : out.skeleton) members[s].push_back({0, s, 0});
  for (NodeId s : out.skeleton) {
    CostLedger branch;
    // Leader collects the skeleton and announces the branch's source.
    branch.merge(gossip(net, members, id_bits(n), "overlay-sssp").cost);
    const std::int64_t source = s;
    branch.merge(broadcast_pipeline(net, std::span(&source, 1), "overlay-sssp").cost);
    branch.merge(sssp_on_overlay(net, state, s).cost);

    std::vector<Rational> local(n);
    std::int64_t unit = 1;
    for (std::size_t v = 0; v < n; ++v) {
      local[v] = approx_distance(state, s, static_cast<NodeId>(v));
      if (!local[v].is_finite()) throw std::logic_error("evaluate_f_i: unreachable node");
      unit = std::lcm(unit, local[v].den());
    }
    std::vector<std::int64_t> words(n);
    for (std::size_t v = 0; v < n; ++v) words[v] = local[v].scaled_to(unit);
    const auto top = convergecast(net, words, Aggregate::kMax, "eval", WordPolicy::kFragment);
    branch.merge(top.cost);
    out.eccentricity.push_back(Rational(top.value, unit));
    branches.push_back(std::move(branch));
  }

  if (exact && config.check_sandwich) {
    const Rational factor = sandwich_factor(schedule.q);
    bool ok = true;
    for (NodeId s : out.skeleton) {
      for (std::size_t v = 0; v < n && ok; ++v) {
        const Rational d(exact->at(s, static_cast<NodeId>(v)).value());
        const Rational a = approx_distance(state, s, static_cast<NodeId>(v));
        ok = d <= a && a <= d * factor;
      }
    }
    out.sandwich_ok = ok;
  }

  // Branches run in superposition, so one evaluation costs the slowest
  // branch, twice for the inverse.
  const auto slowest = std::max_element(branches.begin(), branches.end(),
                                        [](const CostLedger& a, const CostLedger& b) { return a.rounds() < b.rounds(); });
  out.branch = scaled(*slowest, 2);

  SearchProblem inner;
  inner.table.assign(out.eccentricity.begin(), out.eccentricity.end());
  inner.objective = objective;
  inner.t0 = out.init.rounds();
  inner.t = out.branch.rounds();
  inner.delta = config.delta;
  inner.amplification = config.amplification;
  out.exact = optimum(inner.table, objective);
  const auto hits = std::count(inner.table.begin(), inner.table.end(), out.exact);
  inner.rho = static_cast<double>(hits) / static_cast<double>(inner.table.size());
  out.inner = config.exhaustive ? exhaustive_search(inner) : amplified_max_search(inner, mix(seed, index));
  out.value = out.inner.value;
  out.charged = out.init;
  out.charged.merge(scaled(out.branch, out.inner.evaluations));
  return out;
}

ApproxResult approx_eccentricity_extremum(Network& net, Objective objective, const SearchConfig& config) {
  const auto& g = net.topology();
  const std::size_t n = g.node_count();
  ApproxResult result;
  result.objective = objective;
  result.n = n;

  CostLedger init;
  if (!net.has_tree()) init.merge(build_bfs_tree(net, "init"));
  result.schedule = ParameterSchedule::make(n, unweighted_diameter(g), config.max_q);
  const auto& schedule = result.schedule;

  const DistanceTable exact = all_pairs(g);
  const auto ecc = eccentricities(g);
  result.true_value = objective == Objective::kMaximize ? *std::max_element(ecc.begin(), ecc.end())
                                                        : *std::min_element(ecc.begin(), ecc.end());
  const Rational factor = sandwich_factor(schedule.q);
  const Score threshold = objective == Objective::kMaximize ? Rational(result.true_value)
                                                            : Rational(result.true_value) * factor;

  // Good-Scale: some node of extremal eccentricity joins at least one set.
  std::vector<std::vector<NodeId>> sets;
  for (int attempt = 0;; ++attempt) {
    sets = sample_skeleton_sets(net, schedule.r, n, static_cast<std::uint64_t>(attempt));
    std::vector<char> joined(n, 0);
    for (const auto& s : sets) {
      for (NodeId v : s) joined[v] = 1;
    }
    bool witnessed = false;
    for (std::size_t v = 0; v < n; ++v) witnessed |= joined[v] && ecc[v] == result.true_value;
    if (witnessed || attempt >= config.max_resamples) break;
    ++result.resamples;
  }

  SearchProblem outer;
  outer.objective = objective;
  outer.delta = config.delta;
  outer.amplification = config.amplification;
  outer.threshold = threshold;
  for (std::size_t i = 0; i < n; ++i) {
    result.indices.push_back(evaluate_f_i(net, sets[i], i, schedule, objective, config,
                                          mix(net.seed(), 0x5eed), &exact));
    const auto& e = result.indices.back();
    outer.table.push_back(e.value);
    if (e.sandwich_ok && !*e.sandwich_ok) result.sandwich_ok = false;
    if (is_good(e.value, threshold, objective)) ++result.good_indices;
  }
  if (result.good_indices > 0) {
    outer.rho = static_cast<double>(result.good_indices) / static_cast<double>(n);
  } else {
    result.rho_fallback = true;
    outer.rho = static_cast<double>(schedule.r) / static_cast<double>(n);
  }

  const auto slowest = std::max_element(result.indices.begin(), result.indices.end(),
                                        [](const IndexEvaluation& a, const IndexEvaluation& b) {
                                          return a.charged.rounds() < b.charged.rounds();
                                        });
  const CostLedger per_evaluation = scaled(slowest->charged, 2);
  outer.t0 = init.rounds();
  outer.t = per_evaluation.rounds();
  result.outer = config.exhaustive ? exhaustive_search(outer) : amplified_max_search(outer, mix(net.seed(), 0x0a7e));
  result.estimate = result.outer.value;
  result.success = result.estimate && Rational(result.true_value) <= *result.estimate &&
                   *result.estimate <= Rational(result.true_value) * factor;
  result.ledger = init;
  result.ledger.merge(scaled(per_evaluation, result.outer.evaluations));
  net.replay(scaled(per_evaluation, result.outer.evaluations));
  return result;
}

ApproxResult approx_diameter(Network& net, const SearchConfig& config) {
  return approx_eccentricity_extremum(net, Objective::kMaximize, config);
}

ApproxResult approx_radius(Network& net, const SearchConfig& config) {
  return approx_eccentricity_extremum(net, Objective::kMinimize, config);
}

nlohmann::ordered_json ApproxResult::to_json() const {
  nlohmann::ordered_json out;
  out["objective"] = objective == Objective::kMaximize ? "diameter" : "radius";
  out["n"] = n;
  out["D_G"] = schedule.d_g;
  out["params"] = schedule.to_json();
  out["estimate"] = score_json(estimate);
  out["true_value"] = true_value;
  out["ratio"] = estimate ? nlohmann::ordered_json(estimate->to_double() / static_cast<double>(std::max<Weight>(true_value, 1)))
                          : nlohmann::ordered_json(nullptr);
  out["rounds"] = ledger.rounds();
  out["evaluations"] = outer.evaluations;
  out["success"] = success;
  out["good_indices"] = good_indices;
  out["rho_fallback"] = rho_fallback;
  out["resamples"] = resamples;
  out["sandwich_ok"] = sandwich_ok;
  out["search"] = outer.to_json();
  out["ledger"] = ledger.to_json();
  return out;
}

}  // namespace qcongest
