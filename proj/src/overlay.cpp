#include "qcongest/overlay.hpp"

#include <algorithm>
#include <numeric>

#include "qcongest/tree_programs.hpp"

namespace qcongest {

namespace {

struct DenseSearch {
  std::vector<Rational> dist;
  std::vector<std::size_t> order;  // settled order, ties by index
};

/// Dijkstra on a dense symmetric weight table; INFINITE entries are absent edges.
DenseSearch dense_dijkstra(const std::vector<std::vector<Rational>>& w, std::size_t source) {
  const std::size_t m = w.size();
  DenseSearch out;
  out.dist.assign(m, Rational::infinite());
  std::vector<char> settled(m, 0);
  out.dist[source] = Rational(0);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = m;
    for (std::size_t v = 0; v < m; ++v) {
      if (!settled[v] && out.dist[v].is_finite() && (best == m || out.dist[v] < out.dist[best])) best = v;
    }
    if (best == m) break;
    settled[best] = 1;
    out.order.push_back(best);
    for (std::size_t v = 0; v < m; ++v) {
      if (settled[v] || !w[best][v].is_finite()) continue;
      const Rational nd = out.dist[best] + w[best][v];
      if (nd < out.dist[v]) out.dist[v] = nd;
    }
  }
  return out;
}

/// Exact distances in the graph with weights rounded for one level, capped at budget.
std::vector<std::int64_t> rounded_level_distances(const std::vector<std::vector<Rational>>& w,
                                                  const RoundingScheme& scheme, int level,
                                                  std::size_t source) {
  const std::size_t m = w.size();
  constexpr std::int64_t kOff = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(m, kOff);
  std::vector<char> settled(m, 0);
  dist[source] = 0;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = m;
    for (std::size_t v = 0; v < m; ++v) {
      if (!settled[v] && dist[v] != kOff && (best == m || dist[v] < dist[best])) best = v;
    }
    if (best == m) break;
    settled[best] = 1;
    for (std::size_t v = 0; v < m; ++v) {
      if (settled[v] || !w[best][v].is_finite()) continue;
      const std::int64_t nd = dist[best] + scheme.weight(w[best][v], level);
      if (nd <= scheme.budget && nd < dist[v]) dist[v] = nd;
    }
  }
  return dist;
}

CostLedger times(const CostLedger& once, std::int64_t count) {
  CostLedger out;
  for (const auto& p : once.phases()) {
    out.charge(p.name, p.rounds * count, p.messages * static_cast<std::uint64_t>(count),
               p.bits * static_cast<std::uint64_t>(count));
  }
  return out;
}

}  // namespace

std::size_t SkeletonState::index_of(NodeId v) const {
  auto it = std::lower_bound(skeleton.begin(), skeleton.end(), v);
  if (it == skeleton.end() || *it != v) throw std::out_of_range("node is not in the skeleton");
  return static_cast<std::size_t>(it - skeleton.begin());
}

bool SkeletonState::contains(NodeId v) const {
  return std::binary_search(skeleton.begin(), skeleton.end(), v);
}

SkeletonState build_skeleton(Network& net, std::span<const NodeId> skeleton, std::int64_t hops,
                             int q, const MsspOptions& options) {
  SkeletonState state;
  state.hops = hops;
  state.q = q;
  state.local = bounded_hop_mssp(net, skeleton, hops, q, options);
  state.skeleton = state.local.sources;
  const std::size_t m = state.size();
  state.overlay.assign(m, std::vector<Rational>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) state.overlay[a][b] = state.local.approx[a][state.skeleton[b]];
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (state.overlay[a][b] != state.overlay[b][a])
        throw std::logic_error("build_skeleton: asymmetric bounded-hop distances");
    }
  }
  return state;
}

CostLedger embed_overlay(Network& net, SkeletonState& state, std::int64_t k, std::string_view phase) {
  if (k < 0) throw std::invalid_argument("embed_overlay: k must be >= 0");
  const std::size_t m = state.size();
  state.k = k;
  state.shortcut = state.overlay;
  state.nearest.assign(m, {});
  state.embedded = true;
  if (m < 2 || k == 0) return {};

  const std::int64_t unit = 2 * state.hops * state.q;
  std::vector<std::vector<GossipItem>> items(net.node_count());
  std::int64_t widest = 0;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<std::size_t> others;
    for (std::size_t b = 0; b < m; ++b) {
      if (b != a && state.overlay[a][b].is_finite()) others.push_back(b);
    }
    const auto take = std::min<std::size_t>(others.size(), static_cast<std::size_t>(k));
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(take), others.end(),
                      [&](std::size_t x, std::size_t y) {
                        if (state.overlay[a][x] != state.overlay[a][y])
                          return state.overlay[a][x] < state.overlay[a][y];
                        return x < y;
                      });
    for (std::size_t t = 0; t < take; ++t) {
      const std::int64_t scaled = state.overlay[a][others[t]].scaled_to(unit);
      widest = std::max(widest, scaled);
      items[state.skeleton[a]].push_back(
          {static_cast<std::uint32_t>(state.skeleton[a]), scaled, state.skeleton[others[t]]});
    }
  }
  const std::uint32_t item_bits = 2 * id_bits(net.node_count()) +
                                  bit_width_of(static_cast<std::uint64_t>(widest));
  auto heard = gossip(net, items, item_bits, phase);

  // Everybody now holds the same light-edge graph and derives N^k from it.
  std::vector<std::vector<Rational>> light(m, std::vector<Rational>(m, Rational::infinite()));
  for (const auto& item : heard.items) {
    const std::size_t a = state.index_of(static_cast<NodeId>(item.channel));
    const std::size_t b = state.index_of(static_cast<NodeId>(item.aux));
    const Rational w(item.payload, unit);
    light[a][b] = std::min(light[a][b], w);
    light[b][a] = std::min(light[b][a], w);
  }
  for (std::size_t a = 0; a < m; ++a) {
    const auto search = dense_dijkstra(light, a);
    for (std::size_t b : search.order) {
      if (b == a) continue;
      if (state.nearest[a].size() == static_cast<std::size_t>(k)) break;
      state.nearest[a].push_back(b);
      state.shortcut[a][b] = std::min(state.shortcut[a][b], search.dist[b]);
      state.shortcut[b][a] = state.shortcut[a][b];
    }
  }
  return heard.cost;
}

std::int64_t overlay_hop_bound(std::size_t skeleton_size, std::int64_t k) {
  const auto m = static_cast<std::int64_t>(skeleton_size);
  if (k <= 0) return std::max<std::int64_t>(1, m - 1);
  return std::max<std::int64_t>(1, (4 * m + k - 1) / k);
}

OverlaySsspRun sssp_on_overlay(Network& net, SkeletonState& state, NodeId s, std::string_view phase) {
  if (!state.embedded) throw std::logic_error("sssp_on_overlay: overlay not embedded");
  const std::size_t source = state.index_of(s);
  const std::size_t m = state.size();
  OverlaySsspRun run;
  run.approx.assign(m, Rational::infinite());
  run.approx[source] = Rational(0);
  if (m == 1) {
    state.from_source[s] = run.approx;
    return run;
  }

  Rational widest(1);
  for (const auto& row : state.shortcut) {
    for (const auto& w : row) {
      if (w.is_finite()) widest = std::max(widest, w);
    }
  }
  const std::int64_t hops = overlay_hop_bound(m, state.k);
  run.scheme = RoundingScheme::make(m, widest, hops, state.q);
  run.overlay_rounds = run.scheme.total_rounds();

  const std::size_t n = net.node_count();
  const std::uint32_t item_bits =
      id_bits(n) + bit_width_of(static_cast<std::uint64_t>(run.scheme.budget));
  std::optional<CostLedger> count_once;

  for (int level = 0; level < run.scheme.levels; ++level) {
    const auto dist = rounded_level_distances(state.shortcut, run.scheme, level, source);
    std::vector<std::vector<std::size_t>> speakers(static_cast<std::size_t>(run.scheme.budget) + 1);
    for (std::size_t u = 0; u < m; ++u) {
      if (dist[u] <= run.scheme.budget) {
        speakers[static_cast<std::size_t>(dist[u])].push_back(u);
        run.approx[u] = std::min(run.approx[u], run.scheme.value(dist[u], level));
      }
    }
    for (const auto& now : speakers) {
      if (!count_once) {
        // Count the speakers and tell everyone. The schedule of this step
        // does not depend on the count, so later rounds replay its cost.
        std::vector<std::int64_t> flags(n, 0);
        for (std::size_t u : now) flags[state.skeleton[u]] = 1;
        CostLedger once;
        const auto summed = convergecast(net, flags, Aggregate::kSum, phase, WordPolicy::kFragment);
        once.merge(summed.cost);
        const std::int64_t a = summed.value;
        once.merge(broadcast_pipeline(net, std::span(&a, 1), phase, WordPolicy::kFragment).cost);
        run.cost.merge(once);
        count_once = once;
      }
      if (now.empty()) continue;
      ++run.busy_rounds;
      std::vector<std::vector<GossipItem>> items(n);
      for (std::size_t u : now) {
        items[state.skeleton[u]].push_back({0, dist[u], state.skeleton[u]});
      }
      auto heard = gossip(net, items, item_bits, phase);
      if (heard.items.size() != now.size()) throw std::logic_error("sssp_on_overlay: lost a message");
      run.cost.merge(heard.cost);
    }
  }
  const auto rest = times(*count_once, run.overlay_rounds - 1);
  net.replay(rest);
  run.cost.merge(rest);
  state.from_source[s] = run.approx;
  return run;
}

Rational approx_distance(const SkeletonState& state, NodeId s, NodeId v) {
  auto it = state.from_source.find(s);
  if (it == state.from_source.end())
    throw std::out_of_range("approx_distance: no overlay table for source " + std::to_string(s));
  Rational best = Rational::infinite();
  for (std::size_t u = 0; u < state.size(); ++u) {
    best = std::min(best, it->second[u] + state.local.approx[u][v]);
  }
  return best;
}

Rational approx_eccentricity(const SkeletonState& state, NodeId s) {
  const std::size_t n = state.local.approx.empty() ? 0 : state.local.approx[0].size();
  Rational e(0);
  for (std::size_t v = 0; v < n; ++v) e = std::max(e, approx_distance(state, s, static_cast<NodeId>(v)));
  return e;
}

std::int64_t overlay_unit(const SkeletonState& state) {
  std::int64_t unit = 1;
  for (const auto* table : {&state.overlay, &state.shortcut}) {
    for (const auto& row : *table) {
      for (const auto& w : row) {
        if (w.is_finite()) unit = std::lcm(unit, w.den());
      }
    }
  }
  return unit;
}

WeightedGraph scaled_overlay_graph(const std::vector<std::vector<Rational>>& weights,
                                   std::int64_t unit) {
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < weights.size(); ++a) {
    for (std::size_t b = a + 1; b < weights.size(); ++b) {
      if (weights[a][b].is_finite()) {
        edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), weights[a][b].scaled_to(unit)});
      }
    }
  }
  return WeightedGraph(weights.size(), std::move(edges), WeightedGraph::Connectivity::kAllowDisconnected);
}

}  // namespace qcongest
