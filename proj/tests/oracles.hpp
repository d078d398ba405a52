#pragma once

// Independent reference computations used only by the tests. None of them
// call into the library's own distance code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qcongest/graph.hpp"
#include "qcongest/rational.hpp"

namespace oracle {

using qcongest::NodeId;
using qcongest::WeightedGraph;

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

/// Cubic all-pairs relaxation.
inline std::vector<std::vector<std::int64_t>> floyd_warshall(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, kInf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.w);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Same relaxation over (length, edge count) pairs: the second entry is the
/// fewest edges among shortest paths.
inline std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> floyd_warshall_hops(
    const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  using P = std::pair<std::int64_t, std::int64_t>;
  std::vector<std::vector<P>> d(n, std::vector<P>(n, P{kInf, kInf}));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = {0, 0};
  for (const auto& e : g.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], P{e.w, 1});
    d[e.v][e.u] = std::min(d[e.v][e.u], P{e.w, 1});
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k].first >= kInf || d[k][j].first >= kInf) continue;
        const P via{d[i][k].first + d[k][j].first, d[i][k].second + d[k][j].second};
        if (via < d[i][j]) d[i][j] = via;
      }
  return d;
}

inline std::int64_t hop_diameter(const WeightedGraph& g) {
  std::int64_t h = 0;
  for (const auto& row : floyd_warshall_hops(g))
    for (const auto& p : row) h = std::max(h, p.second);
  return h;
}

/// Least length over simple paths from s with at most `hops` edges, by
/// explicit depth-first enumeration. Exponential; small graphs only.
inline std::vector<std::int64_t> bounded_hop_by_enumeration(const WeightedGraph& g, NodeId s,
                                                            std::int64_t hops) {
  const std::size_t n = g.node_count();
  std::vector<std::int64_t> best(n, kInf);
  std::vector<char> on_path(n, 0);
  std::function<void(NodeId, std::int64_t, std::int64_t)> walk = [&](NodeId v, std::int64_t len,
                                                                     std::int64_t used) {
    best[v] = std::min(best[v], len);
    if (used == hops) return;
    on_path[v] = 1;
    for (const auto& nb : g.neighbors(v)) {
      if (!on_path[nb.node]) walk(nb.node, len + nb.weight, used + 1);
    }
    on_path[v] = 0;
  };
  walk(s, 0, 0);
  return best;
}

/// Same quantity by `hops` synchronous relaxation sweeps over walks; with
/// positive weights a shortest walk is a simple path.
inline std::vector<std::int64_t> bounded_hop_bellman_ford(const WeightedGraph& g, NodeId s,
                                                          std::int64_t hops) {
  std::vector<std::int64_t> d(g.node_count(), kInf);
  d[s] = 0;
  for (std::int64_t round = 0; round < hops; ++round) {
    auto next = d;
    for (const auto& e : g.edges()) {
      if (d[e.u] < kInf) next[e.v] = std::min(next[e.v], d[e.u] + e.w);
      if (d[e.v] < kInf) next[e.u] = std::min(next[e.u], d[e.v] + e.w);
    }
    d = std::move(next);
  }
  return d;
}

inline std::vector<std::int64_t> bfs_hops(const WeightedGraph& g, NodeId s) {
  std::vector<std::int64_t> d(g.node_count(), -1);
  std::vector<NodeId> queue{s};
  d[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (const auto& nb : g.neighbors(v)) {
      if (d[nb.node] < 0) {
        d[nb.node] = d[v] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return d;
}

/// Sequential k-shortcut construction on a dense overlay weight table
/// (infinite entries are missing edges): exact overlay distances by
/// relaxation, N^k by (distance, index), and the shortcut table.
struct Shortcut {
  std::vector<std::vector<std::size_t>> nearest;
  std::vector<std::vector<qcongest::Rational>> weights;
  std::vector<std::vector<qcongest::Rational>> overlay_distance;
};

inline Shortcut k_shortcut(const std::vector<std::vector<qcongest::Rational>>& w, std::size_t k) {
  using qcongest::Rational;
  const std::size_t m = w.size();
  Shortcut out;
  auto d = w;
  for (std::size_t v = 0; v < m; ++v) d[v][v] = Rational(0);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (d[i][x] + d[x][j] < d[i][j]) d[i][j] = d[i][x] + d[x][j];
  out.overlay_distance = d;
  out.nearest.assign(m, {});
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<std::pair<Rational, std::size_t>> order;
    for (std::size_t b = 0; b < m; ++b) {
      if (b != a && d[a][b].is_finite()) order.push_back({d[a][b], b});
    }
    std::sort(order.begin(), order.end());
    for (std::size_t t = 0; t < std::min(k, order.size()); ++t) out.nearest[a].push_back(order[t].second);
  }
  out.weights = w;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b : out.nearest[a]) {
      out.weights[a][b] = d[a][b];
      out.weights[b][a] = d[a][b];
    }
  }
  return out;
}

/// Rounds for a leader to push `items` words down a rooted tree when each
/// tree edge carries one word per round: simulated queue by queue.
inline std::int64_t pipelined_broadcast_rounds(const std::vector<NodeId>& parent, NodeId root,
                                               std::size_t items) {
  const std::size_t n = parent.size();
  if (items == 0) return 0;
  std::vector<std::size_t> held(n, 0);
  held[root] = items;
  std::int64_t rounds = 0;
  auto all_done = [&] {
    return std::all_of(held.begin(), held.end(), [&](std::size_t h) { return h == items; });
  };
  while (!all_done()) {
    ++rounds;
    auto next = held;
    for (std::size_t v = 0; v < n; ++v) {
      if (parent[v] < 0) continue;
      const std::size_t p = static_cast<std::size_t>(parent[v]);
      if (held[p] > held[v]) next[v] = held[v] + 1;  // one word per edge per round
    }
    held = std::move(next);
  }
  return rounds;
}

}  // namespace oracle
