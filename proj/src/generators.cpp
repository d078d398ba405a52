#include "qcongest/generators.hpp"

#include <limits>
#include <stdexcept>

namespace qcongest {

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return lo + static_cast<std::int64_t>(x % span);
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

Weight draw_weight(std::mt19937_64& rng, WeightRange weights) {
  if (weights.lo < 1 || weights.hi < weights.lo)
    throw std::invalid_argument("weight range must satisfy 1 <= lo <= hi");
  return uniform_int(rng, weights.lo, weights.hi);
}

}  // namespace

WeightedGraph random_connected(std::size_t n, double extra_edge_prob, WeightRange weights,
                               std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_connected: n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (std::size_t v = 1; v < n; ++v) {
    const auto parent = static_cast<NodeId>(uniform_int(rng, 0, static_cast<std::int64_t>(v) - 1));
    edges.push_back({parent, static_cast<NodeId>(v), draw_weight(rng, weights)});
    present[parent][v] = present[v][parent] = true;
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (present[u][v]) continue;
      if (uniform_unit(rng) < extra_edge_prob) {
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), draw_weight(rng, weights)});
      }
    }
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph cycle_graph(std::size_t n, WeightRange weights, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>((v + 1) % n),
                     draw_weight(rng, weights)});
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph star_graph(std::size_t n, WeightRange weights, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("star_graph: n must be >= 2");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.push_back({0, static_cast<NodeId>(v), draw_weight(rng, weights)});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph grid_graph(std::size_t rows, std::size_t cols, WeightRange weights,
                         std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("grid_graph: empty grid");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), draw_weight(rng, weights)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), draw_weight(rng, weights)});
    }
  }
  return WeightedGraph(rows * cols, std::move(edges));
}

WeightedGraph path_graph(const std::vector<Weight>& weights) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), weights[i]});
  }
  return WeightedGraph(weights.size() + 1, std::move(edges));
}

}  // namespace qcongest
