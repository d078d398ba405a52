#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qcongest/graph.hpp"

namespace qcongest {

struct WeightRange {
  Weight lo = 1;
  Weight hi = 10;
};

/// Portable uniform integer in [lo, hi] (std distributions differ across
/// standard libraries; reports must be byte-identical).
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);
/// Portable uniform double in [0, 1).
double uniform_unit(std::mt19937_64& rng);

/// Random spanning tree plus each remaining pair independently with
/// probability `extra_edge_prob`.
WeightedGraph random_connected(std::size_t n, double extra_edge_prob, WeightRange weights,
                               std::uint64_t seed);
WeightedGraph cycle_graph(std::size_t n, WeightRange weights, std::uint64_t seed);
/// Node 0 is the center.
WeightedGraph star_graph(std::size_t n, WeightRange weights, std::uint64_t seed);
/// rows x cols grid, row-major ids.
WeightedGraph grid_graph(std::size_t rows, std::size_t cols, WeightRange weights,
                         std::uint64_t seed);
WeightedGraph path_graph(const std::vector<Weight>& weights);

}  // namespace qcongest
