#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcongest {

using NodeId = std::int32_t;
using Weight = std::int64_t;

/// Nonnegative integer distance or INFINITE. Addition saturates.
class Distance {
 public:
  constexpr Distance() = default;
  constexpr Distance(Weight value) : value_(value) {}  // NOLINT

  static constexpr Distance infinite() { return Distance(kInfinite); }

  constexpr bool is_finite() const { return value_ != kInfinite; }
  constexpr Weight value() const {
    if (!is_finite()) throw std::domain_error("Distance::value of INFINITE");
    return value_;
  }

  friend constexpr Distance operator+(Distance a, Distance b) {
    if (!a.is_finite() || !b.is_finite()) return infinite();
    if (a.value_ > kInfinite - 1 - b.value_) return infinite();
    return Distance(a.value_ + b.value_);
  }

  friend constexpr bool operator==(Distance, Distance) = default;
  friend constexpr std::strong_ordering operator<=>(Distance a, Distance b) {
    return a.value_ <=> b.value_;
  }

  std::string str() const { return is_finite() ? std::to_string(value_) : "inf"; }

 private:
  static constexpr Weight kInfinite = std::numeric_limits<Weight>::max();
  Weight value_ = 0;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Weight w = 1;
};

struct Neighbor {
  NodeId node = 0;
  Weight weight = 1;
};

class DisconnectedGraph : public std::invalid_argument {
 public:
  DisconnectedGraph(const std::string& what, std::vector<std::vector<NodeId>> components)
      : std::invalid_argument(what), components_(std::move(components)) {}
  const std::vector<std::vector<NodeId>>& components() const { return components_; }

 private:
  std::vector<std::vector<NodeId>> components_;
};

/// Undirected graph on nodes 0..n-1 with positive integer edge weights.
/// Construction validates weights, rejects self-loops and duplicate pairs,
/// and (by default) rejects disconnected inputs.
class WeightedGraph {
 public:
  enum class Connectivity { kRequire, kAllowDisconnected };

  WeightedGraph() = default;
  WeightedGraph(std::size_t node_count, std::vector<Edge> edges,
                Connectivity connectivity = Connectivity::kRequire);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  Weight max_weight() const { return max_weight_; }
  std::optional<Weight> weight(NodeId u, NodeId v) const;
  bool contains(NodeId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < node_count();
  }
  void check_node(NodeId v) const;

  /// Same topology with every weight replaced by f(weight).
  template <typename F>
  WeightedGraph reweighted(F&& f) const {
    std::vector<Edge> out = edges_;
    for (auto& e : out) e.w = f(e.w);
    return WeightedGraph(node_count(), std::move(out), Connectivity::kAllowDisconnected);
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  Weight max_weight_ = 0;
};

/// Connected components, each sorted, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(std::size_t node_count,
                                                      std::span<const Edge> edges);

/// Distances from a set of sources to every node.
class DistanceTable {
 public:
  DistanceTable(std::vector<NodeId> sources, std::size_t node_count);

  const std::vector<NodeId>& sources() const { return sources_; }
  std::size_t node_count() const { return node_count_; }
  bool has_source(NodeId s) const;

  Distance at(NodeId source, NodeId v) const;
  Distance& at(NodeId source, NodeId v);
  std::span<const Distance> row(NodeId source) const;

 private:
  std::size_t index_of(NodeId source) const;

  std::vector<NodeId> sources_;
  std::vector<std::int32_t> source_index_;
  std::size_t node_count_;
  std::vector<Distance> data_;
};

// Exact oracles.

DistanceTable exact_sssp(const WeightedGraph& g, NodeId s);
DistanceTable all_pairs(const WeightedGraph& g);

/// Least length over paths with at most `hops` edges, by `hops` rounds of
/// synchronous edge relaxation.
DistanceTable exact_bounded_hop(const WeightedGraph& g, NodeId s, std::int64_t hops);

/// Minimum edge count among shortest paths from s.
std::vector<std::int64_t> hop_distances(const WeightedGraph& g, NodeId s);

std::vector<Weight> eccentricities(const WeightedGraph& g);
Weight eccentricity(const WeightedGraph& g, NodeId u);
Weight diameter(const WeightedGraph& g);
Weight radius(const WeightedGraph& g);
std::int64_t hop_diameter(const WeightedGraph& g);

/// BFS hop counts from s, ignoring weights.
std::vector<std::int64_t> unweighted_distances(const WeightedGraph& g, NodeId s);
/// D_G: the diameter of the communication graph with unit weights.
std::int64_t unweighted_diameter(const WeightedGraph& g);

struct Contraction {
  WeightedGraph graph;
  /// node_map[v] is the contracted node containing v.
  std::vector<NodeId> node_map;
};

/// Merges the endpoints of every weight-1 edge; parallel edges keep the
/// minimum weight and self-loops vanish.
Contraction contract_unit_edges(const WeightedGraph& g);

}  // namespace qcongest
