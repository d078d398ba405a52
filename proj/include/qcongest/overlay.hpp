#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "qcongest/engine.hpp"
#include "qcongest/rational.hpp"
#include "qcongest/toolkit.hpp"

namespace qcongest {

/// One skeleton set and everything computed on top of it. Pairs of skeleton
/// nodes are addressed by their index in `skeleton`.
struct SkeletonState {
  std::vector<NodeId> skeleton;  // sorted
  std::int64_t hops = 1;
  int q = 1;
  std::int64_t k = 0;

  MsspRun local;  // d~^hops(u, v) for u in the skeleton, every node v
  /// Skeleton overlay G': complete graph weighted by d~^hops (INFINITE = no edge).
  std::vector<std::vector<Rational>> overlay;
  /// N^k of every skeleton node, ordered by (distance, id); filled by embedding.
  std::vector<std::vector<std::size_t>> nearest;
  /// Shortcut overlay G'': overlay distances on k-nearest pairs, G' elsewhere.
  std::vector<std::vector<Rational>> shortcut;
  bool embedded = false;
  /// d~ on G'' from a source (by node id), over skeleton indices.
  std::map<NodeId, std::vector<Rational>> from_source;

  std::size_t size() const { return skeleton.size(); }
  std::size_t index_of(NodeId v) const;
  bool contains(NodeId v) const;
};

/// Runs multi-source bounded-hop SSSP from `skeleton` and builds G'.
SkeletonState build_skeleton(Network& net, std::span<const NodeId> skeleton, std::int64_t hops,
                             int q, const MsspOptions& options = {});

/// Every skeleton node broadcasts its k lightest overlay edges; every node then
/// derives N^k and the shortcut weights locally. Ties go by (weight, id).
CostLedger embed_overlay(Network& net, SkeletonState& state, std::int64_t k,
                         std::string_view phase = "embed");

/// Hop bound used on the shortcut overlay: ceil(4|S|/k), or |S|-1 for k = 0.
std::int64_t overlay_hop_bound(std::size_t skeleton_size, std::int64_t k);

struct OverlaySsspRun {
  std::vector<Rational> approx;  // over skeleton indices
  RoundingScheme scheme;
  std::int64_t overlay_rounds = 0;
  std::int64_t busy_rounds = 0;  // overlay rounds in which somebody broadcast
  CostLedger cost;
};

/// Bounded-hop SSSP on G'' from skeleton node s. Each overlay round first
/// makes the number of broadcasting overlay nodes known everywhere, then the
/// broadcasters' messages are gossiped over the physical network. The result
/// is stored in state.from_source[s].
OverlaySsspRun sssp_on_overlay(Network& net, SkeletonState& state, NodeId s,
                               std::string_view phase = "overlay-sssp");

/// min over skeleton u of d~_{G''}(s, u) + d~^hops(u, v). Node-local.
Rational approx_distance(const SkeletonState& state, NodeId s, NodeId v);
/// max over all nodes v of approx_distance(s, v).
Rational approx_eccentricity(const SkeletonState& state, NodeId s);

/// Smallest unit such that every overlay weight is an integer multiple of 1/unit.
std::int64_t overlay_unit(const SkeletonState& state);
/// A skeleton weight table as an integer graph on skeleton indices, weights
/// scaled by `unit`. Missing edges are left out.
WeightedGraph scaled_overlay_graph(const std::vector<std::vector<Rational>>& weights,
                                   std::int64_t unit);

}  // namespace qcongest
