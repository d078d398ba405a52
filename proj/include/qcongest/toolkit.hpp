#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcongest/engine.hpp"
#include "qcongest/rational.hpp"

namespace qcongest {

/// Accuracy is eps = 1/q. q = clamp(ceil(log2 n), 1, max_q); max_q = 16 keeps
/// eps >= 1/16 at small n.
int eps_denominator(std::size_t n, int max_q = 16);
inline Rational epsilon_of(int q) { return Rational(1, q); }
/// (1 + eps)^2 as an exact fraction.
Rational sandwich_factor(int q, int power = 2);

/// Weight rounding for approximate bounded-hop distances: at level i every
/// edge weight w becomes ceil(2 * hops * w / (eps * 2^i)), and a level
/// distance d translates back to d * eps * 2^i / (2 * hops).
struct RoundingScheme {
  std::int64_t hops = 1;
  int q = 1;
  int levels = 1;           // levels 0 .. levels-1
  std::int64_t budget = 0;  // (1 + 2/eps) * hops

  static RoundingScheme make(std::size_t n, Rational max_weight, std::int64_t hops, int q);

  std::int64_t weight(const Rational& w, int level) const;
  Rational value(std::int64_t d, int level) const;
  /// Rounds one level of bounded-distance search takes.
  std::int64_t level_rounds() const { return budget + 1; }
  std::int64_t total_rounds() const { return levels * level_rounds(); }
};

class CongestionFailure : public std::runtime_error {
 public:
  CongestionFailure(NodeId node, Round round, std::size_t copies, std::size_t limit);
  NodeId node() const { return node_; }
  std::size_t copies() const { return copies_; }

 private:
  NodeId node_;
  std::size_t copies_;
};

struct BoundedDistanceRun {
  std::vector<Distance> distance;
  CostLedger cost;
};

/// Bounded-distance SSSP: exactly budget + 1 rounds; node v broadcasts once,
/// in the round equal to its distance. Distances above `budget` stay INFINITE.
/// `weights` must have the same edge set as the network topology.
BoundedDistanceRun bounded_distance_sssp(Network& net, const WeightedGraph& weights, NodeId s,
                                         std::int64_t budget,
                                         std::string_view phase = "bounded-distance");

struct ApproxSsspRun {
  std::vector<Rational> approx;  // d~^hops(s, v)
  RoundingScheme scheme;
  CostLedger cost;
};

/// Bounded-hop SSSP by weight rounding: one bounded-distance search per level,
/// back to back, keeping the smallest translated distance.
ApproxSsspRun bounded_hop_sssp(Network& net, NodeId s, std::int64_t hops, int q,
                               std::string_view phase = "bounded-hop");

struct MsspOptions {
  int max_retries = 3;
  /// Distinguishes the delay draws of unrelated calls on one network.
  std::uint64_t salt = 0;
  std::string phase = "mssp";
};

struct MsspRun {
  std::vector<NodeId> sources;               // sorted
  std::vector<std::vector<Rational>> approx;  // [source index][node]
  RoundingScheme scheme;
  std::int64_t slot = 1;  // sub-rounds per scheduled round, ceil(log2 n)
  int attempts = 0;
  CostLedger cost;

  std::size_t index_of(NodeId s) const;
  const std::vector<Rational>& from(NodeId s) const { return approx[index_of(s)]; }
};

/// Multi-source bounded-hop SSSP by random delays: one copy of bounded_hop_sssp
/// per source, copy j shifted by a delay in [0, |S| * slot]. Each scheduled
/// round is stretched to `slot` sub-rounds; a node whose copies need more
/// than `slot` broadcasts in one scheduled round fails the attempt. Failed
/// attempts are retried with fresh delays and are charged in full.
MsspRun bounded_hop_mssp(Network& net, std::span<const NodeId> sources, std::int64_t hops, int q,
                         const MsspOptions& options = {});

/// Each node joins each of `count` sets independently with probability r / n,
/// from its own random stream. Node-local; charges nothing. A different
/// `salt` gives an independent family.
std::vector<std::vector<NodeId>> sample_skeleton_sets(const Network& net, std::int64_t r,
                                                      std::size_t count, std::uint64_t salt = 0);

}  // namespace qcongest
