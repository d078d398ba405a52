#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qcongest/engine.hpp"

namespace qcongest {

enum class Aggregate { kMax, kMin, kSum };

/// kStrict rejects words wider than B bits; kFragment dilates the run.
enum class WordPolicy { kStrict, kFragment };

class WordTooWide : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Floods from the leader; ties between same-round offers go to the smaller
/// id. Stores the tree in the network. Rounds = ecc(leader) + 1.
CostLedger build_bfs_tree(Network& net, std::string_view phase = "init");

struct BroadcastResult {
  CostLedger cost;
  std::vector<std::vector<std::int64_t>> received;  // per node, in order
};

/// Leader pushes `items` down the BFS tree, one item per tree edge per round.
BroadcastResult broadcast_pipeline(Network& net, std::span<const std::int64_t> items,
                                   std::string_view phase = "broadcast",
                                   WordPolicy policy = WordPolicy::kStrict);

struct ConvergecastResult {
  std::int64_t value = 0;
  CostLedger cost;
};

/// Combines one nonnegative value per node up the BFS tree to the leader.
ConvergecastResult convergecast(Network& net, std::span<const std::int64_t> values, Aggregate op,
                                std::string_view phase = "convergecast",
                                WordPolicy policy = WordPolicy::kStrict);

inline ConvergecastResult convergecast_extremum(Network& net, std::span<const std::int64_t> values,
                                                Aggregate mode,
                                                std::string_view phase = "convergecast",
                                                WordPolicy policy = WordPolicy::kStrict) {
  if (mode == Aggregate::kSum) throw std::invalid_argument("convergecast_extremum: max or min only");
  return convergecast(net, values, mode, phase, policy);
}

struct GossipItem {
  std::uint32_t channel = 0;
  std::int64_t payload = 0;
  std::int64_t aux = 0;

  friend bool operator==(const GossipItem&, const GossipItem&) = default;
};

struct GossipResult {
  CostLedger cost;
  /// What every node holds afterwards (checked identical at all nodes).
  std::vector<GossipItem> items;
};

/// All-to-all dissemination: pipelined upcast to the leader, then pipelined
/// broadcast. O(D_G + total items) rounds. Items are fixed-width words of
/// `item_bits` bits; wider-than-B words are fragmented.
GossipResult gossip(Network& net, const std::vector<std::vector<GossipItem>>& per_node,
                    std::uint32_t item_bits, std::string_view phase = "gossip");

}  // namespace qcongest
