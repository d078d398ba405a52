#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcongest/graph.hpp"

namespace qcongest {

using Round = std::int64_t;
inline constexpr Round kNever = std::numeric_limits<Round>::max();

/// Bits needed to write `value` in binary (at least 1).
std::uint32_t bit_width_of(std::uint64_t value);
/// Bits needed for a node id in an n-node network.
std::uint32_t id_bits(std::size_t n);
/// Default CONGEST bandwidth: ceil(4 * log2 n) bits (1 bit for n = 1).
std::uint32_t default_bandwidth(std::size_t n);

struct Message {
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t channel = 0;
  std::uint32_t flags = 0;
  std::int64_t payload = 0;
  std::int64_t aux = 0;
  std::uint32_t bits = 0;
};

class BandwidthExceeded : public std::runtime_error {
 public:
  BandwidthExceeded(NodeId from, NodeId to, Round round, std::uint64_t bits, std::uint64_t limit);
  NodeId from() const { return from_; }
  NodeId to() const { return to_; }
  Round round() const { return round_; }
  std::uint64_t bits() const { return bits_; }

 private:
  NodeId from_;
  NodeId to_;
  Round round_;
  std::uint64_t bits_;
};

class MaxRoundsExceeded : public std::runtime_error {
 public:
  explicit MaxRoundsExceeded(Round limit)
      : std::runtime_error("run exceeded max_rounds = " + std::to_string(limit)) {}
};

struct PhaseCost {
  std::string name;
  Round rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t bits = 0;
};

/// Round/message/bit accounting with named phases. Phase totals always sum
/// to the grand totals.
class CostLedger {
 public:
  void charge(std::string_view phase, Round rounds, std::uint64_t messages, std::uint64_t bits);
  /// Adds every phase of `other` (by name) into this ledger.
  void merge(const CostLedger& other);
  /// Adds the totals of `other` under a single phase name.
  void merge_as(std::string_view phase, const CostLedger& other);

  Round rounds() const { return rounds_; }
  std::uint64_t messages() const { return messages_; }
  std::uint64_t bits() const { return bits_; }
  const std::vector<PhaseCost>& phases() const { return phases_; }
  const PhaseCost* phase(std::string_view name) const;

  nlohmann::ordered_json to_json() const;

 private:
  Round rounds_ = 0;
  std::uint64_t messages_ = 0;
  std::uint64_t bits_ = 0;
  std::vector<PhaseCost> phases_;
};

/// Per-node view of one synchronous round.
class RoundContext {
 public:
  NodeId self() const { return self_; }
  Round round() const { return round_; }
  std::size_t node_count() const { return node_count_; }
  std::span<const Neighbor> neighbors() const { return neighbors_; }
  std::mt19937_64& rng() { return *rng_; }

  void send(NodeId to, Message message);
  void broadcast(const Message& message);

 private:
  friend class Network;
  NodeId self_ = 0;
  Round round_ = 0;
  std::size_t node_count_ = 0;
  std::span<const Neighbor> neighbors_;
  std::mt19937_64* rng_ = nullptr;
  std::vector<Message>* outbox_ = nullptr;
};

/// A node's deterministic behaviour. Each executed round first calls emit on
/// every running node, then delivers, then calls receive (also on halted
/// nodes that were sent something); a message is never visible to the emit
/// of the round that produced it. Halted nodes never emit again.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void emit(RoundContext& ctx) = 0;
  virtual void receive(RoundContext& ctx, std::span<const Message> inbox) = 0;
  /// True once the node has halted before executing round `next`.
  virtual bool done(Round next) const = 0;
  /// Earliest round >= next at which emit may send or done may change.
  /// Rounds before it are idle for this node (kNever if it only reacts to
  /// incoming messages).
  virtual Round next_active(Round next) const { return next; }
};

using Programs = std::vector<std::unique_ptr<NodeProgram>>;

struct RunOptions {
  Round max_rounds = Round{1} << 40;
  /// Engine rounds charged per logical round; each directed edge may carry
  /// fragments * B bits per logical round.
  std::uint32_t fragments = 1;
  /// Called for every delivered message.
  std::function<void(const Message&, Round)> tap;
};

struct BfsTree {
  NodeId root = 0;
  std::vector<NodeId> parent;  // -1 at the root
  std::vector<std::vector<NodeId>> children;
  std::vector<std::int64_t> depth;
  std::int64_t height = 0;
};

struct NetworkConfig {
  std::uint32_t bandwidth_bits = 0;  // 0 selects default_bandwidth(n)
  NodeId leader = 0;
  std::uint64_t seed = 0;
};

/// Synchronous CONGEST network: topology, bandwidth, leader, a global round
/// clock and the accumulated cost ledger.
class Network {
 public:
  Network(WeightedGraph topology, NetworkConfig config = {});

  const WeightedGraph& topology() const { return topology_; }
  std::size_t node_count() const { return topology_.node_count(); }
  std::uint32_t bandwidth_bits() const { return bandwidth_; }
  NodeId leader() const { return leader_; }
  std::uint64_t seed() const { return seed_; }
  Round round_clock() const { return clock_; }
  const CostLedger& ledger() const { return ledger_; }

  /// Fragments needed for a word of `bits` bits.
  std::uint32_t fragments_for(std::uint32_t bits) const;

  /// Independent reproducible stream for (seed, node, purpose).
  std::mt19937_64 node_stream(NodeId v, std::uint64_t purpose) const;

  /// Runs one program per node to completion; the returned ledger has a
  /// single phase `phase`, which is also charged to the network ledger.
  /// A run aborted by an exception is charged up to the failing round.
  CostLedger run(Programs& programs, std::string_view phase, const RunOptions& options = {});

  /// Charges a cost that was established by an earlier run of an identical,
  /// value-independent schedule.
  void replay(const CostLedger& cost);

  bool has_tree() const { return tree_.has_value(); }
  const BfsTree& tree() const;
  void set_tree(BfsTree tree) { tree_ = std::move(tree); }

 private:
  WeightedGraph topology_;
  std::uint32_t bandwidth_;
  NodeId leader_;
  std::uint64_t seed_;
  Round clock_ = 0;
  CostLedger ledger_;
  std::vector<std::mt19937_64> node_rngs_;
  std::optional<BfsTree> tree_;
};

}  // namespace qcongest
