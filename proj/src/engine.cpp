#include "qcongest/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace qcongest {

std::uint32_t bit_width_of(std::uint64_t value) {
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::bit_width(value)));
}

std::uint32_t id_bits(std::size_t n) { return bit_width_of(n > 0 ? n - 1 : 0); }

std::uint32_t default_bandwidth(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::uint32_t>(std::ceil(4.0 * std::log2(static_cast<double>(n)) - 1e-9));
}

namespace {

std::string bandwidth_message(NodeId from, NodeId to, Round round, std::uint64_t bits,
                              std::uint64_t limit) {
  std::ostringstream os;
  os << "bandwidth exceeded on edge " << from << "->" << to << " in round " << round << ": "
     << bits << " bits > limit " << limit;
  return os.str();
}

}  // namespace

BandwidthExceeded::BandwidthExceeded(NodeId from, NodeId to, Round round, std::uint64_t bits,
                                     std::uint64_t limit)
    : std::runtime_error(bandwidth_message(from, to, round, bits, limit)),
      from_(from),
      to_(to),
      round_(round),
      bits_(bits) {}

void CostLedger::charge(std::string_view phase, Round rounds, std::uint64_t messages,
                        std::uint64_t bits) {
  auto it = std::find_if(phases_.begin(), phases_.end(),
                         [&](const PhaseCost& p) { return p.name == phase; });
  if (it == phases_.end()) {
    phases_.push_back({std::string(phase), 0, 0, 0});
    it = std::prev(phases_.end());
  }
  it->rounds += rounds;
  it->messages += messages;
  it->bits += bits;
  rounds_ += rounds;
  messages_ += messages;
  bits_ += bits;
}

void CostLedger::merge(const CostLedger& other) {
  for (const auto& p : other.phases_) charge(p.name, p.rounds, p.messages, p.bits);
}

void CostLedger::merge_as(std::string_view phase, const CostLedger& other) {
  charge(phase, other.rounds_, other.messages_, other.bits_);
}

const PhaseCost* CostLedger::phase(std::string_view name) const {
  for (const auto& p : phases_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

nlohmann::ordered_json CostLedger::to_json() const {
  nlohmann::ordered_json out;
  out["rounds"] = rounds_;
  out["messages"] = messages_;
  out["bits"] = bits_;
  auto& phases = out["phases"] = nlohmann::ordered_json::array();
  for (const auto& p : phases_) {
    phases.push_back({{"name", p.name}, {"rounds", p.rounds}, {"bits", p.bits}});
  }
  return out;
}

void RoundContext::send(NodeId to, Message message) {
  message.from = self_;
  message.to = to;
  outbox_->push_back(message);
}

void RoundContext::broadcast(const Message& message) {
  for (const auto& nb : neighbors_) send(nb.node, message);
}

Network::Network(WeightedGraph topology, NetworkConfig config)
    : topology_(std::move(topology)),
      bandwidth_(config.bandwidth_bits ? config.bandwidth_bits
                                       : default_bandwidth(topology_.node_count())),
      leader_(config.leader),
      seed_(config.seed) {
  topology_.check_node(leader_);
  node_rngs_.reserve(node_count());
  for (std::size_t v = 0; v < node_count(); ++v) {
    node_rngs_.push_back(node_stream(static_cast<NodeId>(v), 0));
  }
}

std::uint32_t Network::fragments_for(std::uint32_t bits) const {
  return std::max<std::uint32_t>(1, (bits + bandwidth_ - 1) / bandwidth_);
}

std::mt19937_64 Network::node_stream(NodeId v, std::uint64_t purpose) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(purpose),
                    static_cast<std::uint32_t>(purpose >> 32)};
  return std::mt19937_64(seq);
}

const BfsTree& Network::tree() const {
  if (!tree_) throw std::logic_error("BFS tree has not been built on this network");
  return *tree_;
}

void Network::replay(const CostLedger& cost) {
  ledger_.merge(cost);
  clock_ += cost.rounds();
}

CostLedger Network::run(Programs& programs, std::string_view phase, const RunOptions& options) {
  const std::size_t n = node_count();
  if (programs.size() != n) throw std::invalid_argument("run: need exactly one program per node");
  if (options.fragments == 0) throw std::invalid_argument("run: fragments must be >= 1");
  const std::uint64_t limit = static_cast<std::uint64_t>(bandwidth_) * options.fragments;

  std::vector<Message> outbox;
  std::vector<std::vector<Message>> inboxes(n);
  std::unordered_map<std::uint64_t, std::uint64_t> edge_bits;
  std::vector<char> running(n, 0);
  std::uint64_t messages = 0, bits = 0;
  RoundContext ctx;
  ctx.node_count_ = n;
  ctx.outbox_ = &outbox;

  Round r = 0;
  // An aborted run is still charged for the rounds it used, including the
  // round in progress.
  auto charge = [&](Round rounds) {
    CostLedger cost;
    cost.charge(phase, rounds * options.fragments, messages, bits);
    ledger_.merge(cost);
    clock_ += cost.rounds();
    return cost;
  };
  try {
    while (true) {
      Round wake = kNever;
      bool any_running = false;
      for (std::size_t v = 0; v < n; ++v) {
        running[v] = !programs[v]->done(r);
        if (running[v]) {
          any_running = true;
          wake = std::min(wake, std::max(r, programs[v]->next_active(r)));
        }
      }
      if (!any_running) break;
      if (wake == kNever) throw std::logic_error("run: every running program is waiting forever");
      if (wake > r) {
        if (wake > options.max_rounds) throw MaxRoundsExceeded(options.max_rounds);
        r = wake;
        continue;
      }
      if (r >= options.max_rounds) throw MaxRoundsExceeded(options.max_rounds);

      outbox.clear();
      edge_bits.clear();
      for (std::size_t v = 0; v < n; ++v) {
        if (!running[v]) continue;
        ctx.self_ = static_cast<NodeId>(v);
        ctx.round_ = r;
        ctx.neighbors_ = topology_.neighbors(ctx.self_);
        ctx.rng_ = &node_rngs_[v];
        programs[v]->emit(ctx);
      }
      for (const auto& m : outbox) {
        if (!topology_.weight(m.from, m.to)) {
          throw std::logic_error("run: node " + std::to_string(m.from) + " sent to non-neighbour " +
                                 std::to_string(m.to));
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(m.from) << 32) |
                                  static_cast<std::uint32_t>(m.to);
        auto& used = edge_bits[key];
        used += m.bits;
        if (used > limit) throw BandwidthExceeded(m.from, m.to, r, used, limit);
        ++messages;
        bits += m.bits;
        if (options.tap) options.tap(m, r);
        inboxes[m.to].push_back(m);
      }
      // Halted nodes still take delivery of the last messages addressed to them.
      for (std::size_t v = 0; v < n; ++v) {
        if (running[v] || !inboxes[v].empty()) {
          ctx.self_ = static_cast<NodeId>(v);
          ctx.round_ = r;
          ctx.neighbors_ = topology_.neighbors(ctx.self_);
          ctx.rng_ = &node_rngs_[v];
          programs[v]->receive(ctx, inboxes[v]);
        }
        inboxes[v].clear();
      }
      ++r;
    }
  } catch (const MaxRoundsExceeded&) {
    charge(options.max_rounds);
    throw;
  } catch (...) {
    charge(r + 1);
    throw;
  }
  return charge(r);
}

}  // namespace qcongest
