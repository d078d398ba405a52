#include "qcongest/toolkit.hpp"

#include <algorithm>
#include <cmath>

#include "qcongest/generators.hpp"
#include "qcongest/tree_programs.hpp"

namespace qcongest {

namespace {

constexpr std::uint64_t kDelayStream = std::uint64_t{1} << 60;
constexpr std::uint64_t kSkeletonStream = std::uint64_t{2} << 60;
constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

std::int64_t ceil_log2(std::uint64_t x) {
  std::int64_t k = 0;
  while ((std::uint64_t{1} << k) < x) ++k;
  return k;
}

std::int64_t slot_length(std::size_t n) {
  return std::max<std::int64_t>(1, ceil_log2(n));
}

Weight sender_weight(std::span<const Neighbor> neighbors, NodeId from) {
  auto it = std::lower_bound(neighbors.begin(), neighbors.end(), from,
                             [](const Neighbor& nb, NodeId id) { return nb.node < id; });
  if (it == neighbors.end() || it->node != from) throw std::logic_error("message from a non-neighbour");
  return it->weight;
}

class BoundedDistanceProgram final : public NodeProgram {
 public:
  BoundedDistanceProgram(NodeId self, const WeightedGraph& weights, bool source,
                         std::int64_t budget, std::uint32_t bits)
      : self_(self), weights_(weights), budget_(budget), bits_(bits), d_(source ? 0 : kUnreached) {}

  void emit(RoundContext& ctx) override {
    if (sent_ || d_ != ctx.round()) return;
    Message m;
    m.payload = d_;
    m.bits = bits_;
    ctx.broadcast(m);
    sent_ = true;
  }

  void receive(RoundContext&, std::span<const Message> inbox) override {
    for (const auto& m : inbox) {
      const std::int64_t nd = m.payload + *weights_.weight(self_, m.from);
      if (nd <= budget_ && nd < d_) d_ = nd;
    }
  }

  bool done(Round next) const override { return next > budget_; }
  Round next_active(Round next) const override {
    if (d_ != kUnreached && !sent_) return std::max(next, d_);
    return budget_ + 1;
  }

  Distance distance() const { return d_ == kUnreached ? Distance::infinite() : Distance(d_); }

 private:
  NodeId self_;
  const WeightedGraph& weights_;
  std::int64_t budget_;
  std::uint32_t bits_;
  std::int64_t d_;
  bool sent_ = false;
};

struct CopySchedule {
  RoundingScheme scheme;
  std::vector<NodeId> sources;
  std::vector<std::int64_t> delays;
  std::int64_t slot = 1;          // sub-rounds per scheduled round
  std::int64_t scheduled = 0;     // scheduled rounds in total
  std::uint32_t message_bits = 1;
};

/// Runs one bounded-hop SSSP copy per source, copy j shifted by delays[j]
/// scheduled rounds. Within a scheduled round the node sends its queued
/// copy messages one per sub-round.
class DelayedCopiesProgram final : public NodeProgram {
 public:
  DelayedCopiesProgram(NodeId self, const CopySchedule& sched)
      : self_(self),
        sched_(sched),
        level_(sched.sources.size(), -1),
        d_(sched.sources.size(), kUnreached),
        sent_(sched.sources.size(), false),
        best_(sched.sources.size(), Rational::infinite()) {
    for (std::size_t j = 0; j < sched.sources.size(); ++j) {
      if (sched.sources[j] == self) {
        own_ = static_cast<std::int64_t>(j);
        best_[j] = Rational(0);
      }
    }
  }

  void emit(RoundContext& ctx) override {
    const Round big = ctx.round() / sched_.slot;
    const Round sub = ctx.round() % sched_.slot;
    if (sub == 0) {
      queue_.clear();
      queue_round_ = big;
      const std::int64_t span = sched_.scheme.level_rounds();
      for (std::size_t j = 0; j < d_.size(); ++j) {
        const std::int64_t t = big - sched_.delays[j];
        if (t < 0 || t >= sched_.scheme.total_rounds()) continue;
        sync(j, t);
        if (!sent_[j] && d_[j] == t % span) {
          queue_.push_back(j);
          sent_[j] = true;
        }
      }
      if (queue_.size() > static_cast<std::size_t>(sched_.slot)) {
        throw CongestionFailure(self_, big, queue_.size(), static_cast<std::size_t>(sched_.slot));
      }
    }
    if (queue_round_ != big || sub >= static_cast<Round>(queue_.size())) return;
    const std::size_t j = queue_[sub];
    Message m;
    m.channel = static_cast<std::uint32_t>(j);
    m.payload = d_[j];
    m.bits = sched_.message_bits;
    ctx.broadcast(m);
  }

  void receive(RoundContext& ctx, std::span<const Message> inbox) override {
    const Round big = ctx.round() / sched_.slot;
    for (const auto& m : inbox) {
      const std::size_t j = m.channel;
      const std::int64_t t = big - sched_.delays[j];
      sync(j, t);
      const std::int64_t nd =
          m.payload + sched_.scheme.weight(Rational(sender_weight(ctx.neighbors(), m.from)), level_[j]);
      if (nd <= sched_.scheme.budget && nd < d_[j]) {
        d_[j] = nd;
        best_[j] = std::min(best_[j], sched_.scheme.value(nd, level_[j]));
      }
    }
  }

  bool done(Round next) const override { return next >= sched_.scheduled * sched_.slot; }

  Round next_active(Round next) const override {
    const Round end = sched_.scheduled * sched_.slot;
    if (next % sched_.slot != 0 && queue_round_ == next / sched_.slot &&
        next % sched_.slot < static_cast<Round>(queue_.size())) {
      return next;
    }
    const Round from = (next + sched_.slot - 1) / sched_.slot;
    const std::int64_t span = sched_.scheme.level_rounds();
    const std::int64_t total = sched_.scheme.total_rounds();
    Round wake = end;
    for (std::size_t j = 0; j < d_.size(); ++j) {
      const std::int64_t t = std::max<std::int64_t>(0, from - sched_.delays[j]);
      if (t >= total) continue;
      const std::int64_t lvl = t / span, pos = t % span;
      std::int64_t local = -1;
      if (level_[j] == lvl && !sent_[j] && d_[j] != kUnreached && d_[j] >= pos) {
        local = lvl * span + d_[j];
      } else if (own_ == static_cast<std::int64_t>(j)) {
        if (pos == 0 && level_[j] != lvl) {
          local = t;
        } else if ((lvl + 1) * span < total) {
          local = (lvl + 1) * span;
        }
      }
      if (local >= 0) wake = std::min(wake, (sched_.delays[j] + local) * sched_.slot);
    }
    return wake;
  }

  const std::vector<Rational>& best() const { return best_; }

 private:
  void sync(std::size_t j, std::int64_t t) {
    const std::int64_t lvl = t / sched_.scheme.level_rounds();
    if (level_[j] == lvl) return;
    level_[j] = static_cast<int>(lvl);
    sent_[j] = false;
    d_[j] = own_ == static_cast<std::int64_t>(j) ? 0 : kUnreached;
  }

  NodeId self_;
  const CopySchedule& sched_;
  std::int64_t own_ = -1;
  std::vector<int> level_;
  std::vector<std::int64_t> d_;
  std::vector<bool> sent_;
  std::vector<Rational> best_;
  std::vector<std::size_t> queue_;
  Round queue_round_ = -1;
};

/// Runs the copies to completion; returns per-copy tables.
std::vector<std::vector<Rational>> run_copies(Network& net, const CopySchedule& sched,
                                              std::string_view phase, CostLedger& cost) {
  const std::size_t n = net.node_count();
  Programs programs;
  std::vector<DelayedCopiesProgram*> views;
  for (std::size_t v = 0; v < n; ++v) {
    auto p = std::make_unique<DelayedCopiesProgram>(static_cast<NodeId>(v), sched);
    views.push_back(p.get());
    programs.push_back(std::move(p));
  }
  RunOptions options;
  options.fragments = net.fragments_for(sched.message_bits);
  const Round before = net.ledger().rounds();
  const auto messages_before = net.ledger().messages();
  const auto bits_before = net.ledger().bits();
  try {
    cost.merge(net.run(programs, phase, options));
  } catch (...) {
    // The engine already charged the aborted attempt to the network.
    cost.charge(phase, net.ledger().rounds() - before, net.ledger().messages() - messages_before,
                net.ledger().bits() - bits_before);
    throw;
  }
  std::vector<std::vector<Rational>> tables(sched.sources.size(), std::vector<Rational>(n));
  for (std::size_t v = 0; v < n; ++v) {
    const auto& best = views[v]->best();
    for (std::size_t j = 0; j < best.size(); ++j) tables[j][v] = best[j];
  }
  return tables;
}

}  // namespace

int eps_denominator(std::size_t n, int max_q) {
  if (max_q < 1) throw std::invalid_argument("eps_denominator: max_q must be >= 1");
  return static_cast<int>(std::clamp<std::int64_t>(ceil_log2(n), 1, max_q));
}

Rational sandwich_factor(int q, int power) {
  Rational f(1);
  for (int i = 0; i < power; ++i) f = f * Rational(q + 1, q);
  return f;
}

RoundingScheme RoundingScheme::make(std::size_t n, Rational max_weight, std::int64_t hops, int q) {
  if (hops < 1) throw std::invalid_argument("RoundingScheme: hops must be >= 1");
  if (q < 1) throw std::invalid_argument("RoundingScheme: eps must be in (0, 1]");
  if (!max_weight.is_finite()) throw std::invalid_argument("RoundingScheme: infinite weight");
  RoundingScheme s;
  s.hops = hops;
  s.q = q;
  const std::uint64_t top = 2 * static_cast<std::uint64_t>(std::max<std::size_t>(n, 1)) *
                            static_cast<std::uint64_t>(std::max<std::int64_t>(max_weight.ceil(), 1)) *
                            static_cast<std::uint64_t>(q);
  s.levels = static_cast<int>(ceil_log2(top)) + 1;
  s.budget = (1 + 2 * static_cast<std::int64_t>(q)) * hops;
  return s;
}

std::int64_t RoundingScheme::weight(const Rational& w, int level) const {
  if (level < 0 || level > 62) throw std::out_of_range("RoundingScheme: level out of range");
  const __int128 num = static_cast<__int128>(2 * hops * q) * w.num();
  const __int128 den = static_cast<__int128>(w.den()) << level;
  const __int128 r = (num + den - 1) / den;
  return static_cast<std::int64_t>(std::max<__int128>(r, 1));
}

Rational RoundingScheme::value(std::int64_t d, int level) const {
  return Rational(d) * Rational(std::int64_t{1} << level, 2 * hops * q);
}

CongestionFailure::CongestionFailure(NodeId node, Round round, std::size_t copies,
                                     std::size_t limit)
    : std::runtime_error("congestion at node " + std::to_string(node) + " in scheduled round " +
                         std::to_string(round) + ": " + std::to_string(copies) +
                         " copies want to broadcast, limit " + std::to_string(limit)),
      node_(node),
      copies_(copies) {}

BoundedDistanceRun bounded_distance_sssp(Network& net, const WeightedGraph& weights, NodeId s,
                                         std::int64_t budget, std::string_view phase) {
  const auto& topo = net.topology();
  topo.check_node(s);
  if (budget < 0) throw std::invalid_argument("bounded_distance_sssp: budget must be >= 0");
  if (weights.node_count() != topo.node_count() || weights.edge_count() != topo.edge_count())
    throw std::invalid_argument("bounded_distance_sssp: weights do not match the topology");
  for (const auto& e : topo.edges()) {
    if (!weights.weight(e.u, e.v))
      throw std::invalid_argument("bounded_distance_sssp: weights do not match the topology");
  }
  const std::size_t n = net.node_count();
  const std::uint32_t bits = id_bits(n) + bit_width_of(static_cast<std::uint64_t>(budget));
  Programs programs;
  std::vector<BoundedDistanceProgram*> views;
  for (std::size_t v = 0; v < n; ++v) {
    auto p = std::make_unique<BoundedDistanceProgram>(static_cast<NodeId>(v), weights,
                                                      static_cast<NodeId>(v) == s, budget, bits);
    views.push_back(p.get());
    programs.push_back(std::move(p));
  }
  RunOptions options;
  options.fragments = net.fragments_for(bits);
  BoundedDistanceRun run;
  run.cost = net.run(programs, phase, options);
  for (auto* p : views) run.distance.push_back(p->distance());
  return run;
}

ApproxSsspRun bounded_hop_sssp(Network& net, NodeId s, std::int64_t hops, int q,
                               std::string_view phase) {
  net.topology().check_node(s);
  CopySchedule sched;
  sched.scheme = RoundingScheme::make(net.node_count(), net.topology().max_weight(), hops, q);
  sched.sources = {s};
  sched.delays = {0};
  sched.slot = 1;
  sched.scheduled = sched.scheme.total_rounds();
  sched.message_bits =
      id_bits(net.node_count()) + bit_width_of(static_cast<std::uint64_t>(sched.scheme.budget));
  ApproxSsspRun run;
  run.scheme = sched.scheme;
  run.approx = std::move(run_copies(net, sched, phase, run.cost)[0]);
  return run;
}

std::size_t MsspRun::index_of(NodeId s) const {
  auto it = std::lower_bound(sources.begin(), sources.end(), s);
  if (it == sources.end() || *it != s) throw std::out_of_range("MsspRun: not a source");
  return static_cast<std::size_t>(it - sources.begin());
}

MsspRun bounded_hop_mssp(Network& net, std::span<const NodeId> sources, std::int64_t hops, int q,
                         const MsspOptions& options) {
  const std::size_t n = net.node_count();
  MsspRun run;
  run.sources.assign(sources.begin(), sources.end());
  std::sort(run.sources.begin(), run.sources.end());
  run.sources.erase(std::unique(run.sources.begin(), run.sources.end()), run.sources.end());
  if (run.sources.empty()) throw std::invalid_argument("bounded_hop_mssp: source set is empty");
  for (NodeId s : run.sources) net.topology().check_node(s);

  if (!net.has_tree()) run.cost.merge(build_bfs_tree(net));

  // Every node learns the source list, so copies have agreed indices.
  std::vector<std::vector<GossipItem>> announce(n);
  for (NodeId s : run.sources) announce[s].push_back({0, s, 0});
  run.cost.merge(gossip(net, announce, id_bits(n), options.phase).cost);

  const auto b = static_cast<std::int64_t>(run.sources.size());
  CopySchedule sched;
  sched.scheme = RoundingScheme::make(n, net.topology().max_weight(), hops, q);
  sched.sources = run.sources;
  sched.slot = slot_length(n);
  sched.scheduled = sched.scheme.total_rounds() + b * sched.slot;
  sched.message_bits = id_bits(run.sources.size()) +
                       bit_width_of(static_cast<std::uint64_t>(sched.scheme.budget));
  run.scheme = sched.scheme;
  run.slot = sched.slot;

  for (int attempt = 0;; ++attempt) {
    run.attempts = attempt + 1;
    auto rng = net.node_stream(net.leader(), kDelayStream ^ (options.salt << 8) ^
                                                 static_cast<std::uint64_t>(attempt));
    sched.delays.clear();
    for (std::int64_t j = 0; j < b; ++j) sched.delays.push_back(uniform_int(rng, 0, b * sched.slot));
    run.cost.merge(
        broadcast_pipeline(net, sched.delays, options.phase, WordPolicy::kFragment).cost);
    try {
      run.approx = run_copies(net, sched, options.phase, run.cost);
      return run;
    } catch (const CongestionFailure&) {
      if (attempt >= options.max_retries) throw;
    }
  }
}

std::vector<std::vector<NodeId>> sample_skeleton_sets(const Network& net, std::int64_t r,
                                                      std::size_t count, std::uint64_t salt) {
  const std::size_t n = net.node_count();
  if (r < 1 || r > static_cast<std::int64_t>(n))
    throw std::invalid_argument("sample_skeleton_sets: need 1 <= r <= n");
  const double p = static_cast<double>(r) / static_cast<double>(n);
  std::vector<std::vector<NodeId>> sets(count);
  for (std::size_t v = 0; v < n; ++v) {
    auto rng = net.node_stream(static_cast<NodeId>(v), kSkeletonStream ^ salt);
    for (std::size_t i = 0; i < count; ++i) {
      if (r == static_cast<std::int64_t>(n) || uniform_unit(rng) < p) sets[i].push_back(static_cast<NodeId>(v));
    }
  }
  return sets;
}

}  // namespace qcongest
