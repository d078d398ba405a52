#include "qcongest/tree_programs.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <tuple>

namespace qcongest {

namespace {

constexpr std::uint32_t kFin = 1;
constexpr std::uint32_t kEmpty = 2;

class BfsProgram final : public NodeProgram {
 public:
  BfsProgram(NodeId self, bool root, BfsTree& out) : self_(self), out_(out) {
    if (root) {
      joined_ = true;
      out_.depth[self] = 0;
    }
  }

  void emit(RoundContext& ctx) override {
    if (!joined_ || announced_) return;
    // One message doubles as flood to everyone and ack to the chosen parent.
    Message m;
    m.payload = out_.depth[self_];
    m.aux = out_.parent[self_];
    m.bits = bit_width_of(static_cast<std::uint64_t>(m.payload)) + id_bits(ctx.node_count()) + 1;
    ctx.broadcast(m);
    announced_ = true;
  }

  void receive(RoundContext&, std::span<const Message> inbox) override {
    for (const auto& m : inbox) {
      if (m.aux == self_) out_.children[self_].push_back(m.from);
    }
    if (joined_ || inbox.empty()) return;
    const auto best = std::min_element(inbox.begin(), inbox.end(),
                                       [](const Message& a, const Message& b) { return a.from < b.from; });
    out_.parent[self_] = best->from;
    out_.depth[self_] = best->payload + 1;
    joined_ = true;
  }

  bool done(Round) const override { return joined_ && announced_; }
  Round next_active(Round next) const override { return joined_ && !announced_ ? next : kNever; }

 private:
  NodeId self_;
  BfsTree& out_;
  bool joined_ = false;
  bool announced_ = false;
};

/// Pushes a known number of items from the root down the tree.
class PipelineDown final : public NodeProgram {
 public:
  PipelineDown(std::vector<NodeId> children, std::size_t total, std::vector<GossipItem> initial,
               std::uint32_t item_bits, bool width_from_payload)
      : children_(std::move(children)),
        total_(total),
        items_(std::move(initial)),
        item_bits_(item_bits),
        width_from_payload_(width_from_payload) {}

  void emit(RoundContext& ctx) override {
    if (children_.empty() || forwarded_ >= items_.size()) return;
    const auto& item = items_[forwarded_++];
    Message m;
    m.channel = item.channel;
    m.payload = item.payload;
    m.aux = item.aux;
    m.bits = width_from_payload_ ? bit_width_of(static_cast<std::uint64_t>(item.payload)) : item_bits_;
    for (NodeId c : children_) ctx.send(c, m);
  }

  void receive(RoundContext&, std::span<const Message> inbox) override {
    for (const auto& m : inbox) items_.push_back({m.channel, m.payload, m.aux});
  }

  bool done(Round) const override {
    return items_.size() == total_ && (children_.empty() || forwarded_ == total_);
  }
  Round next_active(Round next) const override {
    return !children_.empty() && forwarded_ < items_.size() ? next : kNever;
  }

  const std::vector<GossipItem>& items() const { return items_; }

 private:
  std::vector<NodeId> children_;
  std::size_t total_;
  std::vector<GossipItem> items_;
  std::size_t forwarded_ = 0;
  std::uint32_t item_bits_;
  bool width_from_payload_;
};

class ConvergecastProgram final : public NodeProgram {
 public:
  ConvergecastProgram(NodeId parent, std::size_t children, std::int64_t value, Aggregate op)
      : parent_(parent), waiting_(children), value_(value), op_(op) {}

  void emit(RoundContext& ctx) override {
    if (parent_ < 0 || sent_ || waiting_ > 0) return;
    Message m;
    m.payload = value_;
    m.bits = bit_width_of(static_cast<std::uint64_t>(value_));
    ctx.send(parent_, m);
    sent_ = true;
  }

  void receive(RoundContext&, std::span<const Message> inbox) override {
    for (const auto& m : inbox) {
      switch (op_) {
        case Aggregate::kMax: value_ = std::max(value_, m.payload); break;
        case Aggregate::kMin: value_ = std::min(value_, m.payload); break;
        case Aggregate::kSum: value_ += m.payload; break;
      }
      --waiting_;
    }
  }

  bool done(Round) const override { return parent_ < 0 ? waiting_ == 0 : sent_; }
  Round next_active(Round next) const override {
    return parent_ >= 0 && !sent_ && waiting_ == 0 ? next : kNever;
  }

  std::int64_t value() const { return value_; }

 private:
  NodeId parent_;
  std::size_t waiting_;
  std::int64_t value_;
  Aggregate op_;
  bool sent_ = false;
};

class UpcastProgram final : public NodeProgram {
 public:
  UpcastProgram(NodeId parent, std::size_t children, std::vector<GossipItem> own,
                std::uint32_t item_bits)
      : parent_(parent), children_(children), queue_(own.begin(), own.end()), item_bits_(item_bits) {}

  void emit(RoundContext& ctx) override {
    if (parent_ < 0 || sent_fin_) return;
    const bool children_finished = fins_ == children_;
    Message m;
    if (!queue_.empty()) {
      const auto item = queue_.front();
      queue_.pop_front();
      m.channel = item.channel;
      m.payload = item.payload;
      m.aux = item.aux;
      m.bits = item_bits_ + 1;
      if (queue_.empty() && children_finished) m.flags = kFin;
    } else if (children_finished) {
      m.flags = kFin | kEmpty;
      m.bits = 1;
    } else {
      return;
    }
    sent_fin_ = (m.flags & kFin) != 0;
    ctx.send(parent_, m);
  }

  void receive(RoundContext&, std::span<const Message> inbox) override {
    for (const auto& m : inbox) {
      if (!(m.flags & kEmpty)) {
        if (parent_ < 0) {
          collected_.push_back({m.channel, m.payload, m.aux});
        } else {
          queue_.push_back({m.channel, m.payload, m.aux});
        }
      }
      if (m.flags & kFin) ++fins_;
    }
  }

  bool done(Round) const override { return parent_ < 0 ? fins_ == children_ : sent_fin_; }
  Round next_active(Round next) const override {
    if (parent_ < 0 || sent_fin_) return kNever;
    return !queue_.empty() || fins_ == children_ ? next : kNever;
  }

  std::vector<GossipItem> take_collected(std::deque<GossipItem> own_at_root) {
    std::vector<GossipItem> out(own_at_root.begin(), own_at_root.end());
    out.insert(out.end(), collected_.begin(), collected_.end());
    return out;
  }
  std::deque<GossipItem>& queue() { return queue_; }

 private:
  NodeId parent_;
  std::size_t children_;
  std::size_t fins_ = 0;
  std::deque<GossipItem> queue_;
  std::vector<GossipItem> collected_;
  std::uint32_t item_bits_;
  bool sent_fin_ = false;
};

BroadcastResult run_pipeline_down(Network& net, std::vector<GossipItem> items,
                                  std::string_view phase, std::uint32_t item_bits,
                                  bool width_from_payload, std::uint32_t fragments) {
  const auto& tree = net.tree();
  const std::size_t n = net.node_count();
  Programs programs;
  std::vector<PipelineDown*> views;
  for (std::size_t v = 0; v < n; ++v) {
    const bool root = static_cast<NodeId>(v) == tree.root;
    auto p = std::make_unique<PipelineDown>(tree.children[v], items.size(),
                                            root ? items : std::vector<GossipItem>{}, item_bits,
                                            width_from_payload);
    views.push_back(p.get());
    programs.push_back(std::move(p));
  }
  RunOptions options;
  options.fragments = fragments;
  BroadcastResult result;
  result.cost = net.run(programs, phase, options);
  result.received.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& item : views[v]->items()) result.received[v].push_back(item.payload);
  }
  return result;
}

}  // namespace

CostLedger build_bfs_tree(Network& net, std::string_view phase) {
  const std::size_t n = net.node_count();
  BfsTree tree;
  tree.root = net.leader();
  tree.parent.assign(n, -1);
  tree.children.assign(n, {});
  tree.depth.assign(n, -1);
  Programs programs;
  for (std::size_t v = 0; v < n; ++v) {
    programs.push_back(std::make_unique<BfsProgram>(static_cast<NodeId>(v),
                                                    static_cast<NodeId>(v) == tree.root, tree));
  }
  auto cost = net.run(programs, phase);
  for (auto& c : tree.children) std::sort(c.begin(), c.end());
  tree.height = *std::max_element(tree.depth.begin(), tree.depth.end());
  net.set_tree(std::move(tree));
  return cost;
}

BroadcastResult broadcast_pipeline(Network& net, std::span<const std::int64_t> items,
                                   std::string_view phase, WordPolicy policy) {
  std::uint32_t widest = 1;
  std::vector<GossipItem> wrapped;
  for (auto item : items) {
    if (item < 0) throw std::invalid_argument("broadcast_pipeline: items are nonnegative words");
    widest = std::max(widest, bit_width_of(static_cast<std::uint64_t>(item)));
    wrapped.push_back({0, item, 0});
  }
  if (policy == WordPolicy::kStrict && widest > net.bandwidth_bits()) {
    throw WordTooWide("broadcast_pipeline: item of " + std::to_string(widest) +
                      " bits exceeds bandwidth " + std::to_string(net.bandwidth_bits()));
  }
  return run_pipeline_down(net, std::move(wrapped), phase, 0, true, net.fragments_for(widest));
}

ConvergecastResult convergecast(Network& net, std::span<const std::int64_t> values, Aggregate op,
                                std::string_view phase, WordPolicy policy) {
  const auto& tree = net.tree();
  const std::size_t n = net.node_count();
  if (values.size() != n) throw std::invalid_argument("convergecast: one value per node required");
  std::uint64_t widest_value = 0;
  for (auto v : values) {
    if (v < 0) throw std::invalid_argument("convergecast: values are nonnegative words");
    widest_value = op == Aggregate::kSum ? widest_value + static_cast<std::uint64_t>(v)
                                         : std::max(widest_value, static_cast<std::uint64_t>(v));
  }
  const std::uint32_t widest = bit_width_of(widest_value);
  if (policy == WordPolicy::kStrict && widest > net.bandwidth_bits()) {
    throw WordTooWide("convergecast: value of " + std::to_string(widest) +
                      " bits exceeds bandwidth " + std::to_string(net.bandwidth_bits()));
  }
  Programs programs;
  std::vector<ConvergecastProgram*> views;
  for (std::size_t v = 0; v < n; ++v) {
    auto p = std::make_unique<ConvergecastProgram>(tree.parent[v], tree.children[v].size(),
                                                   values[v], op);
    views.push_back(p.get());
    programs.push_back(std::move(p));
  }
  RunOptions options;
  options.fragments = net.fragments_for(widest);
  ConvergecastResult result;
  result.cost = net.run(programs, phase, options);
  result.value = views[tree.root]->value();
  return result;
}

GossipResult gossip(Network& net, const std::vector<std::vector<GossipItem>>& per_node,
                    std::uint32_t item_bits, std::string_view phase) {
  const auto& tree = net.tree();
  const std::size_t n = net.node_count();
  if (per_node.size() != n) throw std::invalid_argument("gossip: one item list per node required");
  const std::uint32_t fragments = net.fragments_for(item_bits + 1);

  Programs programs;
  std::vector<UpcastProgram*> views;
  for (std::size_t v = 0; v < n; ++v) {
    const bool root = static_cast<NodeId>(v) == tree.root;
    auto p = std::make_unique<UpcastProgram>(tree.parent[v], tree.children[v].size(),
                                             root ? std::vector<GossipItem>{} : per_node[v],
                                             item_bits);
    views.push_back(p.get());
    programs.push_back(std::move(p));
  }
  RunOptions options;
  options.fragments = fragments;
  GossipResult result;
  result.cost = net.run(programs, phase, options);

  const auto& root_own = per_node[tree.root];
  auto collected = views[tree.root]->take_collected({root_own.begin(), root_own.end()});
  auto down = run_pipeline_down(net, collected, phase, item_bits, false, fragments);
  result.cost.merge(down.cost);

  // Every node sorts what it received; all copies must agree.
  std::sort(collected.begin(), collected.end(), [](const GossipItem& a, const GossipItem& b) {
    return std::tie(a.channel, a.payload, a.aux) < std::tie(b.channel, b.payload, b.aux);
  });
  result.items = std::move(collected);
  std::size_t expected = 0;
  for (const auto& items : per_node) expected += items.size();
  if (result.items.size() != expected) throw std::logic_error("gossip: items lost in upcast");
  for (std::size_t v = 0; v < n; ++v) {
    if (down.received[v].size() != expected) throw std::logic_error("gossip: incomplete downcast");
  }
  return result;
}

}  // namespace qcongest
