#include "qcongest/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace qcongest {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  NodeId find(NodeId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<NodeId> parent_;
};

}  // namespace

WeightedGraph::WeightedGraph(std::size_t node_count, std::vector<Edge> edges,
                             Connectivity connectivity)
    : edges_(std::move(edges)), adjacency_(node_count) {
  if (node_count == 0) throw std::invalid_argument("graph must have at least one node");
  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto& e : edges_) {
    if (!contains(e.u) || !contains(e.v)) {
      std::ostringstream os;
      os << "edge {" << e.u << "," << e.v << "} references a node outside 0.." << node_count - 1;
      throw std::out_of_range(os.str());
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.w < 1) {
      std::ostringstream os;
      os << "edge {" << e.u << "," << e.v << "} has weight " << e.w << "; weights must be >= 1";
      throw std::invalid_argument(os.str());
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second) {
      std::ostringstream os;
      os << "duplicate edge {" << e.u << "," << e.v << "}";
      throw std::invalid_argument(os.str());
    }
    adjacency_[e.u].push_back({e.v, e.w});
    adjacency_[e.v].push_back({e.u, e.w});
    max_weight_ = std::max(max_weight_, e.w);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  if (connectivity == Connectivity::kRequire) {
    auto components = connected_components(node_count, edges_);
    if (components.size() > 1) {
      std::ostringstream os;
      os << "graph is disconnected (" << components.size() << " components):";
      for (const auto& c : components) {
        os << " {";
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (i == 8) {
            os << ",... (" << c.size() << " nodes)";
            break;
          }
          os << (i ? "," : "") << c[i];
        }
        os << "}";
      }
      throw DisconnectedGraph(os.str(), std::move(components));
    }
  }
}

void WeightedGraph::check_node(NodeId v) const {
  if (!contains(v)) {
    throw std::out_of_range("unknown node id " + std::to_string(v) + " (graph has " +
                            std::to_string(node_count()) + " nodes)");
  }
}

std::span<const Neighbor> WeightedGraph::neighbors(NodeId v) const {
  check_node(v);
  return adjacency_[v];
}

std::optional<Weight> WeightedGraph::weight(NodeId u, NodeId v) const {
  const auto adj = neighbors(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v,
                             [](const Neighbor& n, NodeId id) { return n.node < id; });
  if (it == adj.end() || it->node != v) return std::nullopt;
  return it->weight;
}

std::vector<std::vector<NodeId>> connected_components(std::size_t node_count,
                                                      std::span<const Edge> edges) {
  DisjointSets sets(node_count);
  for (const auto& e : edges) sets.unite(e.u, e.v);
  std::vector<std::vector<NodeId>> by_root(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    by_root[sets.find(static_cast<NodeId>(v))].push_back(static_cast<NodeId>(v));
  }
  std::vector<std::vector<NodeId>> out;
  for (auto& c : by_root) {
    if (!c.empty()) out.push_back(std::move(c));
  }
  return out;
}

DistanceTable::DistanceTable(std::vector<NodeId> sources, std::size_t node_count)
    : sources_(std::move(sources)),
      source_index_(node_count, -1),
      node_count_(node_count),
      data_(sources_.size() * node_count, Distance::infinite()) {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    const NodeId s = sources_[i];
    if (s < 0 || static_cast<std::size_t>(s) >= node_count)
      throw std::out_of_range("DistanceTable: unknown source " + std::to_string(s));
    if (source_index_[s] != -1) throw std::invalid_argument("DistanceTable: duplicate source");
    source_index_[s] = static_cast<std::int32_t>(i);
  }
}

bool DistanceTable::has_source(NodeId s) const {
  return s >= 0 && static_cast<std::size_t>(s) < node_count_ && source_index_[s] != -1;
}

std::size_t DistanceTable::index_of(NodeId source) const {
  if (!has_source(source))
    throw std::out_of_range("DistanceTable: node " + std::to_string(source) + " is not a source");
  return static_cast<std::size_t>(source_index_[source]);
}

Distance DistanceTable::at(NodeId source, NodeId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= node_count_)
    throw std::out_of_range("DistanceTable: unknown node " + std::to_string(v));
  return data_[index_of(source) * node_count_ + v];
}

Distance& DistanceTable::at(NodeId source, NodeId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= node_count_)
    throw std::out_of_range("DistanceTable: unknown node " + std::to_string(v));
  return data_[index_of(source) * node_count_ + v];
}

std::span<const Distance> DistanceTable::row(NodeId source) const {
  return std::span<const Distance>(data_).subspan(index_of(source) * node_count_, node_count_);
}

namespace {

// Label-setting search returning (distance, hops) with hops minimised among
// shortest paths.
void dijkstra(const WeightedGraph& g, NodeId s, std::vector<Distance>& dist,
              std::vector<std::int64_t>* hops) {
  g.check_node(s);
  const std::size_t n = g.node_count();
  dist.assign(n, Distance::infinite());
  std::vector<std::int64_t> h(n, std::numeric_limits<std::int64_t>::max());
  using Item = std::tuple<Weight, std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[s] = 0;
  h[s] = 0;
  queue.emplace(0, 0, s);
  while (!queue.empty()) {
    auto [d, hop, u] = queue.top();
    queue.pop();
    if (Distance(d) != dist[u] || hop != h[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      const Distance cand = Distance(d) + Distance(nb.weight);
      const std::int64_t cand_hops = hop + 1;
      if (cand < dist[nb.node] || (cand == dist[nb.node] && cand_hops < h[nb.node])) {
        dist[nb.node] = cand;
        h[nb.node] = cand_hops;
        queue.emplace(cand.value(), cand_hops, nb.node);
      }
    }
  }
  if (hops) *hops = std::move(h);
}

}  // namespace

DistanceTable exact_sssp(const WeightedGraph& g, NodeId s) {
  g.check_node(s);
  DistanceTable table({s}, g.node_count());
  std::vector<Distance> dist;
  dijkstra(g, s, dist, nullptr);
  for (std::size_t v = 0; v < g.node_count(); ++v) table.at(s, static_cast<NodeId>(v)) = dist[v];
  return table;
}

DistanceTable all_pairs(const WeightedGraph& g) {
  std::vector<NodeId> sources(g.node_count());
  std::iota(sources.begin(), sources.end(), 0);
  DistanceTable table(sources, g.node_count());
  std::vector<Distance> dist;
  for (NodeId s : sources) {
    dijkstra(g, s, dist, nullptr);
    for (std::size_t v = 0; v < g.node_count(); ++v) table.at(s, static_cast<NodeId>(v)) = dist[v];
  }
  return table;
}

DistanceTable exact_bounded_hop(const WeightedGraph& g, NodeId s, std::int64_t hops) {
  g.check_node(s);
  if (hops < 0) throw std::invalid_argument("exact_bounded_hop: hops must be >= 0");
  const std::size_t n = g.node_count();
  std::vector<Distance> cur(n, Distance::infinite());
  cur[s] = 0;
  // Relaxation reaches a fixpoint after at most n-1 rounds.
  const std::int64_t rounds = std::min<std::int64_t>(hops, static_cast<std::int64_t>(n));
  for (std::int64_t r = 0; r < rounds; ++r) {
    std::vector<Distance> next = cur;
    for (const auto& e : g.edges()) {
      next[e.v] = std::min(next[e.v], cur[e.u] + Distance(e.w));
      next[e.u] = std::min(next[e.u], cur[e.v] + Distance(e.w));
    }
    if (next == cur) break;
    cur = std::move(next);
  }
  DistanceTable table({s}, n);
  for (std::size_t v = 0; v < n; ++v) table.at(s, static_cast<NodeId>(v)) = cur[v];
  return table;
}

std::vector<std::int64_t> hop_distances(const WeightedGraph& g, NodeId s) {
  std::vector<Distance> dist;
  std::vector<std::int64_t> hops;
  dijkstra(g, s, dist, &hops);
  return hops;
}

Weight eccentricity(const WeightedGraph& g, NodeId u) {
  std::vector<Distance> dist;
  dijkstra(g, u, dist, nullptr);
  Weight best = 0;
  for (const auto& d : dist) {
    if (!d.is_finite()) throw std::domain_error("eccentricity: graph is disconnected");
    best = std::max(best, d.value());
  }
  return best;
}

std::vector<Weight> eccentricities(const WeightedGraph& g) {
  std::vector<Weight> out(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) out[u] = eccentricity(g, static_cast<NodeId>(u));
  return out;
}

Weight diameter(const WeightedGraph& g) {
  const auto ecc = eccentricities(g);
  return *std::max_element(ecc.begin(), ecc.end());
}

Weight radius(const WeightedGraph& g) {
  const auto ecc = eccentricities(g);
  return *std::min_element(ecc.begin(), ecc.end());
}

std::int64_t hop_diameter(const WeightedGraph& g) {
  std::int64_t best = 0;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (auto h : hop_distances(g, static_cast<NodeId>(u))) {
      if (h == std::numeric_limits<std::int64_t>::max())
        throw std::domain_error("hop_diameter: graph is disconnected");
      best = std::max(best, h);
    }
  }
  return best;
}

std::vector<std::int64_t> unweighted_distances(const WeightedGraph& g, NodeId s) {
  g.check_node(s);
  std::vector<std::int64_t> dist(g.node_count(), -1);
  std::deque<NodeId> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.node] < 0) {
        dist[nb.node] = dist[u] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return dist;
}

std::int64_t unweighted_diameter(const WeightedGraph& g) {
  std::int64_t best = 0;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (auto d : unweighted_distances(g, static_cast<NodeId>(u))) {
      if (d < 0) throw std::domain_error("unweighted_diameter: graph is disconnected");
      best = std::max(best, d);
    }
  }
  return best;
}

Contraction contract_unit_edges(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  DisjointSets sets(n);
  for (const auto& e : g.edges()) {
    if (e.w == 1) sets.unite(e.u, e.v);
  }
  // Contracted ids follow the order of each class's smallest member.
  std::vector<NodeId> root_id(n, -1);
  std::vector<NodeId> node_map(n);
  NodeId next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const NodeId root = sets.find(static_cast<NodeId>(v));
    if (root_id[root] < 0) root_id[root] = next++;
    node_map[v] = root_id[root];
  }
  std::map<std::pair<NodeId, NodeId>, Weight> lightest;
  for (const auto& e : g.edges()) {
    NodeId a = node_map[e.u], b = node_map[e.v];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    auto [it, inserted] = lightest.emplace(std::make_pair(a, b), e.w);
    if (!inserted) it->second = std::min(it->second, e.w);
  }
  std::vector<Edge> edges;
  edges.reserve(lightest.size());
  for (const auto& [key, w] : lightest) edges.push_back({key.first, key.second, w});
  return {WeightedGraph(static_cast<std::size_t>(next), std::move(edges),
                        WeightedGraph::Connectivity::kAllowDisconnected),
          std::move(node_map)};
}

}  // namespace qcongest
