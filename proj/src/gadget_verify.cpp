#include <algorithm>
#include <set>

#include "qcongest/gadget.hpp"

namespace qcongest {

namespace {

constexpr std::size_t kMaxCounterexamples = 32;

void note(std::vector<Counterexample>& out, Counterexample c) {
  if (out.size() < kMaxCounterexamples) out.push_back(std::move(c));
}

nlohmann::ordered_json counterexamples_json(const std::vector<Counterexample>& list) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& c : list) {
    out.push_back({{"check", c.check}, {"u", c.u}, {"v", c.v}, {"value", c.value}, {"bound", c.bound}});
  }
  return out;
}

std::string_view side_name(Side side) {
  switch (side) {
    case Side::kAlice: return "alice";
    case Side::kBob: return "bob";
    default: return "server";
  }
}

/// Distances in the contracted graph, addressed by original node ids.
class ContractedView {
 public:
  explicit ContractedView(const WeightedGraph& g)
      : c_(contract_unit_edges(g)), table_(all_pairs(c_.graph)) {}

  NodeId of(NodeId v) const { return c_.node_map[static_cast<std::size_t>(v)]; }
  Distance distance(NodeId u, NodeId v) const { return table_.at(of(u), of(v)); }
  const WeightedGraph& graph() const { return c_.graph; }
  const DistanceTable& table() const { return table_; }

  /// Length of a walk through the given original nodes, or INFINITE when a
  /// step is not an edge of the contracted graph.
  Distance walk(std::initializer_list<NodeId> nodes) const {
    Distance total = 0;
    const NodeId* prev = nullptr;
    for (const NodeId& v : nodes) {
      if (prev) {
        auto w = c_.graph.weight(of(*prev), of(v));
        if (!w) return Distance::infinite();
        total = total + Distance(*w);
      }
      prev = &v;
    }
    return total;
  }

 private:
  Contraction c_;
  DistanceTable table_;
};

struct RowChecker {
  const GadgetLayout& layout;
  const ContractedView& view;
  std::vector<Counterexample>& counterexamples;
  TableRowCheck row;

  void pair(NodeId u, NodeId v, Distance witness) {
    ++row.pairs;
    const Distance d = view.distance(u, v);
    if (!d.is_finite() || d.value() > row.bound) {
      ++row.violations;
      note(counterexamples, {row.row, layout.name(u), layout.name(v),
                             d.is_finite() ? d.value() : -1, row.bound});
    }
    if (!witness.is_finite() || witness.value() > row.bound) {
      ++row.path_violations;
      note(counterexamples, {row.row + " (listed path)", layout.name(u), layout.name(v),
                             witness.is_finite() ? witness.value() : -1, row.bound});
    }
  }
};

std::vector<TableRowCheck> check_table(const GadgetInstance& g, const ContractedView& view,
                                       std::vector<Counterexample>& counterexamples) {
  const auto& L = g.layout;
  const Weight alpha = g.params.alpha;
  const Weight beta = g.params.beta;
  const int s = g.params.s();
  const std::int64_t rows = g.params.rows();
  const std::int64_t l = g.params.l();
  const NodeId t = L.t(0, 1);

  std::vector<NodeId> routers;
  for (int j = 1; j <= s; ++j) {
    routers.push_back(L.a_bit(j, 0));
    routers.push_back(L.a_bit(j, 1));
  }
  for (std::int64_t j = 1; j <= l; ++j) routers.push_back(L.a_star(j));

  std::vector<TableRowCheck> out;
  auto row = [&](std::string name, Weight bound, auto&& body) {
    RowChecker checker{L, view, counterexamples, TableRowCheck{std::move(name), bound}};
    body(checker);
    out.push_back(checker.row);
  };

  row("t-router", alpha, [&](RowChecker& c) {
    for (NodeId r : routers) c.pair(t, r, view.walk({t, r}));
  });
  // The listed path goes through the first bit router.
  row("t-a_i", 2 * alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      const NodeId via = L.a_bit(1, bin(i, 1));
      c.pair(t, L.a(i), view.walk({t, via, L.a(i)}));
    }
  });
  row("t-b_i", 2 * alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      const NodeId via = L.a_bit(1, bin(i, 1) ^ 1);
      c.pair(t, L.b(i), view.walk({t, via, L.b(i)}));
    }
  });
  row("a_i-a_j", alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (std::int64_t j = 1; j <= rows; ++j) {
        if (i != j) c.pair(L.a(i), L.a(j), view.walk({L.a(i), L.a(j)}));
      }
    }
  });
  row("a_i-a^bin_j", alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (int j = 1; j <= s; ++j) {
        const NodeId v = L.a_bit(j, bin(i, j));
        c.pair(L.a(i), v, view.walk({L.a(i), v}));
      }
    }
  });
  row("a_i-a^(bin^1)_j", 2 * alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (int j = 1; j <= s; ++j) {
        const NodeId v = L.a_bit(j, bin(i, j) ^ 1);
        c.pair(L.a(i), v, view.walk({L.a(i), L.a(adj(i, j)), v}));
      }
    }
  });
  row("a_i-b_j", 2 * alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (std::int64_t j = 1; j <= rows; ++j) {
        if (i == j) continue;
        const int z = ind(i, j, s);
        c.pair(L.a(i), L.b(j), view.walk({L.a(i), L.a_bit(z, bin(i, z)), L.b(j)}));
      }
    }
  });
  row("a_i-a*_j", beta, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (std::int64_t j = 1; j <= l; ++j) c.pair(L.a(i), L.a_star(j), view.walk({L.a(i), L.a_star(j)}));
    }
  });
  row("b_i-b_j", alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (std::int64_t j = 1; j <= rows; ++j) {
        if (i != j) c.pair(L.b(i), L.b(j), view.walk({L.b(i), L.b(j)}));
      }
    }
  });
  row("b_i-a^(bin^1)_j", alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (int j = 1; j <= s; ++j) {
        const NodeId v = L.a_bit(j, bin(i, j) ^ 1);
        c.pair(L.b(i), v, view.walk({L.b(i), v}));
      }
    }
  });
  row("b_i-a^bin_j", 2 * alpha, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (int j = 1; j <= s; ++j) {
        const NodeId v = L.a_bit(j, bin(i, j));
        c.pair(L.b(i), v, view.walk({L.b(i), L.b(adj(i, j)), v}));
      }
    }
  });
  row("b_i-a*_j", beta, [&](RowChecker& c) {
    for (std::int64_t i = 1; i <= rows; ++i) {
      for (std::int64_t j = 1; j <= l; ++j) c.pair(L.b(i), L.a_star(j), view.walk({L.b(i), L.a_star(j)}));
    }
  });
  row("router-router", 2 * alpha, [&](RowChecker& c) {
    for (std::size_t u = 0; u < routers.size(); ++u) {
      for (std::size_t v = u + 1; v < routers.size(); ++v)
        c.pair(routers[u], routers[v], view.walk({routers[u], t, routers[v]}));
    }
  });
  return out;
}

struct Extremes {
  Weight diameter = 0;
  Weight radius = 0;
};

Extremes extremes_of(const std::vector<Weight>& ecc) {
  return {*std::max_element(ecc.begin(), ecc.end()), *std::min_element(ecc.begin(), ecc.end())};
}

std::vector<Weight> eccentricities_of(const DistanceTable& table) {
  std::vector<Weight> ecc(table.node_count(), 0);
  for (std::size_t u = 0; u < table.node_count(); ++u) {
    for (const Distance& d : table.row(static_cast<NodeId>(u))) {
      if (!d.is_finite()) throw std::logic_error("contracted gadget is disconnected");
      ecc[u] = std::max(ecc[u], d.value());
    }
  }
  return ecc;
}

}  // namespace

ReductionReport verify_reduction(const GadgetInstance& instance) {
  const auto& L = instance.layout;
  const Weight alpha = instance.params.alpha;
  const Weight beta = instance.params.beta;
  const bool diameter = instance.variant == GadgetVariant::kDiameter;

  ReductionReport report;
  report.variant = instance.variant;
  report.params = instance.params;
  report.n = instance.graph.node_count();
  const auto n = static_cast<Weight>(report.n);
  report.f = diameter ? eval_F(instance.x, instance.y) : eval_F_prime(instance.x, instance.y);
  report.bound_low = std::max(2 * alpha, beta) + n;
  report.bound_high = std::min(alpha + beta, 3 * alpha);

  const auto full = extremes_of(eccentricities(instance.graph));
  const ContractedView view(instance.graph);
  const auto contracted_ecc = eccentricities_of(view.table());
  const auto contracted = extremes_of(contracted_ecc);
  report.exact = diameter ? full.diameter : full.radius;
  report.contracted = diameter ? contracted.diameter : contracted.radius;

  // Contraction sandwich, both quantities.
  report.contraction_ok = contracted.diameter <= full.diameter && full.diameter <= contracted.diameter + n &&
                          contracted.radius <= full.radius && full.radius <= contracted.radius + n;
  if (!report.contraction_ok) {
    note(report.counterexamples, {"contraction", "D", "D'", full.diameter, contracted.diameter});
    note(report.counterexamples, {"contraction", "R", "R'", full.radius, contracted.radius});
  }

  // Gap on G, and the sharper statement on G'.
  const Weight low_contracted = std::max(2 * alpha, beta);
  if (report.f) {
    report.gap_ok = report.exact <= report.bound_low && report.contracted <= low_contracted;
  } else {
    report.gap_ok = report.exact >= report.bound_high && report.contracted >= report.bound_high;
  }
  if (!report.gap_ok) {
    note(report.counterexamples, {report.f ? "gap (F=1)" : "gap (F=0)", diameter ? "D" : "R", "",
                                  report.exact, report.f ? report.bound_low : report.bound_high});
  }

  report.table = check_table(instance, view, report.counterexamples);

  // Every two-edge a_i - b_i path in G' runs through a star router.
  std::set<NodeId> stars;
  for (std::int64_t j = 1; j <= instance.params.l(); ++j) stars.insert(view.of(L.a_star(j)));
  report.two_edge_ok = true;
  for (std::int64_t i = 1; i <= instance.params.rows(); ++i) {
    const NodeId ai = view.of(L.a(i));
    const NodeId bi = view.of(L.b(i));
    if (view.graph().weight(ai, bi)) {
      report.two_edge_ok = false;
      note(report.counterexamples, {"two-edge (direct edge)", L.name(L.a(i)), L.name(L.b(i)), 1, 0});
    }
    for (const auto& nb : view.graph().neighbors(ai)) {
      if (view.graph().weight(nb.node, bi) && !stars.count(nb.node)) {
        report.two_edge_ok = false;
        note(report.counterexamples, {"two-edge (middle is not a star router)", L.name(L.a(i)),
                                      L.name(L.b(i)), nb.node, 0});
      }
    }
  }

  if (!diameter) {
    std::set<NodeId> centers;
    for (std::int64_t i = 1; i <= instance.params.rows(); ++i) centers.insert(view.of(L.a(i)));
    bool ok = true;
    for (std::size_t c = 0; c < contracted_ecc.size(); ++c) {
      if (centers.count(static_cast<NodeId>(c))) continue;
      if (contracted_ecc[c] < 3 * alpha) {
        ok = false;
        note(report.counterexamples, {"eccentricity floor", "contracted node " + std::to_string(c), "",
                                      contracted_ecc[c], 3 * alpha});
      }
    }
    report.hub_floor_ok = ok;
  }

  bool rows_ok = true;
  for (const auto& row : report.table) rows_ok = rows_ok && row.violations == 0 && row.path_violations == 0;
  report.pass = report.gap_ok && report.contraction_ok && report.two_edge_ok && rows_ok &&
                report.hub_floor_ok.value_or(true);
  return report;
}

nlohmann::ordered_json ReductionReport::to_json() const {
  nlohmann::ordered_json j;
  j["variant"] = std::string(qcongest::to_string(variant));
  j["h"] = params.h;
  j["s"] = params.s();
  j["l"] = params.l();
  j["alpha"] = params.alpha;
  j["beta"] = params.beta;
  j["F"] = f ? 1 : 0;
  j["D_or_R_exact"] = exact;
  j["lemma_bound_low"] = bound_low;
  j["lemma_bound_high"] = bound_high;
  j["pass"] = pass;
  j["n"] = n;
  j["contracted_exact"] = contracted;
  j["gap_ok"] = gap_ok;
  j["contraction_ok"] = contraction_ok;
  j["two_edge_ok"] = two_edge_ok;
  if (hub_floor_ok) j["eccentricity_floor_ok"] = *hub_floor_ok;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    rows.push_back({{"row", r.row}, {"bound", r.bound}, {"pairs", r.pairs}, {"violations", r.violations},
                    {"path_violations", r.path_violations}});
  }
  j["table"] = std::move(rows);
  j["counterexamples"] = counterexamples_json(counterexamples);
  return j;
}

// ---------------------------------------------------------------------------
// Ownership schedule

OwnershipSchedule ownership_schedule(const GadgetInstance& instance, std::int64_t rounds) {
  const auto& L = instance.layout;
  const int h = instance.params.h;
  const std::int64_t width = instance.params.width();
  if (rounds < 0 || 2 * rounds >= width)
    throw std::invalid_argument("ownership_schedule: need 0 <= T < 2^h / 2");

  using Kind = GadgetLayout::Coordinates::Kind;
  const std::size_t n = L.node_count();
  OwnershipSchedule out;
  out.rounds = rounds;
  out.crossing_limit = static_cast<std::size_t>(2 * h);
  out.owner.assign(static_cast<std::size_t>(rounds + 1), std::vector<Side>(n, Side::kServer));
  out.crossings.assign(static_cast<std::size_t>(rounds + 1), 0);
  auto where = [&](std::int64_t r) { return "r=" + std::to_string(r); };

  for (std::int64_t r = 0; r <= rounds; ++r) {
    auto& owner = out.owner[static_cast<std::size_t>(r)];
    for (std::size_t v = 0; v < n; ++v) {
      const auto c = L.coordinates(static_cast<NodeId>(v));
      bool server = false, alice = false, bob = false;
      switch (c.kind) {
        case Kind::kTree: {
          const std::int64_t scale = std::int64_t{1} << (h - c.first);
          const std::int64_t lo = (1 + r + scale - 1) / scale;
          const std::int64_t hi = (width - r + scale - 1) / scale;
          const std::int64_t j = c.second;
          server = lo <= j && j <= hi;
          alice = 1 <= j && j < lo;
          bob = hi < j && j <= (std::int64_t{1} << c.first);
          break;
        }
        case Kind::kPath: {
          const std::int64_t j = c.second;
          server = 1 + r <= j && j <= width - r;
          alice = 1 <= j && j < 1 + r;
          bob = width - r < j && j <= width;
          break;
        }
        case Kind::kAlice: alice = true; break;
        case Kind::kBob: bob = true; break;
      }
      if (server + alice + bob != 1) {
        note(out.violations, {"partition", L.name(static_cast<NodeId>(v)), where(r), server + alice + bob, 1});
      }
      owner[v] = alice ? Side::kAlice : bob ? Side::kBob : Side::kServer;
      if (r == 0 && owner[v] != L.side(static_cast<NodeId>(v))) {
        note(out.violations, {"initial owner", L.name(static_cast<NodeId>(v)), where(r), 0, 0});
      }
    }
  }

  for (std::int64_t r = 1; r <= rounds; ++r) {
    const auto& now = out.owner[static_cast<std::size_t>(r)];
    const auto& before = out.owner[static_cast<std::size_t>(r - 1)];
    std::size_t crossings = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const auto node = static_cast<NodeId>(v);
      if (before[v] != now[v] && before[v] != Side::kServer) {
        note(out.violations, {"handover " + std::string(side_name(before[v])) + " to " +
                                  std::string(side_name(now[v])), L.name(node), where(r), 0, 0});
      }
      for (const auto& nb : instance.graph.neighbors(node)) {
        const Side prev = before[static_cast<std::size_t>(nb.node)];
        if (now[v] != Side::kServer) {
          if (prev != now[v] && prev != Side::kServer) {
            note(out.violations, {"neighborhood", L.name(node), where(r), 0, 0});
          }
        } else if (before[v] == Side::kServer && prev != Side::kServer) {
          ++crossings;
          if (L.coordinates(node).kind == Kind::kPath) {
            note(out.violations, {"crossing into a path node", L.name(node), where(r), 1, 0});
          }
        }
      }
    }
    out.crossings[static_cast<std::size_t>(r)] = crossings;
    if (crossings > out.crossing_limit) {
      note(out.violations, {"crossings", "", where(r), static_cast<Weight>(crossings),
                            static_cast<Weight>(out.crossing_limit)});
    }
  }
  return out;
}

std::size_t OwnershipSchedule::total_crossings() const {
  std::size_t total = 0;
  for (auto c : crossings) total += c;
  return total;
}

nlohmann::ordered_json OwnershipSchedule::to_json() const {
  nlohmann::ordered_json j;
  j["rounds"] = rounds;
  j["crossing_limit"] = crossing_limit;
  j["crossings"] = std::vector<std::size_t>(crossings.begin() + (crossings.empty() ? 0 : 1), crossings.end());
  j["total_crossings"] = total_crossings();
  auto sizes = nlohmann::ordered_json::array();
  for (const auto& owner : this->owner) {
    std::size_t a = 0, b = 0, s = 0;
    for (Side side : owner) (side == Side::kAlice ? a : side == Side::kBob ? b : s)++;
    sizes.push_back({{"alice", a}, {"bob", b}, {"server", s}});
  }
  j["owned"] = std::move(sizes);
  j["ok"] = ok();
  j["violations"] = counterexamples_json(violations);
  return j;
}

}  // namespace qcongest
