#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcongest/graph.hpp"

namespace qcongest {

enum class GadgetVariant { kDiameter, kRadius };

std::string_view to_string(GadgetVariant variant);
GadgetVariant parse_variant(std::string_view text);

/// h even and >= 2, s = 3h/2, l = 2^(s-h). alpha and beta default to n^2
/// and 2n^2 of the instance they are used for (0 means "default").
struct GadgetParams {
  int h = 2;
  Weight alpha = 0;
  Weight beta = 0;

  int s() const { return 3 * h / 2; }
  std::int64_t l() const { return std::int64_t{1} << (s() - h); }
  std::int64_t rows() const { return std::int64_t{1} << s(); }  // 2^s
  std::int64_t width() const { return std::int64_t{1} << h; }   // 2^h, path length in nodes
  std::int64_t path_count() const { return 2 * s() + l(); }     // m
  std::int64_t input_bits() const { return rows() * l(); }
  std::size_t node_count(GadgetVariant variant) const;

  void validate() const;
};

/// x or y: bits x_{i,j}, i in [1, 2^s], j in [1, l], stored row-major.
struct InputMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::uint8_t> bits;

  static InputMatrix filled(std::int64_t rows, std::int64_t cols, bool value);
  bool at(std::int64_t i, std::int64_t j) const;  // 1-based
  void set(std::int64_t i, std::int64_t j, bool value);
  std::string str() const;  // rows joined by '/'
  static InputMatrix parse(std::string_view text, std::int64_t rows, std::int64_t cols);
};

/// Bit j (1-based, least significant first) of i - 1.
int bin(std::int64_t i, int j);
/// The index whose bin differs from i exactly at bit j.
std::int64_t adj(std::int64_t i, int j);
/// Smallest z in [1, s] with bin(i, z) != bin(j, z); 0 when i == j.
int ind(std::int64_t i, std::int64_t j, int s);

enum class Side { kServer, kAlice, kBob };

/// Node ids of the generated graph by name.
class GadgetLayout {
 public:
  GadgetLayout(const GadgetParams& params, GadgetVariant variant);

  std::size_t node_count() const { return names_.size(); }
  const std::string& name(NodeId v) const { return names_.at(static_cast<std::size_t>(v)); }
  Side side(NodeId v) const { return sides_.at(static_cast<std::size_t>(v)); }

  NodeId t(int depth, std::int64_t j) const;       // depth in [0,h], j in [1, 2^depth]
  NodeId p(std::int64_t i, std::int64_t j) const;  // i in [1,m], j in [1, 2^h]
  NodeId a(std::int64_t i) const;                  // i in [1, 2^s]; a(0) is the radius hub
  NodeId a_bit(int j, int bit) const;              // a^bit_j, j in [1, s]
  NodeId a_star(std::int64_t j) const;             // j in [1, l]
  NodeId b(std::int64_t i) const;
  NodeId b_bit(int j, int bit) const;
  NodeId b_star(std::int64_t j) const;
  bool has_hub() const { return hub_ >= 0; }

  /// Node coordinates for the ownership schedule: depth/index for tree
  /// nodes, path/index for path nodes.
  struct Coordinates {
    enum class Kind { kTree, kPath, kAlice, kBob } kind;
    std::int64_t first = 0;
    std::int64_t second = 0;
  };
  Coordinates coordinates(NodeId v) const;

 private:
  NodeId add(std::string name, Side side, Coordinates where);

  GadgetParams params_;
  std::vector<std::string> names_;
  std::vector<Side> sides_;
  std::vector<Coordinates> where_;
  NodeId tree_ = 0, path_ = 0, a_ = 0, a_bit_ = 0, a_star_ = 0;
  NodeId b_ = 0, b_bit_ = 0, b_star_ = 0, hub_ = -1;
};

struct GadgetInstance {
  GadgetParams params;  // alpha and beta resolved
  GadgetVariant variant = GadgetVariant::kDiameter;
  InputMatrix x;
  InputMatrix y;
  GadgetLayout layout;
  WeightedGraph graph;
};

/// Builds the lower-bound graph for inputs x (Alice) and y (Bob).
GadgetInstance build_gadget(GadgetParams params, const InputMatrix& x, const InputMatrix& y,
                            GadgetVariant variant);

/// AND over rows of OR over columns of x AND y.
bool eval_F(const InputMatrix& x, const InputMatrix& y);
/// OR over all entries of x AND y.
bool eval_F_prime(const InputMatrix& x, const InputMatrix& y);

class PromiseViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 1 iff x + y is 0 or 1 mod 4.
bool ver(int x, int y);
/// Blocks of four bits, written left to right as in "0011".
using Block4 = std::array<std::uint8_t, 4>;
Block4 block_of(std::string_view bits);
/// OR over the four positions of x_k AND y_k.
bool gdt(const Block4& x, const Block4& y);
/// Promise encodings: x in {0011, 1001, 1100, 0110}, y in {0001, 0010, 0100, 1000},
/// both listed for the values 0..3.
Block4 encode_x(int value);
Block4 encode_y(int value);
/// Decodes both blocks under the promise, throws PromiseViolation outside
/// it, and checks that gdt agrees with ver on the decoded pair.
bool ver_promise(const Block4& x, const Block4& y);
/// F and F' computed block-wise through gdt on groups of four consecutive
/// input bits. F needs l divisible by 4, F' needs 2^s * l divisible by 4.
bool eval_F_via_gdt(const InputMatrix& x, const InputMatrix& y);
bool eval_F_prime_via_gdt(const InputMatrix& x, const InputMatrix& y);

struct Counterexample {
  std::string check;
  std::string u;
  std::string v;
  Weight value = 0;
  Weight bound = 0;
};

struct TableRowCheck {
  std::string row;
  Weight bound = 0;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t path_violations = 0;  // the listed witness path is missing or too long
};

struct ReductionReport {
  GadgetVariant variant = GadgetVariant::kDiameter;
  GadgetParams params;
  std::size_t n = 0;
  bool f = false;  // F for diameter, F' for radius
  Weight exact = 0;
  Weight contracted = 0;
  Weight bound_low = 0;   // max{2a, b} + n
  Weight bound_high = 0;  // min{a + b, 3a}
  bool gap_ok = false;
  bool contraction_ok = false;
  bool two_edge_ok = false;
  std::optional<bool> hub_floor_ok;  // radius only
  std::vector<TableRowCheck> table;
  std::vector<Counterexample> counterexamples;
  bool pass = false;

  nlohmann::ordered_json to_json() const;
};

/// Exact diameter or radius of the gadget and its contraction, checked
/// against the gap and every distance bound of the contracted graph.
ReductionReport verify_reduction(const GadgetInstance& instance);

/// Owner of every node at the end of each round r in [0, T].
struct OwnershipSchedule {
  std::int64_t rounds = 0;  // T
  std::vector<std::vector<Side>> owner;  // [r][node]
  std::vector<std::size_t> crossings;    // [r], r >= 1
  std::size_t crossing_limit = 0;        // 2h
  std::vector<Counterexample> violations;

  bool ok() const { return violations.empty(); }
  std::size_t total_crossings() const;
  nlohmann::ordered_json to_json() const;
};

/// Evaluates the interval formulas for every round and validates the
/// partition, neighborhood compatibility and the crossing count.
OwnershipSchedule ownership_schedule(const GadgetInstance& instance, std::int64_t rounds);

/// Random inputs: every bit is 1 with a density drawn from [0.25, 0.95].
std::pair<InputMatrix, InputMatrix> random_inputs(const GadgetParams& params, std::uint64_t seed);

}  // namespace qcongest
