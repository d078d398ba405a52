#include "qcongest/gadget.hpp"

#include <algorithm>
#include <random>

#include "qcongest/generators.hpp"

namespace qcongest {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::string indexed(std::string_view base, std::int64_t i) {
  return std::string(base) + "(" + std::to_string(i) + ")";
}

std::string indexed(std::string_view base, std::int64_t i, std::int64_t j) {
  return std::string(base) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void check_shape(const GadgetParams& params, const InputMatrix& m, const char* which) {
  if (m.rows != params.rows() || m.cols != params.l() ||
      m.bits.size() != static_cast<std::size_t>(m.rows * m.cols)) {
    throw std::invalid_argument(std::string("input ") + which + " must be " +
                                std::to_string(params.rows()) + " x " + std::to_string(params.l()));
  }
}

void check_same_shape(const InputMatrix& x, const InputMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols || x.bits.size() != y.bits.size())
    throw std::invalid_argument("inputs x and y differ in shape");
}

}  // namespace

std::string_view to_string(GadgetVariant variant) {
  return variant == GadgetVariant::kDiameter ? "diameter" : "radius";
}

GadgetVariant parse_variant(std::string_view text) {
  if (text == "diameter") return GadgetVariant::kDiameter;
  if (text == "radius") return GadgetVariant::kRadius;
  throw std::invalid_argument("unknown gadget variant: " + std::string(text));
}

std::size_t GadgetParams::node_count(GadgetVariant variant) const {
  const std::int64_t n = (2 * width() - 1) + path_count() * (width() + 2) + 2 * rows();
  return static_cast<std::size_t>(n + (variant == GadgetVariant::kRadius ? 1 : 0));
}

void GadgetParams::validate() const {
  if (h < 2 || h % 2 != 0) throw std::invalid_argument("h must be an even number >= 2");
  if (h > 20) throw std::invalid_argument("h too large");
  if (alpha != 0 || beta != 0) {
    if (alpha < 2) throw std::invalid_argument("alpha must be >= 2 (weight 1 marks contracted edges)");
    if (!(alpha < beta)) throw std::invalid_argument("alpha must be smaller than beta");
  }
}

InputMatrix InputMatrix::filled(std::int64_t rows, std::int64_t cols, bool value) {
  InputMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.bits.assign(static_cast<std::size_t>(rows * cols), value ? 1 : 0);
  return m;
}

bool InputMatrix::at(std::int64_t i, std::int64_t j) const {
  if (i < 1 || i > rows || j < 1 || j > cols) throw std::out_of_range("input index out of range");
  return bits[static_cast<std::size_t>((i - 1) * cols + (j - 1))] != 0;
}

void InputMatrix::set(std::int64_t i, std::int64_t j, bool value) {
  if (i < 1 || i > rows || j < 1 || j > cols) throw std::out_of_range("input index out of range");
  bits[static_cast<std::size_t>((i - 1) * cols + (j - 1))] = value ? 1 : 0;
}

std::string InputMatrix::str() const {
  std::string out;
  for (std::int64_t i = 1; i <= rows; ++i) {
    if (i > 1) out += '/';
    for (std::int64_t j = 1; j <= cols; ++j) out += at(i, j) ? '1' : '0';
  }
  return out;
}

InputMatrix InputMatrix::parse(std::string_view text, std::int64_t rows, std::int64_t cols) {
  InputMatrix m;
  m.rows = rows;
  m.cols = cols;
  for (char c : text) {
    if (c == '0' || c == '1') {
      m.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != '/' && c != ',' && c != ' ' && c != '\n' && c != '\t') {
      throw std::invalid_argument(std::string("unexpected character in input bits: ") + c);
    }
  }
  if (m.bits.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("expected " + std::to_string(rows * cols) + " input bits, got " +
                                std::to_string(m.bits.size()));
  }
  return m;
}

int bin(std::int64_t i, int j) { return static_cast<int>(((i - 1) >> (j - 1)) & 1); }

std::int64_t adj(std::int64_t i, int j) { return ((i - 1) ^ (std::int64_t{1} << (j - 1))) + 1; }

int ind(std::int64_t i, std::int64_t j, int s) {
  for (int z = 1; z <= s; ++z) {
    if (bin(i, z) != bin(j, z)) return z;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Layout

GadgetLayout::GadgetLayout(const GadgetParams& params, GadgetVariant variant) : params_(params) {
  using Kind = Coordinates::Kind;
  const int h = params.h;
  tree_ = 0;
  for (int depth = 0; depth <= h; ++depth) {
    for (std::int64_t j = 1; j <= (std::int64_t{1} << depth); ++j)
      add(indexed("t", depth, j), Side::kServer, {Kind::kTree, depth, j});
  }
  path_ = static_cast<NodeId>(names_.size());
  for (std::int64_t i = 1; i <= params.path_count(); ++i) {
    for (std::int64_t j = 1; j <= params.width(); ++j)
      add(indexed("p", i, j), Side::kServer, {Kind::kPath, i, j});
  }
  for (int pass = 0; pass < 2; ++pass) {
    const Side side = pass == 0 ? Side::kAlice : Side::kBob;
    const Kind kind = pass == 0 ? Kind::kAlice : Kind::kBob;
    const std::string base = pass == 0 ? "a" : "b";
    (pass == 0 ? a_ : b_) = static_cast<NodeId>(names_.size());
    for (std::int64_t i = 1; i <= params.rows(); ++i) add(indexed(base, i), side, {kind, i, 0});
    (pass == 0 ? a_bit_ : b_bit_) = static_cast<NodeId>(names_.size());
    for (int j = 1; j <= params.s(); ++j) {
      add(indexed(base + "^0", j), side, {kind, j, 0});
      add(indexed(base + "^1", j), side, {kind, j, 1});
    }
    (pass == 0 ? a_star_ : b_star_) = static_cast<NodeId>(names_.size());
    for (std::int64_t j = 1; j <= params.l(); ++j) add(indexed(base + "*", j), side, {kind, j, 0});
  }
  if (variant == GadgetVariant::kRadius) hub_ = add("a(0)", Side::kAlice, {Kind::kAlice, 0, 0});
}

NodeId GadgetLayout::add(std::string name, Side side, Coordinates where) {
  names_.push_back(std::move(name));
  sides_.push_back(side);
  where_.push_back(where);
  return static_cast<NodeId>(names_.size() - 1);
}

NodeId GadgetLayout::t(int depth, std::int64_t j) const {
  if (depth < 0 || depth > params_.h || j < 1 || j > (std::int64_t{1} << depth))
    throw std::out_of_range("tree node out of range");
  return tree_ + static_cast<NodeId>((std::int64_t{1} << depth) - 1 + (j - 1));
}

NodeId GadgetLayout::p(std::int64_t i, std::int64_t j) const {
  if (i < 1 || i > params_.path_count() || j < 1 || j > params_.width())
    throw std::out_of_range("path node out of range");
  return path_ + static_cast<NodeId>((i - 1) * params_.width() + (j - 1));
}

NodeId GadgetLayout::a(std::int64_t i) const {
  if (i == 0) {
    if (hub_ < 0) throw std::out_of_range("a(0) exists only in the radius gadget");
    return hub_;
  }
  if (i < 1 || i > params_.rows()) throw std::out_of_range("a(i) out of range");
  return a_ + static_cast<NodeId>(i - 1);
}

NodeId GadgetLayout::a_bit(int j, int bit) const {
  if (j < 1 || j > params_.s() || (bit != 0 && bit != 1)) throw std::out_of_range("a^b(j) out of range");
  return a_bit_ + static_cast<NodeId>(2 * (j - 1) + bit);
}

NodeId GadgetLayout::a_star(std::int64_t j) const {
  if (j < 1 || j > params_.l()) throw std::out_of_range("a*(j) out of range");
  return a_star_ + static_cast<NodeId>(j - 1);
}

NodeId GadgetLayout::b(std::int64_t i) const {
  if (i < 1 || i > params_.rows()) throw std::out_of_range("b(i) out of range");
  return b_ + static_cast<NodeId>(i - 1);
}

NodeId GadgetLayout::b_bit(int j, int bit) const {
  if (j < 1 || j > params_.s() || (bit != 0 && bit != 1)) throw std::out_of_range("b^b(j) out of range");
  return b_bit_ + static_cast<NodeId>(2 * (j - 1) + bit);
}

NodeId GadgetLayout::b_star(std::int64_t j) const {
  if (j < 1 || j > params_.l()) throw std::out_of_range("b*(j) out of range");
  return b_star_ + static_cast<NodeId>(j - 1);
}

GadgetLayout::Coordinates GadgetLayout::coordinates(NodeId v) const {
  return where_.at(static_cast<std::size_t>(v));
}

// ---------------------------------------------------------------------------
// Construction

GadgetInstance build_gadget(GadgetParams params, const InputMatrix& x, const InputMatrix& y,
                            GadgetVariant variant) {
  params.validate();
  check_shape(params, x, "x");
  check_shape(params, y, "y");
  const auto n = static_cast<Weight>(params.node_count(variant));
  if (params.alpha == 0) params.alpha = n * n;
  if (params.beta == 0) params.beta = 2 * n * n;
  params.validate();

  GadgetLayout L(params, variant);
  const Weight alpha = params.alpha;
  const Weight beta = params.beta;
  const int h = params.h;
  const int s = params.s();
  const std::int64_t l = params.l();
  const std::int64_t rows = params.rows();
  const std::int64_t width = params.width();
  std::vector<Edge> edges;

  // Server part: binary tree, paths, and leaf-to-path edges.
  for (int depth = 1; depth <= h; ++depth) {
    for (std::int64_t j = 1; j <= (std::int64_t{1} << depth); ++j)
      edges.push_back({L.t(depth, j), L.t(depth - 1, ceil_div(j, 2)), 1});
  }
  for (std::int64_t i = 1; i <= params.path_count(); ++i) {
    for (std::int64_t j = 2; j <= width; ++j) edges.push_back({L.p(i, j), L.p(i, j - 1), 1});
    for (std::int64_t j = 1; j <= width; ++j) edges.push_back({L.t(h, j), L.p(i, j), alpha});
  }

  // Alice and Bob.
  for (std::int64_t i = 1; i <= rows; ++i) {
    for (int j = 1; j <= s; ++j) {
      edges.push_back({L.a(i), L.a_bit(j, bin(i, j)), alpha});
      edges.push_back({L.b(i), L.b_bit(j, bin(i, j)), alpha});
    }
    for (std::int64_t j = 1; j <= l; ++j) {
      edges.push_back({L.a(i), L.a_star(j), x.at(i, j) ? alpha : beta});
      edges.push_back({L.b(i), L.b_star(j), y.at(i, j) ? alpha : beta});
    }
    for (std::int64_t k = i + 1; k <= rows; ++k) {
      edges.push_back({L.a(i), L.a(k), alpha});
      edges.push_back({L.b(i), L.b(k), alpha});
    }
    if (variant == GadgetVariant::kRadius) edges.push_back({L.a(0), L.a(i), 2 * alpha});
  }

  // Path endpoints into V_A and V_B.
  for (int i = 1; i <= s; ++i) {
    edges.push_back({L.a_bit(i, 0), L.p(2 * i - 1, 1), 1});
    edges.push_back({L.b_bit(i, 1), L.p(2 * i - 1, width), 1});
    edges.push_back({L.a_bit(i, 1), L.p(2 * i, 1), 1});
    edges.push_back({L.b_bit(i, 0), L.p(2 * i, width), 1});
  }
  for (std::int64_t i = 1; i <= l; ++i) {
    edges.push_back({L.a_star(i), L.p(2 * s + i, 1), 1});
    edges.push_back({L.b_star(i), L.p(2 * s + i, width), 1});
  }

  WeightedGraph graph(L.node_count(), std::move(edges));
  return GadgetInstance{params, variant, x, y, std::move(L), std::move(graph)};
}

// ---------------------------------------------------------------------------
// Boolean functions

bool eval_F(const InputMatrix& x, const InputMatrix& y) {
  check_same_shape(x, y);
  for (std::int64_t i = 1; i <= x.rows; ++i) {
    bool any = false;
    for (std::int64_t j = 1; j <= x.cols && !any; ++j) any = x.at(i, j) && y.at(i, j);
    if (!any) return false;
  }
  return true;
}

bool eval_F_prime(const InputMatrix& x, const InputMatrix& y) {
  check_same_shape(x, y);
  for (std::size_t k = 0; k < x.bits.size(); ++k) {
    if (x.bits[k] && y.bits[k]) return true;
  }
  return false;
}

bool ver(int x, int y) {
  if (x < 0 || x > 3 || y < 0 || y > 3) throw std::invalid_argument("ver: arguments must be in [0, 3]");
  return (x + y) % 4 <= 1;
}

Block4 block_of(std::string_view bits) {
  if (bits.size() != 4) throw std::invalid_argument("a block has exactly four bits");
  Block4 out{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (bits[k] != '0' && bits[k] != '1') throw std::invalid_argument("block bits must be 0 or 1");
    out[k] = static_cast<std::uint8_t>(bits[k] - '0');
  }
  return out;
}

bool gdt(const Block4& x, const Block4& y) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (x[k] && y[k]) return true;
  }
  return false;
}

namespace {
constexpr std::array<std::string_view, 4> kPromiseX = {"0011", "1001", "1100", "0110"};
constexpr std::array<std::string_view, 4> kPromiseY = {"0001", "0010", "0100", "1000"};

int decode(const Block4& block, const std::array<std::string_view, 4>& table, const char* which) {
  for (int value = 0; value < 4; ++value) {
    if (block_of(table[static_cast<std::size_t>(value)]) == block) return value;
  }
  std::string bits;
  for (auto b : block) bits += static_cast<char>('0' + b);
  throw PromiseViolation(std::string(which) + " block " + bits + " is outside the promise set");
}

/// and_of_rows: AND over rows of OR over the blocks of a row; otherwise OR over all blocks.
bool blockwise(const InputMatrix& x, const InputMatrix& y, bool and_of_rows) {
  check_same_shape(x, y);
  if (x.cols % 4 != 0) throw std::invalid_argument("row length is not a multiple of 4");
  bool all = true;
  for (std::int64_t i = 1; i <= x.rows; ++i) {
    bool any = false;
    for (std::int64_t j = 1; j <= x.cols; j += 4) {
      Block4 bx{}, by{};
      for (std::int64_t k = 0; k < 4; ++k) {
        bx[static_cast<std::size_t>(k)] = x.at(i, j + k) ? 1 : 0;
        by[static_cast<std::size_t>(k)] = y.at(i, j + k) ? 1 : 0;
      }
      any = any || gdt(bx, by);
    }
    if (!and_of_rows && any) return true;
    all = all && any;
  }
  return and_of_rows ? all : false;
}
}  // namespace

Block4 encode_x(int value) {
  if (value < 0 || value > 3) throw std::invalid_argument("encode_x: value must be in [0, 3]");
  return block_of(kPromiseX[static_cast<std::size_t>(value)]);
}

Block4 encode_y(int value) {
  if (value < 0 || value > 3) throw std::invalid_argument("encode_y: value must be in [0, 3]");
  return block_of(kPromiseY[static_cast<std::size_t>(value)]);
}

bool ver_promise(const Block4& x, const Block4& y) {
  const int vx = decode(x, kPromiseX, "x");
  const int vy = decode(y, kPromiseY, "y");
  const bool v = ver(vx, vy);
  if (v != gdt(x, y)) throw std::logic_error("gdt disagrees with ver under the promise");
  return v;
}

bool eval_F_via_gdt(const InputMatrix& x, const InputMatrix& y) {
  if (x.cols % 4 != 0) throw std::invalid_argument("F through gdt needs l divisible by 4");
  return blockwise(x, y, true);
}

bool eval_F_prime_via_gdt(const InputMatrix& x, const InputMatrix& y) {
  check_same_shape(x, y);
  if (x.bits.size() % 4 != 0) throw std::invalid_argument("F' through gdt needs 2^s * l divisible by 4");
  // The row structure does not matter for F'; regroup into one long row.
  InputMatrix fx{1, static_cast<std::int64_t>(x.bits.size()), x.bits};
  InputMatrix fy{1, static_cast<std::int64_t>(y.bits.size()), y.bits};
  return blockwise(fx, fy, false);
}

std::pair<InputMatrix, InputMatrix> random_inputs(const GadgetParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double density = 0.25 + 0.7 * uniform_unit(rng);
  auto x = InputMatrix::filled(params.rows(), params.l(), false);
  auto y = x;
  for (auto& bit : x.bits) bit = uniform_unit(rng) < density ? 1 : 0;
  for (auto& bit : y.bits) bit = uniform_unit(rng) < density ? 1 : 0;
  return {std::move(x), std::move(y)};
}

}  // namespace qcongest
