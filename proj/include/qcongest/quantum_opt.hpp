#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qcongest/engine.hpp"
#include "qcongest/overlay.hpp"
#include "qcongest/rational.hpp"

namespace qcongest {

enum class Objective { kMaximize, kMinimize };

/// A search value; nullopt marks an element without a value (an empty
/// skeleton set), which loses against everything.
using Score = std::optional<Rational>;

bool better(const Score& a, const Score& b, Objective objective);

/// Global constant in the evaluation budget C * sqrt(ln(1/delta) / rho).
inline constexpr double kAmplificationConstant = 3.0;

/// Search over a finite domain whose values are all known offline. The table
/// only decides what a measurement returns; the search is charged for every
/// evaluation it performs.
struct SearchProblem {
  std::vector<Score> table;
  Objective objective = Objective::kMaximize;
  Round t0 = 0;  // Initialization rounds
  Round t = 0;   // Setup + Evaluation (and inverses) rounds
  double rho = 1.0;
  double delta = 1.0 / 12;
  /// Success threshold M; defaults to the optimum of the table.
  Score threshold;
  double amplification = kAmplificationConstant;
};

struct SearchTrace {
  std::int64_t evaluations = 0;
  std::int64_t budget = 0;
  Round t0 = 0;
  Round t = 0;
  Round charged_rounds = 0;
  std::size_t found = 0;
  Score value;
  bool success = false;
  double rho = 1.0;
  double delta = 1.0 / 12;
  double amplification = kAmplificationConstant;

  nlohmann::ordered_json to_json() const;
};

/// Largest evaluation count a search may use: floor(C * sqrt(ln(1/delta) / rho)), at least 1.
std::int64_t evaluation_budget(double rho, double delta, double amplification = kAmplificationConstant);

/// Threshold search with random iteration counts (growing by 6/5 per miss)
/// from a uniformly sampled start. A run of j amplification steps followed by
/// one measurement costs j + 1 evaluations. Stops once the budget is used.
SearchTrace amplified_max_search(const SearchProblem& problem, std::uint64_t seed);

/// Reference mode: evaluates the whole domain and returns its optimum.
SearchTrace exhaustive_search(const SearchProblem& problem);

struct ParameterSchedule {
  int q = 1;               // eps = 1/q
  std::int64_t r = 1;      // expected skeleton size
  std::int64_t hops = 1;   // l
  std::int64_t k = 0;      // shortcut fan-out
  std::int64_t d_g = 0;    // unweighted diameter of the network

  static ParameterSchedule make(std::size_t n, std::int64_t d_g, int max_q = 16);
  nlohmann::ordered_json to_json() const;
};

struct IndexEvaluation {
  std::vector<NodeId> skeleton;
  std::vector<Rational> eccentricity;  // approximate, per skeleton node
  Score exact;                         // optimum over the skeleton
  Score value;                         // what the inner search returned
  SearchTrace inner;
  CostLedger init;     // multi-source search and embedding
  CostLedger branch;   // charge for one inner evaluation
  CostLedger charged;  // init + inner evaluations * branch
  bool congestion_failed = false;
  /// All approximate distances of this index lie in [d, (1+eps)^2 d].
  std::optional<bool> sandwich_ok;
};

struct SearchConfig {
  double delta = 1.0 / 12;
  double amplification = kAmplificationConstant;
  int max_q = 16;
  int max_resamples = 3;
  bool exhaustive = false;
  bool check_sandwich = true;
};

/// Evaluates one skeleton set: initialization (multi-source search,
/// embedding), then an inner search over the skeleton for the best
/// approximate eccentricity. Runs on a private copy of `net`.
IndexEvaluation evaluate_f_i(const Network& net, std::span<const NodeId> skeleton, std::size_t index,
                             const ParameterSchedule& schedule, Objective objective,
                             const SearchConfig& config, std::uint64_t seed,
                             const DistanceTable* exact = nullptr);

struct ApproxResult {
  Objective objective = Objective::kMaximize;
  std::size_t n = 0;
  ParameterSchedule schedule;
  Score estimate;
  Weight true_value = 0;
  bool success = false;
  bool rho_fallback = false;  // no good index; the analytic fraction r/n was used
  int resamples = 0;
  std::size_t good_indices = 0;
  bool sandwich_ok = true;    // every evaluated index met the distance sandwich
  SearchTrace outer;
  std::vector<IndexEvaluation> indices;
  CostLedger ledger;

  nlohmann::ordered_json to_json() const;
};

ApproxResult approx_diameter(Network& net, const SearchConfig& config = {});
ApproxResult approx_radius(Network& net, const SearchConfig& config = {});
ApproxResult approx_eccentricity_extremum(Network& net, Objective objective,
                                          const SearchConfig& config = {});

}  // namespace qcongest
