#ifndef ZONECOST_EXPLORER_HPP
#define ZONECOST_EXPLORER_HPP

// Forward exploration of priced zones for optimal-cost reachability.

#include "zonecost/inclusion.hpp"
#include "zonecost/model.hpp"
#include "zonecost/priced_zone.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zonecost {

enum class InclusionKind { abstract, simple };
enum class Strategy { bfs, dfs, sbfs };

/// Default iteration cap imposed on models with negative weights.
inline constexpr std::uint64_t kNegativeWeightCap = 1'000'000;

struct ExplorerConfig {
  InclusionKind inclusion = InclusionKind::abstract;
  Strategy strategy = Strategy::sbfs;
  bool pruning = false;
  /// Known upper bound on the optimum; states costing more are dropped.
  std::optional<Rational> hint;
  bool uniform_m = false;
  /// Maximal number of states popped from Waiting.
  std::optional<std::uint64_t> iteration_cap;
  std::optional<std::chrono::milliseconds> time_cap;

  /// Called each time the best known cost improves.
  std::function<void(ExtValue const & cost, std::uint64_t popped)> on_progress;
  /// Called after every inclusion test: (tested, against, result).
  std::function<void(PricedZone const &, PricedZone const &, bool)> on_inclusion_test;
};

struct Stats {
  std::uint64_t added_to_waiting = 0;
  std::uint64_t added_to_passed = 0;
  /// Largest |Waiting| + |Passed| seen.
  std::uint64_t max_stored = 0;
  std::uint64_t tests = 0;
  std::uint64_t successful_tests = 0;
  std::uint64_t popped = 0;
  double wall_time_ms = 0;
};

struct SymbolicState {
  std::size_t location = 0;
  PricedZone zone;
  /// Edge taken from the previous state of the trace; unset for the root.
  std::optional<std::size_t> edge;
};

struct Verdict {
  ExtValue cost = ExtValue::plus_infinity();
  bool terminated = true;
  Stats stats;
  /// Root-to-goal states of the best goal state found, when the cost is finite.
  std::vector<SymbolicState> trace;
  std::vector<std::string> warnings;
};

/// States reached by letting time elapse from the initial zone (usually a
/// single one) and the successors through each edge, as used by explore().
std::vector<SymbolicState> initial_states(model::Automaton const & a);
std::vector<SymbolicState> symbolic_post(model::Automaton const & a, SymbolicState const & s);

/// Throws std::invalid_argument when pruning or a hint is requested on a
/// model with negative weights.
Verdict explore(model::Automaton const & a, ExplorerConfig const & cfg);

/// A concrete run following the trace whose cost is at most
/// mincost(last state) + eps. Throws std::domain_error if that cost is not finite.
model::Run extract_witness(model::Automaton const & a, std::vector<SymbolicState> const & trace, Rational const & eps);

}  // namespace zonecost

#endif  // ZONECOST_EXPLORER_HPP
