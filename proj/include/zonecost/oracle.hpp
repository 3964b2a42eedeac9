#ifndef ZONECOST_ORACLE_HPP
#define ZONECOST_ORACLE_HPP

// Corner-point abstraction: a finite weighted graph over (location, region,
// corner) whose shortest-path cost is the optimal cost of the automaton.

#include "zonecost/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace zonecost::oracle {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// Clocks above their maximal constant have int_part = rank = -1. Bounded
/// clocks have rank 0 when their fractional part is zero, otherwise the rank
/// of their fractional part among the bounded clocks (1, 2, ... without gaps).
struct Region {
  std::vector<int> int_part;
  std::vector<int> rank;

  bool above(std::size_t i) const { return int_part[i] < 0; }
  friend auto operator<=>(Region const &, Region const &) = default;
};

/// Integer point over the bounded clocks; entries of clocks above M are -1.
using Corner = std::vector<int>;

/// Absent constants count as 0.
std::vector<int> bounds_of(MaxConstants const & m);

std::vector<Region> all_regions(std::vector<int> const & m);
Region region_of(std::span<Rational const> v, std::vector<int> const & m);
std::vector<Corner> corners(Region const & r);
std::optional<Region> time_successor(Region const & r, std::vector<int> const & m);
bool satisfies(model::Guard const & g, Region const & r);

struct CornerState {
  std::size_t location = 0;
  Region region;
  Corner corner;

  friend auto operator<=>(CornerState const &, CornerState const &) = default;
};

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t weight = 0;
};

struct Graph {
  std::vector<CornerState> nodes;
  std::vector<Arc> arcs;
  /// Node 0 is the initial state whenever the graph is non-empty.
  bool has_initial = false;
  std::vector<bool> goal;
};

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Part of the abstraction reachable from the initial corner state. Throws
/// TooLarge once more than cap states are reached.
Graph build_corner_point(model::Automaton const & a, MaxConstants const & m, std::size_t cap = kDefaultStateCap);

/// Shortest distance from the initial state to a goal state; -inf when a
/// negative cycle is reachable and co-reaches a goal.
ExtValue optimal_cost_cp(Graph const & g);

ExtValue optimal_cost(model::Automaton const & a, std::size_t cap = kDefaultStateCap);

}  // namespace zonecost::oracle

#endif  // ZONECOST_ORACLE_HPP
