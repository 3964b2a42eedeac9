#ifndef ZONECOST_MODEL_HPP
#define ZONECOST_MODEL_HPP

// Weighted timed automata, their textual format, product of a network and
// evaluation of concrete runs.

#include "zonecost/dbm.hpp"
#include "zonecost/inclusion.hpp"
#include "zonecost/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zonecost::model {

enum class Op { lt, le, eq, ge, gt };

/// clock op value, value a natural number.
struct Atom {
  dbm::ClockIndex clock = 0;
  Op op = Op::le;
  std::int64_t value = 0;

  friend bool operator==(Atom const &, Atom const &) = default;
};

using Guard = std::vector<Atom>;

std::vector<dbm::IntConstraint> constraints(Guard const & g);
bool satisfies(Guard const & g, std::span<Rational const> valuation);

struct Location {
  std::string name;
  std::int64_t rate = 0;
  Guard invariant;
  bool goal = false;

  friend bool operator==(Location const &, Location const &) = default;
};

struct Sync {
  std::string channel;
  bool send = true;

  friend bool operator==(Sync const &, Sync const &) = default;
};

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  Guard guard;
  std::vector<dbm::ClockIndex> resets;
  std::int64_t weight = 0;
  std::optional<Sync> sync;

  friend bool operator==(Edge const &, Edge const &) = default;
};

/// Clocks are shared by every automaton of a network; clock i is clocks[i-1].
struct Automaton {
  std::string name;
  std::vector<std::string> clocks;
  std::vector<Location> locations;
  std::size_t initial = 0;
  std::vector<Edge> edges;

  std::size_t clock_count() const { return clocks.size(); }
  bool has_goal() const;
  bool has_negative_weights() const;
  std::optional<std::size_t> location_index(std::string_view name) const;

  friend bool operator==(Automaton const &, Automaton const &) = default;
};

struct Network {
  std::vector<std::string> clocks;
  std::vector<Automaton> automata;

  friend bool operator==(Network const &, Network const &) = default;
};

struct ParseError : std::runtime_error {
  std::size_t line;
  std::size_t column;
  ParseError(std::size_t line, std::size_t column, std::string const & what);
};

Network parse_model(std::string_view text);
std::string serialize(Network const & n);

/// Synchronous product; a single automaton is returned unchanged. Product
/// locations are named by joining component names with '.'.
Automaton compose(Network const & n);

MaxConstants max_constants(Automaton const & a);

/// A delay followed by an edge (index into Automaton::edges).
struct Step {
  Rational delay;
  std::size_t edge = 0;
};

struct Run {
  std::vector<Step> steps;
  Rational final_delay = 0;
};

enum class RunCheck {
  strict,     // guards and invariants must hold
  cost_only,  // only the location sequence must be consistent
};

struct RunError : std::runtime_error {
  std::size_t step;
  RunError(std::size_t step, std::string const & what);
};

/// Cost of the run from (initial, 0). Throws RunError with the 0-based step
/// index on an inconsistent or (under RunCheck::strict) invalid move.
Rational evaluate_run(Automaton const & a, Run const & r, RunCheck check = RunCheck::strict);

/// Location reached by the run.
std::size_t run_target(Automaton const & a, Run const & r);

std::string to_string(Run const & r, Automaton const & a);

}  // namespace zonecost::model

#endif  // ZONECOST_MODEL_HPP
