#ifndef ZONECOST_PRICED_ZONE_HPP
#define ZONECOST_PRICED_ZONE_HPP

#include "zonecost/dbm.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zonecost {

/// Affine cost over the clocks of a zone, or the MinusInfinity sentinel.
struct AffineCost {
  dbm::Affine fn;
  bool minus_infinity = false;

  static AffineCost zero(std::size_t clock_count) { return AffineCost{dbm::Affine::zero(clock_count), false}; }
  static AffineCost minus_inf(std::size_t clock_count) { return AffineCost{dbm::Affine::zero(clock_count), true}; }

  bool is_finite() const { return !minus_infinity; }
  std::size_t clock_count() const { return fn.clock_count(); }

  friend bool operator==(AffineCost const &, AffineCost const &) = default;
};

struct PricedZone {
  dbm::Zone zone;
  AffineCost cost;

  std::size_t clock_count() const { return zone.clock_count(); }
};

ExtValue evaluate(AffineCost const & cost, std::span<Rational const> valuation);

ExtValue mincost(PricedZone const & pz);

bool is_lower_bounded(PricedZone const & pz);

/// Pieces covering up(Z) whose pointwise minimum is the optimal cost of
/// reaching each valuation by delaying at the given rate.
std::vector<PricedZone> delay_successors(PricedZone const & pz, std::int64_t rate);

/// Pieces covering reset(Z, clocks) whose pointwise minimum is the infimum of
/// the cost over each reset fiber. Clocks are eliminated in the given order.
std::vector<PricedZone> reset_successors(PricedZone const & pz, std::span<dbm::ClockIndex const> clocks);

std::optional<PricedZone> constrain(PricedZone const & pz, std::span<dbm::IntConstraint const> guard);

PricedZone add_weight(PricedZone pz, std::int64_t weight);

/// small.zone ⊆ big.zone and big's cost is pointwise ≤ small's cost on small.zone.
bool pointwise_dominated(PricedZone const & small, PricedZone const & big);

/// Drops pieces pointwise dominated by another piece; earlier pieces win ties.
std::vector<PricedZone> remove_dominated(std::vector<PricedZone> pieces);

std::string to_string(AffineCost const & cost, std::span<std::string const> clock_names = {});
std::string to_string(PricedZone const & pz, std::span<std::string const> clock_names = {});

}  // namespace zonecost

#endif  // ZONECOST_PRICED_ZONE_HPP
