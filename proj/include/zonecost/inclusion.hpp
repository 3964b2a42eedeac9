#ifndef ZONECOST_INCLUSION_HPP
#define ZONECOST_INCLUSION_HPP

// The abstraction-based inclusion test between priced zones and the
// classical pointwise test it generalizes.

#include "zonecost/priced_zone.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace zonecost {

/// Per clock maximal constant; nullopt stands for -inf (clock never compared).
struct MaxConstants {
  std::vector<std::optional<std::int64_t>> bound;

  std::size_t clock_count() const { return bound.size(); }
  std::optional<std::int64_t> const & operator()(dbm::ClockIndex x) const { return bound[x - 1]; }

  /// Every clock gets max_x M(x).
  MaxConstants uniform() const;

  friend bool operator==(MaxConstants const &, MaxConstants const &) = default;
};

/// Bit x-1 stands for clock x.
using ClockSet = std::uint32_t;

inline bool has_clock(ClockSet s, dbm::ClockIndex x) { return (s >> (x - 1)) & 1u; }
inline ClockSet with_clock(ClockSet s, dbm::ClockIndex x) { return s | (ClockSet{1} << (x - 1)); }
std::vector<dbm::ClockIndex> clocks_of(ClockSet s);

struct ClockPreorder {
  std::size_t clocks = 0;
  /// below[x-1][y-1] holds iff x ⪯ y.
  std::vector<std::vector<bool>> below;
  ClockSet bounded = 0;    // X_{<=M}
  ClockSet unbounded = 0;  // X_{>M}

  bool le(dbm::ClockIndex x, dbm::ClockIndex y) const { return below[x - 1][y - 1]; }
};

/// Z ∩ (x <= M(x) for x in Y) ∩ (x > M(x) for x not in Y).
dbm::Zone restrict_Y(dbm::Zone const & z, ClockSet y, MaxConstants const & m);

ClockPreorder clock_preorder(dbm::Zone const & z, MaxConstants const & m);

/// Downward-closed sets of the preorder, by increasing cardinality.
std::vector<ClockSet> downward_closed_sets(ClockPreorder const & p);

/// Every valuation of z has an M-equivalent valuation in z2.
bool unpriced_m_inclusion(dbm::Zone const & z, dbm::Zone const & z2, MaxConstants const & m);

/// A projected facet over the clocks of Y (clock i+1 is the i-th clock of Y)
/// with the cost obtained by substituting the eliminated clocks.
struct ReducedPiece {
  dbm::Zone zone;
  AffineCost cost;
};

/// Eliminates the clocks outside Y from a cell where the cost is
/// lower-bounded. Throws std::domain_error if it is not.
std::vector<ReducedPiece> facet_reduce(PricedZone const & cell, ClockSet y);

struct SValue {
  ExtValue value;
  /// Integral point of π_Y(closure(Z_Y)) reaching a finite value, in the
  /// coordinates of Y.
  std::vector<std::int64_t> point;
};

/// sup over v in Z_Y of (inf over v' in Z'_Y with v' ≡ v of ζ'(v')) - ζ(v).
/// Requires π_Y(Z_Y) ⊆ π_Y(Z'_Y) and both costs lower-bounded on their cells;
/// throws std::domain_error otherwise.
SValue s_value_at(PricedZone const & pz, PricedZone const & pz2, ClockSet y, MaxConstants const & m);

inline ExtValue s_value(PricedZone const & pz, PricedZone const & pz2, ClockSet y, MaxConstants const & m) {
  return s_value_at(pz, pz2, y, m).value;
}

/// (Z, ζ) ⊑_M (Z', ζ').
bool includes(PricedZone const & pz, PricedZone const & pz2, MaxConstants const & m);

/// Z ⊆ Z' and ζ'(v) <= ζ(v) for every v in Z.
bool simple_includes(PricedZone const & pz, PricedZone const & pz2);

}  // namespace zonecost

#endif  // ZONECOST_INCLUSION_HPP
