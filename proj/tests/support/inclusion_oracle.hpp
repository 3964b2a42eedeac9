#ifndef ZONECOST_TESTS_INCLUSION_ORACLE_HPP
#define ZONECOST_TESTS_INCLUSION_ORACLE_HPP

// Grid-based decision of the abstract inclusion between priced zones with
// small constants. It reads the definition cell by cell: the Y-projections of
// the cells must be included, and the fiber minimum of the right-hand cost at
// every integral point of the projection must not exceed the left-hand one.
// Only the dbm membership and closure primitives are shared with the library.

#include "support/oracles.hpp"
#include "zonecost/inclusion.hpp"

#include <set>

namespace oracle_support {

using zonecost::ClockSet;
using zonecost::MaxConstants;
using zonecost::PricedZone;

inline bool in_cell(Point const & v, ClockSet y, MaxConstants const & m, bool closed) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto const & mx = m.bound[i];
    if (y >> i & 1u) {
      if (!mx || v[i] > *mx) return false;
    } else if (mx && (closed ? v[i] < *mx : v[i] <= *mx)) {
      return false;
    }
  }
  return true;
}

inline Point restrict_to(Point const & v, ClockSet y) {
  Point out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (y >> i & 1u) out.push_back(v[i]);
  return out;
}

inline Point with_rest(ClockSet y, Point const & u0, Point const & rest) {
  Point v(u0.size() + rest.size());
  for (std::size_t i = 0, a = 0, b = 0; i < v.size(); ++i) v[i] = (y >> i & 1u) ? u0[a++] : rest[b++];
  return v;
}

// Z ∩ (x <= M(x) on Y) ∩ (x > M(x) off Y), built directly from constraints.
inline Zone cell_zone(Zone const & z, ClockSet y, MaxConstants const & m) {
  using namespace zonecost::dbm;
  Zone c = z;
  for (ClockIndex x = 1; x <= z.clock_count(); ++x) {
    auto const & mx = m(x);
    if (y >> (x - 1) & 1u) {
      if (!mx) return Zone::empty_zone(z.clock_count());
      c = intersect(c, upper_bound<std::int64_t>(x, *mx));
    } else if (mx) {
      c = intersect(c, lower_bound<std::int64_t>(x, *mx, true));
    }
  }
  return c;
}

struct FiberMin {
  bool empty = true;
  bool unbounded = false;
  Rational value;
};

// min of ζ over integral points of closure(Z_Y) agreeing with u0 on Y, with
// the other clocks boxed at hi and 2·hi to detect a cost unbounded below.
inline FiberMin fiber_min(PricedZone const & pz, ClockSet y, MaxConstants const & m, Point const & u0, long hi) {
  Zone const c = zonecost::dbm::closure(cell_zone(pz.zone, y, m));
  std::size_t const free = pz.clock_count() - u0.size();
  auto min_in_box = [&](long box) {
    std::optional<Rational> best;
    for_each_grid_point(free, box, 1, [&](Point const & rest) {
      Point const v = with_rest(y, u0, rest);
      if (!zonecost::dbm::contains(c, std::span<Rational const>(v))) return;
      Rational val = zonecost::dbm::evaluate(pz.cost.fn, std::span<Rational const>(v));
      if (!best || val < *best) best = val;
    });
    return best;
  };
  FiberMin out;
  auto small = min_in_box(hi);
  if (!small) return out;
  out.empty = false;
  auto large = min_in_box(2 * hi);
  out.unbounded = *large < *small;
  out.value = *small;
  return out;
}

inline std::set<Point> cell_projections(Zone const & z, ClockSet y, MaxConstants const & m, long hi, long den) {
  std::set<Point> out;
  for (auto const & v : grid_points(z, hi, den))
    if (in_cell(v, y, m, false)) out.insert(restrict_to(v, y));
  return out;
}

inline bool fiber_has_point(Zone const & z, ClockSet y, Point const & u0, long hi, long den) {
  bool found = false;
  for_each_grid_point(z.clock_count() - u0.size(), hi, den, [&](Point const & rest) {
    if (!found && zonecost::dbm::contains(z, std::span<Rational const>(with_rest(y, u0, rest)))) found = true;
  });
  return found;
}

// Decides (Z, ζ) ⊑_M (Z', ζ') for costs that are finite affine functions.
// Cells of two-clock zones are sampled on a 1/3 grid (every region of such a
// zone has a point there) and the right-hand side on the 1/6 grid.
inline bool brute_includes(PricedZone const & pz, PricedZone const & pz2, MaxConstants const & m, long hi) {
  std::size_t const n = pz.clock_count();
  // the box must reach past every constant of either zone
  for (Zone const * z : {&pz.zone, &pz2.zone})
    for (zonecost::dbm::ClockIndex i = 0; i <= n; ++i)
      for (zonecost::dbm::ClockIndex j = 0; j <= n; ++j)
        if (i != j && z->at(i, j).is_finite()) hi = std::max<long>(hi, std::abs(z->at(i, j).value) + 2);
  for (ClockSet y = 0; y < (ClockSet{1} << n); ++y) {
    auto const left = cell_projections(pz.zone, y, m, hi, 3);
    if (left.empty()) continue;
    Zone const right = cell_zone(pz2.zone, y, m);
    for (auto const & u : left)
      if (!fiber_has_point(right, y, u, 2 * hi, 6)) return false;
  }
  for (ClockSet y = 0; y < (ClockSet{1} << n); ++y) {
    if (cell_projections(pz.zone, y, m, hi, 3).empty()) continue;
    std::set<Point> anchors;
    for (auto const & v : grid_points(zonecost::dbm::closure(cell_zone(pz.zone, y, m)), hi, 1))
      anchors.insert(restrict_to(v, y));
    bool right_unbounded = false, left_unbounded = false;
    std::optional<Rational> s;
    for (auto const & u : anchors) {
      auto const a = fiber_min(pz, y, m, u, 4 * hi);
      auto const b = fiber_min(pz2, y, m, u, 4 * hi);
      if (b.unbounded) right_unbounded = true;
      if (a.unbounded) left_unbounded = true;
      if (a.empty || b.empty) continue;
      Rational d = b.value - a.value;
      if (!s || d > *s) s = d;
    }
    if (right_unbounded) continue;
    if (left_unbounded) return false;
    if (s && *s > 0) return false;
  }
  return true;
}

// A zone near z: one bound moved by at most one unit.
inline Zone perturb(std::mt19937 & rng, Zone const & z) {
  std::uniform_int_distribution<zonecost::dbm::ClockIndex> clk(0, z.clock_count());
  for (;;) {
    zonecost::dbm::ClockIndex i = clk(rng), j = clk(rng);
    if (i == j) continue;
    Zone r(z.clock_count());
    for (zonecost::dbm::ClockIndex a = 0; a <= z.clock_count(); ++a)
      for (zonecost::dbm::ClockIndex b = 0; b <= z.clock_count(); ++b) {
        if (a == b || !z.at(a, b).is_finite()) continue;
        auto bound = z.at(a, b);
        if (a == i && b == j) bound.value += std::uniform_int_distribution<int>(-1, 1)(rng);
        r = intersect(r, zonecost::dbm::IntConstraint{a, b, bound});
      }
    if (!r.is_empty()) return r;
  }
}

inline MaxConstants random_m(std::mt19937 & rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-1, 4);
  MaxConstants m;
  for (std::size_t i = 0; i < n; ++i) {
    int v = d(rng);
    m.bound.push_back(v < 0 ? std::nullopt : std::optional<std::int64_t>(v));
  }
  return m;
}

}  // namespace oracle_support

#endif  // ZONECOST_TESTS_INCLUSION_ORACLE_HPP
