#include "zonecost/inclusion.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace zonecost {

using dbm::ClockIndex;
using dbm::Zone;

MaxConstants MaxConstants::uniform() const {
  std::optional<std::int64_t> top;
  for (auto const & b : bound)
    if (b && (!top || *b > *top)) top = b;
  return MaxConstants{std::vector<std::optional<std::int64_t>>(bound.size(), top)};
}

std::vector<ClockIndex> clocks_of(ClockSet s) {
  std::vector<ClockIndex> out;
  for (ClockIndex x = 1; s != 0; ++x, s >>= 1)
    if (s & 1u) out.push_back(x);
  return out;
}

Zone restrict_Y(Zone const & z, ClockSet y, MaxConstants const & m) {
  if (m.clock_count() != z.clock_count()) throw std::invalid_argument("maximal constants over different clocks");
  Zone r = z;
  for (ClockIndex x = 1; x <= z.clock_count() && !r.is_empty(); ++x) {
    auto const & mx = m(x);
    if (has_clock(y, x)) {
      if (!mx) return Zone::empty_zone(z.clock_count());
      r = dbm::intersect(r, dbm::upper_bound<std::int64_t>(x, *mx));
    } else if (mx) {
      r = dbm::intersect(r, dbm::lower_bound<std::int64_t>(x, *mx, true));
    }
  }
  return r;
}

ClockPreorder clock_preorder(Zone const & z, MaxConstants const & m) {
  std::size_t const n = z.clock_count();
  if (m.clock_count() != n) throw std::invalid_argument("maximal constants over different clocks");
  ClockPreorder p;
  p.clocks = n;
  p.below.assign(n, std::vector<bool>(n, false));
  using B = dbm::Bound<std::int64_t>;
  for (ClockIndex x = 1; x <= n; ++x) {
    auto const & mx = m(x);
    if (mx && z.at(x, 0) <= B::le(*mx)) p.bounded = with_clock(p.bounded, x);
    if (!mx || z.at(0, x) <= B::lt(-*mx)) p.unbounded = with_clock(p.unbounded, x);
  }
  for (ClockIndex x = 1; x <= n; ++x)
    for (ClockIndex y = 1; y <= n; ++y) {
      bool rel = x == y || has_clock(p.bounded, x) || has_clock(p.unbounded, y);
      if (!rel && !has_clock(p.unbounded, x) && !has_clock(p.unbounded, y))
        rel = z.at(x, y) <= B::le(*m(x) - *m(y));
      p.below[x - 1][y - 1] = rel;
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (p.below[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (p.below[k][j]) p.below[i][j] = true;
  return p;
}

std::vector<ClockSet> downward_closed_sets(ClockPreorder const & p) {
  std::size_t const n = p.clocks;
  if (n > 24) throw std::length_error("too many clocks for cell enumeration");
  std::vector<ClockSet> out;
  for (ClockSet s = 0; s < (ClockSet{1} << n); ++s) {
    bool closed = true;
    for (ClockIndex y = 1; y <= n && closed; ++y) {
      if (!has_clock(s, y)) continue;
      for (ClockIndex x = 1; x <= n; ++x)
        if (p.le(x, y) && !has_clock(s, x)) {
          closed = false;
          break;
        }
    }
    if (closed) out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](ClockSet a, ClockSet b) { return std::popcount(a) < std::popcount(b); });
  return out;
}

namespace {

Zone project_on(Zone const & z, ClockSet y) {
  auto const keep = clocks_of(y);
  return dbm::project(z, std::span<ClockIndex const>(keep));
}

bool projection_included(Zone const & cell, Zone const & cell2, ClockSet y) {
  if (cell.is_empty()) return true;
  if (cell2.is_empty()) return false;
  return dbm::zone_subset(project_on(cell, y), project_on(cell2, y));
}

}  // namespace

bool unpriced_m_inclusion(Zone const & z, Zone const & z2, MaxConstants const & m) {
  if (z.clock_count() != z2.clock_count()) throw std::invalid_argument("zones over different clocks");
  if (z.is_empty()) return true;
  if (z2.is_empty()) return false;
  for (ClockSet y : downward_closed_sets(clock_preorder(z, m))) {
    Zone const cell = restrict_Y(z, y, m);
    if (cell.is_empty()) continue;
    if (!projection_included(cell, restrict_Y(z2, y, m), y)) return false;
  }
  return true;
}

std::vector<ReducedPiece> facet_reduce(PricedZone const & cell, ClockSet y) {
  if (cell.zone.is_empty()) return {};
  if (!is_lower_bounded(cell)) throw std::domain_error("facet reduction needs a lower-bounded cost");
  struct Work {
    Zone zone;
    AffineCost cost;
    std::vector<ClockIndex> orig;
  };
  std::vector<ClockIndex> all(cell.clock_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i + 1;
  std::vector<Work> work{Work{cell.zone, cell.cost, all}};
  for (ClockIndex x = 1; x <= cell.clock_count(); ++x) {
    if (has_clock(y, x)) continue;
    std::vector<Work> next;
    for (auto const & w : work) {
      auto const p = static_cast<ClockIndex>(std::find(w.orig.begin(), w.orig.end(), x) - w.orig.begin()) + 1;
      Rational const fx = w.cost.fn.coefficient(p);
      auto const fs = dbm::facets(w.zone, p, fx >= 0 ? dbm::FacetKind::lower : dbm::FacetKind::upper);
      if (fs.empty()) throw std::domain_error("facet reduction needs a lower-bounded cost");
      std::vector<ClockIndex> keep;
      for (ClockIndex i = 1; i <= w.orig.size(); ++i)
        if (i != p) keep.push_back(i);
      std::vector<ClockIndex> orig = w.orig;
      orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(p - 1));
      for (auto const & f : fs) {
        AffineCost c = w.cost;
        if (f.pivot_clock != 0) c.fn.coefficient(f.pivot_clock) += fx;
        c.fn.constant += fx * to_rational(f.pivot_offset);
        c.fn.coef.erase(c.fn.coef.begin() + static_cast<std::ptrdiff_t>(p - 1));
        Zone z = dbm::project(f.zone, std::span<ClockIndex const>(keep));
        bool const dup = std::any_of(next.begin(), next.end(),
                                     [&](Work const & o) { return o.zone == z && o.cost == c; });
        if (!dup) next.push_back(Work{std::move(z), std::move(c), orig});
      }
    }
    work = std::move(next);
  }
  std::vector<ReducedPiece> out;
  for (auto & w : work) out.push_back(ReducedPiece{std::move(w.zone), std::move(w.cost)});
  return out;
}

SValue s_value_at(PricedZone const & pz, PricedZone const & pz2, ClockSet y, MaxConstants const & m) {
  if (pz.clock_count() != pz2.clock_count()) throw std::invalid_argument("priced zones over different clocks");
  Zone const cell = restrict_Y(pz.zone, y, m);
  if (cell.is_empty()) return SValue{ExtValue::minus_infinity(), {}};
  Zone const cell2 = restrict_Y(pz2.zone, y, m);
  if (!projection_included(cell, cell2, y)) throw std::domain_error("cell projection not included");
  if (pz.cost.minus_infinity || pz2.cost.minus_infinity) throw std::domain_error("cost is not lower-bounded");
  auto const ylist = clocks_of(y);
  auto const pieces = facet_reduce(PricedZone{cell, pz.cost}, y);
  auto const pieces2 = facet_reduce(PricedZone{cell2, pz2.cost}, y);

  // The fiber infimum g' of ζ' over Z'_Y is convex and piecewise affine, and
  // equals the least ζ'_{F'} among reduced pieces containing the point. On a
  // piece F of Z_Y the difference g' - ζ_F is convex, so its supremum is +inf
  // along some generator of the recession cone of F, or reached at a vertex.
  Zone const rec2 = dbm::recession_zone(dbm::closure(cell2));
  dbm::Affine slope2 = pz2.cost.fn;
  slope2.constant = 0;

  SValue best{ExtValue::minus_infinity(), {}};
  for (auto const & piece : pieces) {
    auto const cone = dbm::recession_directions(piece.zone);
    std::size_t const k = cone.unbounded.size();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      bool closed = true;
      for (auto const & [a, b] : cone.ordered) {
        auto ia = std::find(cone.unbounded.begin(), cone.unbounded.end(), a) - cone.unbounded.begin();
        auto ib = std::find(cone.unbounded.begin(), cone.unbounded.end(), b) - cone.unbounded.begin();
        if ((mask >> ia & 1u) && !(mask >> ib & 1u)) closed = false;
      }
      if (!closed) continue;
      std::vector<std::int64_t> d(ylist.size(), 0);
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1u) d[cone.unbounded[i] - 1] = 1;
      Zone r = rec2;
      for (std::size_t i = 0; i < ylist.size() && !r.is_empty(); ++i) {
        r = dbm::intersect(r, dbm::upper_bound<std::int64_t>(ylist[i], d[i]));
        r = dbm::intersect(r, dbm::lower_bound<std::int64_t>(ylist[i], d[i]));
      }
      if (r.is_empty()) throw std::logic_error("recession direction missing from the right-hand cell");
      auto const g = dbm::inf_affine(r, slope2).value;
      if (!g.is_finite()) throw std::logic_error("right-hand cost is not lower-bounded");
      Rational rise = g.value();
      for (std::size_t i = 0; i < d.size(); ++i) rise -= piece.cost.fn.coef[i] * d[i];
      if (rise > 0) return SValue{ExtValue::plus_infinity(), {}};
    }
    for (auto const & u : dbm::extreme_points(piece.zone)) {
      std::vector<Rational> ur(u.begin(), u.end());
      std::optional<Rational> g;
      for (auto const & p2 : pieces2) {
        if (!dbm::contains(dbm::closure(p2.zone), std::span<Rational const>(ur))) continue;
        Rational v = dbm::evaluate(p2.cost.fn, std::span<Rational const>(ur));
        if (!g || v < *g) g = v;
      }
      if (!g) throw std::logic_error("reduced pieces do not cover the projection");
      ExtValue const val(Rational(*g - dbm::evaluate(piece.cost.fn, std::span<Rational const>(ur))));
      if (best.value.is_minus_infinity() || val > best.value) best = SValue{val, u};
    }
  }
  return best;
}

bool includes(PricedZone const & pz, PricedZone const & pz2, MaxConstants const & m) {
  if (pz.clock_count() != pz2.clock_count() || m.clock_count() != pz.clock_count())
    throw std::invalid_argument("priced zones over different clocks");
  if (pz.zone.is_empty()) return true;
  if (pz2.zone.is_empty()) return false;
  if (!unpriced_m_inclusion(pz.zone, pz2.zone, m)) return false;
  bool const lb = is_lower_bounded(pz);
  bool const lb2 = is_lower_bounded(pz2);
  if (!lb && lb2) return false;
  for (ClockSet y : downward_closed_sets(clock_preorder(pz.zone, m))) {
    Zone const cell = restrict_Y(pz.zone, y, m);
    if (cell.is_empty()) continue;
    Zone const cell2 = restrict_Y(pz2.zone, y, m);
    if (!is_lower_bounded(PricedZone{cell2, pz2.cost})) continue;
    if (!is_lower_bounded(PricedZone{cell, pz.cost})) return false;
    if (s_value(pz, pz2, y, m) > ExtValue(0)) return false;
  }
  return true;
}

bool simple_includes(PricedZone const & pz, PricedZone const & pz2) { return pointwise_dominated(pz, pz2); }

}  // namespace zonecost
