#include "zonecost/priced_zone.hpp"

#include <sstream>
#include <stdexcept>

namespace zonecost {

using dbm::ClockIndex;
using dbm::Zone;

ExtValue evaluate(AffineCost const & cost, std::span<Rational const> valuation) {
  if (cost.minus_infinity) return ExtValue::minus_infinity();
  return ExtValue(dbm::evaluate(cost.fn, valuation));
}

ExtValue mincost(PricedZone const & pz) {
  if (pz.cost.minus_infinity) return ExtValue::minus_infinity();
  if (pz.zone.is_empty()) return ExtValue::plus_infinity();
  return dbm::inf_affine(pz.zone, pz.cost.fn).value;
}

bool is_lower_bounded(PricedZone const & pz) { return !mincost(pz).is_minus_infinity(); }

namespace {

void require_matching(PricedZone const & pz) {
  if (pz.cost.clock_count() != pz.zone.clock_count()) throw std::invalid_argument("cost and zone over different clocks");
}

// ζ(w) + (w_x - n)·k as an affine function.
AffineCost shifted(AffineCost const & base, ClockIndex x, std::int64_t n, Rational const & k) {
  AffineCost c = base;
  c.fn.coefficient(x) += k;
  c.fn.constant -= k * to_rational(n);
  return c;
}

}  // namespace

std::vector<PricedZone> delay_successors(PricedZone const & pz, std::int64_t rate) {
  require_matching(pz);
  if (pz.zone.is_empty()) return {};
  Zone const upz = dbm::up(pz.zone);
  if (pz.cost.minus_infinity) return {PricedZone{upz, pz.cost}};
  Rational const gap = to_rational(rate) - pz.cost.fn.slope();
  if (gap == 0) return {PricedZone{upz, pz.cost}};

  Zone const & z = pz.zone;
  std::size_t const n = z.clock_count();
  std::vector<PricedZone> pieces;
  if (gap > 0) {
    // Entry as early as possible: either w ∈ Z, or the entry point sits on the
    // upper bound of the clock that overshoots its bound the most.
    pieces.push_back(pz);
    for (ClockIndex x = 1; x <= n; ++x) {
      if (!z.at(x, 0).is_finite()) continue;
      std::int64_t const nx = z.at(x, 0).value;
      Zone piece = dbm::intersect(upz, dbm::lower_bound<std::int64_t>(x, nx));
      for (ClockIndex y = 1; y <= n && !piece.is_empty(); ++y) {
        if (y == x || !z.at(y, 0).is_finite()) continue;
        // x - y >= nx - ny
        piece = dbm::intersect(piece, dbm::difference<std::int64_t>(y, x, z.at(y, 0).value - nx));
      }
      if (piece.is_empty()) continue;
      pieces.push_back(PricedZone{piece, shifted(pz.cost, x, nx, gap)});
    }
  } else {
    // Entry as late as possible: the leaving point sits on the lower bound of
    // the clock that is closest to its bound.
    for (ClockIndex x = 1; x <= n; ++x) {
      std::int64_t const mx = -z.at(0, x).value;
      Zone piece = upz;
      for (ClockIndex y = 1; y <= n && !piece.is_empty(); ++y) {
        if (y == x) continue;
        std::int64_t const my = -z.at(0, y).value;
        piece = dbm::intersect(piece, dbm::difference<std::int64_t>(x, y, mx - my));
      }
      if (piece.is_empty()) continue;
      pieces.push_back(PricedZone{piece, shifted(pz.cost, x, mx, gap)});
    }
  }
  return remove_dominated(std::move(pieces));
}

namespace {

std::vector<PricedZone> eliminate(PricedZone const & pz, ClockIndex x) {
  ClockIndex const one[] = {x};
  Zone const reset_zone = dbm::reset(pz.zone, std::span<ClockIndex const>(one));
  if (pz.cost.minus_infinity) return {PricedZone{reset_zone, pz.cost}};
  Rational const fx = pz.cost.fn.coefficient(x);
  auto const kind = fx >= 0 ? dbm::FacetKind::lower : dbm::FacetKind::upper;
  auto const fs = dbm::facets(pz.zone, x, kind);
  if (fs.empty()) return {PricedZone{reset_zone, AffineCost::minus_inf(pz.clock_count())}};
  std::vector<PricedZone> out;
  for (auto const & f : fs) {
    Zone piece = dbm::intersect(reset_zone, dbm::reset(f.zone, std::span<ClockIndex const>(one)));
    if (piece.is_empty()) continue;
    AffineCost c = pz.cost;
    c.fn.coefficient(x) = 0;
    if (f.pivot_clock != 0) c.fn.coefficient(f.pivot_clock) += fx;
    c.fn.constant += fx * to_rational(f.pivot_offset);
    out.push_back(PricedZone{std::move(piece), std::move(c)});
  }
  return out;
}

}  // namespace

std::vector<PricedZone> reset_successors(PricedZone const & pz, std::span<ClockIndex const> clocks) {
  require_matching(pz);
  if (pz.zone.is_empty()) return {};
  std::vector<PricedZone> current{pz};
  for (ClockIndex x : clocks) {
    if (x == 0 || x > pz.clock_count()) throw std::out_of_range("reset of unknown clock");
    std::vector<PricedZone> next;
    for (auto const & p : current)
      for (auto & q : eliminate(p, x)) next.push_back(std::move(q));
    current = remove_dominated(std::move(next));
  }
  return current;
}

std::optional<PricedZone> constrain(PricedZone const & pz, std::span<dbm::IntConstraint const> guard) {
  Zone z = dbm::intersect(pz.zone, guard);
  if (z.is_empty()) return std::nullopt;
  return PricedZone{std::move(z), pz.cost};
}

PricedZone add_weight(PricedZone pz, std::int64_t weight) {
  if (!pz.cost.minus_infinity) pz.cost.fn.constant += to_rational(weight);
  return pz;
}

bool pointwise_dominated(PricedZone const & small, PricedZone const & big) {
  if (small.zone.is_empty()) return true;
  if (!dbm::zone_subset(small.zone, big.zone)) return false;
  if (big.cost.minus_infinity) return true;
  if (small.cost.minus_infinity) return false;
  auto const s = dbm::sup_affine(small.zone, big.cost.fn - small.cost.fn);
  return s.value <= ExtValue(0);
}

std::vector<PricedZone> remove_dominated(std::vector<PricedZone> pieces) {
  std::vector<PricedZone> kept;
  for (auto & p : pieces) {
    if (p.zone.is_empty()) continue;
    bool dominated = false;
    for (auto const & k : kept)
      if (pointwise_dominated(p, k)) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    std::erase_if(kept, [&](PricedZone const & k) { return pointwise_dominated(k, p); });
    kept.push_back(std::move(p));
  }
  return kept;
}

std::string to_string(AffineCost const & cost, std::span<std::string const> clock_names) {
  if (cost.minus_infinity) return "-inf";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < cost.fn.coef.size(); ++i) {
    Rational const & c = cost.fn.coef[i];
    if (c == 0) continue;
    std::string const name = i < clock_names.size() ? clock_names[i] : "x" + std::to_string(i + 1);
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Rational const a = abs(c);
    if (a != 1) os << a << "*";
    os << name;
    first = false;
  }
  Rational const & k = cost.fn.constant;
  if (first) os << k;
  else if (k != 0) os << (k > 0 ? " + " : " - ") << Rational(abs(k));
  return os.str();
}

std::string to_string(PricedZone const & pz, std::span<std::string const> clock_names) {
  return "(" + dbm::to_string(pz.zone, clock_names) + ", " + to_string(pz.cost, clock_names) + ")";
}

}  // namespace zonecost
