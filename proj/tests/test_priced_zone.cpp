#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/oracles.hpp"
#include "zonecost/priced_zone.hpp"

#include <random>

using namespace zonecost;
using namespace zonecost::dbm;
using oracle_support::Point;
using oracle_support::q;

namespace {

constexpr ClockIndex X = 1;
constexpr ClockIndex Y = 2;

Zone make(std::size_t n, std::vector<IntConstraint> const & cs) {
  return intersect(Zone(n), std::span<IntConstraint const>(cs));
}

AffineCost cost(std::vector<long> coef, long c = 0) {
  AffineCost a = AffineCost::zero(coef.size());
  for (std::size_t i = 0; i < coef.size(); ++i) a.fn.coef[i] = coef[i];
  a.fn.constant = c;
  return a;
}

Zone wedge() {
  return make(2, {lower_bound<std::int64_t>(Y, 1), difference<std::int64_t>(X, Y, 0), difference<std::int64_t>(Y, X, 2)});
}

bool in(Zone const & z, Point const & p) { return contains(z, std::span<Rational const>(p)); }

// min over pieces containing w of their cost at w; nullopt if uncovered.
std::optional<ExtValue> piecewise_min(std::vector<PricedZone> const & pieces, Point const & w) {
  std::optional<ExtValue> best;
  for (auto const & p : pieces)
    if (in(p.zone, w)) {
      ExtValue v = evaluate(p.cost, std::span<Rational const>(w));
      if (!best || v < *best) best = v;
    }
  return best;
}

// inf over entry delays t (grid 1/den) with w - t in closure(Z) of ζ(w - t) + t·rate.
std::optional<Rational> brute_delay(PricedZone const & pz, std::int64_t rate, Point const & w, long den) {
  Zone const c = closure(pz.zone);
  std::optional<Rational> best;
  Rational t = 0;
  while (true) {
    Point v = w;
    bool nonneg = true;
    for (auto & x : v) {
      x -= t;
      if (x < 0) nonneg = false;
    }
    if (!nonneg) break;
    if (in(c, v)) {
      Rational val = dbm::evaluate(pz.cost.fn, std::span<Rational const>(v)) + t * rate;
      if (!best || val < *best) best = val;
    }
    t += q(1, den);
  }
  return best;
}

// inf of ζ over {v ∈ closure(Z) : v agrees with w outside the reset clocks}.
std::optional<Rational> brute_reset(PricedZone const & pz, std::vector<ClockIndex> const & clocks, Point const & w,
                                    long hi, long den) {
  Zone const c = closure(pz.zone);
  std::optional<Rational> best;
  oracle_support::for_each_grid_point(clocks.size(), hi, den, [&](Point const & vals) {
    Point v = w;
    for (std::size_t i = 0; i < clocks.size(); ++i) v[clocks[i] - 1] = vals[i];
    if (!in(c, v)) return;
    Rational val = dbm::evaluate(pz.cost.fn, std::span<Rational const>(v));
    if (!best || val < *best) best = val;
  });
  return best;
}

}  // namespace

TEST_CASE("evaluate") {
  Point v{q(1, 10)};
  CHECK(evaluate(AffineCost::zero(1), std::span<Rational const>(v)) == ExtValue(0));
  CHECK(evaluate(cost({5}), std::span<Rational const>(v)) == ExtValue(q(1, 2)));
  Point w{q(2), q(3)};
  CHECK(evaluate(cost({1, 1}), std::span<Rational const>(w)) == ExtValue(5));
  CHECK(evaluate(AffineCost::minus_inf(1), std::span<Rational const>(v)).is_minus_infinity());
}

TEST_CASE("mincost and lower-boundedness") {
  CHECK(mincost(PricedZone{Zone::origin(2), AffineCost::zero(2)}) == ExtValue(0));
  PricedZone unb{Zone(1), cost({-1})};
  CHECK(mincost(unb).is_minus_infinity());
  CHECK_FALSE(is_lower_bounded(unb));
  PricedZone seg{make(1, {lower_bound<std::int64_t>(X, 1), upper_bound<std::int64_t>(X, 2)}), cost({2}, 1)};
  CHECK(mincost(seg) == ExtValue(3));
  CHECK(is_lower_bounded(PricedZone{Zone(2), cost({0, 0}, 4)}));
  CHECK(is_lower_bounded(PricedZone{wedge(), cost({2, -1})}));
}

TEST_CASE("delay successors") {
  auto d = delay_successors(PricedZone{Zone::origin(2), AffineCost::zero(2)}, 5);
  REQUIRE(d.size() == 1);
  CHECK(d[0].zone == up(Zone::origin(2)));
  CHECK(d[0].cost == cost({5, 0}));

  PricedZone pz{wedge(), cost({1, 2}, 3)};
  auto same = delay_successors(pz, 3);
  REQUIRE(same.size() == 1);
  CHECK(same[0].zone == up(wedge()));
  CHECK(same[0].cost == pz.cost);

  auto neg = delay_successors(PricedZone{Zone::origin(1), AffineCost::zero(1)}, -1);
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].zone == Zone(1));
  CHECK(neg[0].cost == cost({-1}));
  CHECK_FALSE(is_lower_bounded(neg[0]));

  auto minf = delay_successors(PricedZone{Zone::origin(1), AffineCost::minus_inf(1)}, 2);
  REQUIRE(minf.size() == 1);
  CHECK(minf[0].cost.minus_infinity);
}

TEST_CASE("reset successors") {
  Zone seg = make(1, {lower_bound<std::int64_t>(X, 1), upper_bound<std::int64_t>(X, 2)});
  std::vector<ClockIndex> rx{X};
  auto a = reset_successors(PricedZone{seg, cost({2}, 1)}, std::span<ClockIndex const>(rx));
  REQUIRE(a.size() == 1);
  CHECK(a[0].zone == Zone::origin(1));
  CHECK(a[0].cost == cost({0}, 3));

  auto b = reset_successors(PricedZone{seg, cost({-2}, 1)}, std::span<ClockIndex const>(rx));
  REQUIRE(b.size() == 1);
  CHECK(b[0].cost == cost({0}, -3));

  auto c = reset_successors(PricedZone{make(1, {lower_bound<std::int64_t>(X, 1)}), cost({-2}, 1)},
                            std::span<ClockIndex const>(rx));
  REQUIRE(c.size() == 1);
  CHECK(c[0].zone == Zone::origin(1));
  CHECK(c[0].cost.minus_infinity);
}

TEST_CASE("constrain and add_weight") {
  PricedZone pz{wedge(), cost({1, 1})};
  std::vector<IntConstraint> none;
  auto same = constrain(pz, std::span<IntConstraint const>(none));
  REQUIRE(same);
  CHECK(same->zone == wedge());
  std::vector<IntConstraint> g{lower_bound<std::int64_t>(X, 1)};
  CHECK_FALSE(constrain(PricedZone{Zone::origin(2), AffineCost::zero(2)}, std::span<IntConstraint const>(g)));
  std::vector<IntConstraint> box{upper_bound<std::int64_t>(X, 2), upper_bound<std::int64_t>(Y, 3)};
  auto cell = constrain(pz, std::span<IntConstraint const>(box));
  REQUIRE(cell);
  CHECK(cell->cost == pz.cost);
  CHECK(cell->zone == intersect(wedge(), std::span<IntConstraint const>(box)));

  CHECK(add_weight(pz, 0).cost == pz.cost);
  CHECK(add_weight(PricedZone{Zone::origin(1), AffineCost::zero(1)}, 7).cost == cost({0}, 7));
  CHECK(add_weight(PricedZone{Zone::origin(1), AffineCost::minus_inf(1)}, 5).cost.minus_infinity);
}

TEST_CASE("property: delay pieces cover up(Z) and realize the optimal entry cost") {
  std::mt19937 rng(21);
  for (int it = 0; it < 150; ++it) {
    Zone z = oracle_support::random_zone(rng, 2, 3, 4);
    PricedZone pz{z, AffineCost{oracle_support::random_affine(rng, 2, -3, 3), false}};
    std::int64_t rate = std::uniform_int_distribution<int>(-4, 6)(rng);
    auto pieces = delay_successors(pz, rate);
    for (auto const & p : pieces) CHECK_FALSE(p.zone.is_empty());
    for (auto const & w : oracle_support::grid_points(up(z), 5, 4)) {
      auto got = piecewise_min(pieces, w);
      REQUIRE(got.has_value());
      auto want = brute_delay(pz, rate, w, 4);
      REQUIRE(want.has_value());
      CHECK(*got == ExtValue(*want));
    }
    if (rate >= 0)
      for (auto const & p : pieces) CHECK(mincost(p) >= mincost(pz));
  }
}

TEST_CASE("property: reset pieces realize the fiber infimum") {
  std::mt19937 rng(22);
  for (int it = 0; it < 150; ++it) {
    Zone z = oracle_support::random_zone(rng, 2, 3, 4);
    z = intersect(z, upper_bound<std::int64_t>(X, 4));
    z = intersect(z, upper_bound<std::int64_t>(Y, 4));
    if (z.is_empty()) continue;
    PricedZone pz{z, AffineCost{oracle_support::random_affine(rng, 2, -3, 3), false}};
    std::vector<std::vector<ClockIndex>> choices{{X}, {Y}, {X, Y}, {Y, X}};
    auto const & clocks = choices[it % choices.size()];
    auto pieces = reset_successors(pz, std::span<ClockIndex const>(clocks));
    Zone const image = reset(z, std::span<ClockIndex const>(clocks));
    for (auto const & p : pieces) CHECK(zone_subset(p.zone, image));
    for (auto const & w : oracle_support::grid_points(image, 4, 4)) {
      auto got = piecewise_min(pieces, w);
      REQUIRE(got.has_value());
      auto want = brute_reset(pz, clocks, w, 4, 4);
      REQUIRE(want.has_value());
      CHECK(*got == ExtValue(*want));
    }
  }
}

TEST_CASE("property: unbounded negative reset yields MinusInfinity") {
  std::mt19937 rng(23);
  for (int it = 0; it < 100; ++it) {
    Zone z = oracle_support::random_zone(rng, 2, 3, 3);
    if (z.at(X, 0).is_finite() || z.at(X, Y).is_finite()) continue;
    AffineCost c = cost({-1, 0});
    std::vector<ClockIndex> rx{X};
    auto pieces = reset_successors(PricedZone{z, c}, std::span<ClockIndex const>(rx));
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].cost.minus_infinity);
  }
}
