#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "zonecost/explorer.hpp"

using namespace zonecost;
using namespace zonecost::dbm;
using oracle_support::q;

namespace {

constexpr ClockIndex X = 1;
constexpr ClockIndex Y = 2;

Zone make(std::size_t n, std::vector<IntConstraint> const & cs) {
  return intersect(Zone(n), std::span<IntConstraint const>(cs));
}

ExplorerConfig config(InclusionKind inc, Strategy st, bool prune = false) {
  ExplorerConfig c;
  c.inclusion = inc;
  c.strategy = st;
  c.pruning = prune;
  return c;
}

std::vector<Strategy> const kStrategies{Strategy::bfs, Strategy::dfs, Strategy::sbfs};

}  // namespace

TEST_CASE("initial state and successors") {
  auto right = corpus::flat("unbounded_loop");
  auto roots = initial_states(right);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].zone.zone == up(Zone::origin(2)));
  CHECK(mincost(roots[0].zone) == ExtValue(0));

  auto first = symbolic_post(right, roots[0]);
  REQUIRE(first.size() == 1);
  CHECK(first[0].location == 0);
  CHECK(first[0].edge == 0);
  CHECK(first[0].zone.zone == make(2, {difference<std::int64_t>(Y, X, 1), difference<std::int64_t>(X, Y, -1)}));
  auto second = symbolic_post(right, first[0]);
  REQUIRE(second.size() == 1);
  CHECK(second[0].zone.zone == make(2, {difference<std::int64_t>(Y, X, 2), difference<std::int64_t>(X, Y, -2)}));

  auto left = corpus::flat("branching");
  auto lroots = initial_states(left);
  REQUIRE(lroots.size() == 1);
  auto l1 = symbolic_post(left, lroots[0]);
  REQUIRE(l1.size() == 1);
  CHECK(l1[0].location == 1);
  CHECK(l1[0].zone.zone == make(2, {difference<std::int64_t>(Y, X, -2)}));
  AffineCost want = AffineCost::zero(2);
  want.fn.coef = {5, -5};
  CHECK(l1[0].zone.cost == want);

  SymbolicState sink{4, PricedZone{Zone::origin(2), AffineCost::zero(2)}, std::nullopt};
  CHECK(symbolic_post(left, sink).empty());
}

TEST_CASE("optimal costs of the corpus") {
  struct Expect {
    char const * name;
    ExtValue cost;
  };
  std::vector<Expect> const expect{
      {"branching", ExtValue(11)},      {"unbounded_loop", ExtValue(1)},   {"unbounded_loop_time", ExtValue(11)},
      {"time_optimal", ExtValue(1)},           {"als_small", ExtValue(4)},   {"neg_rate", ExtValue(-2)},
      {"neg_divergent", ExtValue::minus_infinity()},
  };
  for (auto const & e : expect)
    for (Strategy st : kStrategies) {
      CAPTURE(e.name);
      CAPTURE(static_cast<int>(st));
      Verdict v = explore(corpus::flat(e.name), config(InclusionKind::abstract, st));
      CHECK(v.terminated);
      CHECK(v.cost == e.cost);
      CHECK(v.stats.successful_tests <= v.stats.tests);
    }
}

TEST_CASE("simple inclusion does not terminate on the unbounded example") {
  ExplorerConfig c = config(InclusionKind::simple, Strategy::sbfs);
  c.iteration_cap = 10000;
  Verdict v = explore(corpus::flat("unbounded_loop"), c);
  CHECK_FALSE(v.terminated);
  CHECK(v.cost == ExtValue(1));
  CHECK(v.stats.popped == 10000);

  Verdict a = explore(corpus::flat("unbounded_loop"), config(InclusionKind::abstract, Strategy::sbfs, true));
  CHECK(a.terminated);
  CHECK(a.stats.added_to_waiting >= 10);
  CHECK(a.stats.added_to_waiting <= 30);
}

TEST_CASE("both inclusions agree on the time-optimal example") {
  for (InclusionKind inc : {InclusionKind::abstract, InclusionKind::simple})
    for (Strategy st : kStrategies) {
      Verdict v = explore(corpus::flat("time_optimal"), config(inc, st));
      CHECK(v.terminated);
      CHECK(v.cost == ExtValue(1));
    }
}

TEST_CASE("unreachable goal and option checks") {
  auto a = model::compose(model::parse_model(
      "clocks x;\nautomaton A\n  location l rate 1 initial;\n  location g rate 0 goal;\n  edge l -> g guard x < 1 && x > 2;\n"));
  Verdict v = explore(a, ExplorerConfig{});
  CHECK(v.terminated);
  CHECK(v.cost.is_plus_infinity());
  CHECK(v.trace.empty());

  auto neg = corpus::flat("neg_rate");
  ExplorerConfig p;
  p.pruning = true;
  CHECK_THROWS_AS(explore(neg, p), std::invalid_argument);
  ExplorerConfig h;
  h.hint = Rational(3);
  CHECK_THROWS_AS(explore(neg, h), std::invalid_argument);
  Verdict w = explore(neg, ExplorerConfig{});
  CHECK(w.warnings.size() == 1);
  ExplorerConfig capped;
  capped.iteration_cap = 50;
  CHECK(explore(neg, capped).warnings.empty());
}

TEST_CASE("pruning, hints and progress keep the optimum") {
  for (auto const & name : corpus::nonnegative_names()) {
    auto a = corpus::flat(name);
    Verdict base = explore(a, config(InclusionKind::abstract, Strategy::sbfs));
    REQUIRE(base.terminated);
    Verdict pruned = explore(a, config(InclusionKind::abstract, Strategy::sbfs, true));
    CHECK(pruned.cost == base.cost);
    CHECK(pruned.stats.added_to_waiting <= base.stats.added_to_waiting);
    if (!base.cost.is_finite()) continue;
    for (long extra : {0L, 1L, 5L}) {
      ExplorerConfig c = config(InclusionKind::abstract, Strategy::bfs);
      c.hint = base.cost.value() + extra;
      CHECK(explore(a, c).cost == base.cost);
    }
    std::vector<ExtValue> seen;
    ExplorerConfig c = config(InclusionKind::abstract, Strategy::bfs);
    c.on_progress = [&](ExtValue const & cost, std::uint64_t) { seen.push_back(cost); };
    explore(a, c);
    REQUIRE_FALSE(seen.empty());
    CHECK(seen.back() == base.cost);
    CHECK(std::is_sorted(seen.rbegin(), seen.rend()));
  }
}

TEST_CASE("abstract inclusion stores no more than simple inclusion") {
  for (char const * name : {"als_small", "ets_small", "branching", "time_optimal"}) {
    CAPTURE(name);
    auto a = corpus::flat(name);
    Verdict abs = explore(a, config(InclusionKind::abstract, Strategy::sbfs, true));
    Verdict sim = explore(a, config(InclusionKind::simple, Strategy::sbfs, true));
    REQUIRE(abs.terminated);
    REQUIRE(sim.terminated);
    CHECK(abs.cost == sim.cost);
    CHECK(abs.stats.added_to_passed <= sim.stats.added_to_passed);
  }
}

TEST_CASE("witness runs") {
  Rational const eps = q(1, 1000);
  for (auto const & name : corpus::names()) {
    CAPTURE(name);
    auto a = corpus::flat(name);
    Verdict v = explore(a, ExplorerConfig{});
    if (!v.cost.is_finite()) {
      CHECK(v.trace.empty());
      continue;
    }
    model::Run r = extract_witness(a, v.trace, eps);
    Rational const c = model::evaluate_run(a, r);
    CHECK(c <= v.cost.value() + eps);
    CHECK(c >= v.cost.value());
    CHECK(a.locations[model::run_target(a, r)].goal);
    if (std::string(name) == "unbounded_loop") CHECK(r.steps.size() == 10);
  }

  auto goal_now = model::compose(model::parse_model("clocks x;\nautomaton A\n  location g rate 3 goal initial;\n"));
  Verdict v = explore(goal_now, ExplorerConfig{});
  CHECK(v.cost == ExtValue(0));
  model::Run r = extract_witness(goal_now, v.trace, eps);
  CHECK(r.steps.empty());
  CHECK(model::evaluate_run(goal_now, r) <= eps);

  auto div = corpus::flat("neg_divergent");
  auto roots = initial_states(div);
  std::vector<SymbolicState> trace{roots[0]};
  auto next = symbolic_post(div, roots[0]);
  REQUIRE_FALSE(next.empty());
  trace.push_back(next[0]);
  CHECK_THROWS_AS(extract_witness(div, trace, eps), std::domain_error);
}
