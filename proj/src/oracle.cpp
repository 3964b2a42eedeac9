#include "zonecost/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>

namespace zonecost::oracle {

namespace {

// Every weak ordering of `count` items, as ranks 1..k without gaps.
void weak_orderings(std::size_t count, std::vector<int> & cur, std::vector<std::vector<int>> & out) {
  if (cur.size() == count) {
    int const top = cur.empty() ? 0 : *std::max_element(cur.begin(), cur.end());
    for (int r = 1; r <= top; ++r)
      if (std::find(cur.begin(), cur.end(), r) == cur.end()) return;
    out.push_back(cur);
    return;
  }
  for (int r = 1; r <= static_cast<int>(count); ++r) {
    cur.push_back(r);
    weak_orderings(count, cur, out);
    cur.pop_back();
  }
}

void renumber(Region & r) {
  std::vector<int> used;
  for (int k : r.rank)
    if (k > 0) used.push_back(k);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (int & k : r.rank)
    if (k > 0) k = static_cast<int>(std::lower_bound(used.begin(), used.end(), k) - used.begin()) + 1;
}

bool atom_holds(model::Atom const & a, Region const & r) {
  std::size_t const i = a.clock - 1;
  if (r.above(i)) return a.op == model::Op::gt || a.op == model::Op::ge;
  std::int64_t const ip = r.int_part[i];
  bool const integral = r.rank[i] == 0;
  switch (a.op) {
    case model::Op::lt: return ip < a.value;
    case model::Op::le: return integral ? ip <= a.value : ip < a.value;
    case model::Op::eq: return integral && ip == a.value;
    case model::Op::ge: return ip >= a.value;
    case model::Op::gt: return integral ? ip > a.value : ip >= a.value;
  }
  return false;
}

Region reset(Region r, std::vector<dbm::ClockIndex> const & clocks) {
  for (auto x : clocks) {
    r.int_part[x - 1] = 0;
    r.rank[x - 1] = 0;
  }
  renumber(r);
  return r;
}

}  // namespace

std::vector<int> bounds_of(MaxConstants const & m) {
  std::vector<int> out;
  for (auto const & b : m.bound) out.push_back(b ? static_cast<int>(*b) : 0);
  return out;
}

std::vector<Region> all_regions(std::vector<int> const & m) {
  std::size_t const n = m.size();
  // per clock: -1 above, 2k integral k, 2k+1 in (k, k+1)
  std::vector<std::vector<int>> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    choices[i].push_back(-1);
    for (int c = 0; c <= 2 * m[i]; ++c) choices[i].push_back(c);
  }
  std::vector<Region> out;
  std::vector<int> pick(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      Region base{std::vector<int>(n), std::vector<int>(n)};
      std::vector<std::size_t> frac;
      for (std::size_t j = 0; j < n; ++j) {
        if (pick[j] < 0) {
          base.int_part[j] = base.rank[j] = -1;
          continue;
        }
        base.int_part[j] = pick[j] / 2;
        if (pick[j] % 2) frac.push_back(j);
      }
      std::vector<std::vector<int>> orders;
      std::vector<int> cur;
      weak_orderings(frac.size(), cur, orders);
      for (auto const & o : orders) {
        Region r = base;
        for (std::size_t k = 0; k < frac.size(); ++k) r.rank[frac[k]] = o[k];
        out.push_back(r);
      }
      return;
    }
    for (int c : choices[i]) {
      pick[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

Region region_of(std::span<Rational const> v, std::vector<int> const & m) {
  std::size_t const n = m.size();
  Region r{std::vector<int>(n), std::vector<int>(n)};
  std::vector<Rational> fracs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > m[i]) {
      r.int_part[i] = r.rank[i] = -1;
      continue;
    }
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), v[i].get_num_mpz_t(), v[i].get_den_mpz_t());
    r.int_part[i] = static_cast<int>(fl.get_si());
    fracs[i] = v[i] - Rational(fl);
  }
  std::vector<Rational> distinct;
  for (std::size_t i = 0; i < n; ++i)
    if (!r.above(i) && fracs[i] != 0) distinct.push_back(fracs[i]);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (std::size_t i = 0; i < n; ++i)
    if (!r.above(i))
      r.rank[i] = fracs[i] == 0 ? 0
                                : static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), fracs[i]) -
                                                   distinct.begin()) + 1;
  return r;
}

std::vector<Corner> corners(Region const & r) {
  int const top = r.rank.empty() ? 0 : std::max(0, *std::max_element(r.rank.begin(), r.rank.end()));
  std::vector<Corner> out;
  for (int j = top + 1; j >= 1; --j) {
    Corner c = r.int_part;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!r.above(i) && r.rank[i] >= j) ++c[i];
    out.push_back(c);
  }
  return out;
}

std::optional<Region> time_successor(Region const & r, std::vector<int> const & m) {
  std::size_t const n = r.rank.size();
  bool any_bounded = false, any_integral = false;
  int top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.above(i)) continue;
    any_bounded = true;
    if (r.rank[i] == 0) any_integral = true;
    top = std::max(top, r.rank[i]);
  }
  if (!any_bounded) return std::nullopt;
  Region s = r;
  if (any_integral) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.above(i)) continue;
      if (s.rank[i] == 0) {
        if (s.int_part[i] == m[i])
          s.int_part[i] = s.rank[i] = -1;
        else
          s.rank[i] = 1;
      } else {
        ++s.rank[i];
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (!s.above(i) && s.rank[i] == top) {
        ++s.int_part[i];
        s.rank[i] = 0;
      }
  }
  renumber(s);
  return s;
}

bool satisfies(model::Guard const & g, Region const & r) {
  return std::all_of(g.begin(), g.end(), [&](model::Atom const & a) { return atom_holds(a, r); });
}

Graph build_corner_point(model::Automaton const & a, MaxConstants const & m, std::size_t cap) {
  std::vector<int> const bounds = bounds_of(m);
  std::size_t const n = a.clock_count();
  Graph g;
  std::map<CornerState, std::size_t> index;
  std::deque<std::size_t> todo;

  auto node = [&](CornerState s) -> std::size_t {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (g.nodes.size() >= cap) throw TooLarge("corner-point abstraction exceeds " + std::to_string(cap) + " states");
    std::size_t const id = g.nodes.size();
    g.goal.push_back(a.locations[s.location].goal);
    index.emplace(s, id);
    g.nodes.push_back(std::move(s));
    todo.push_back(id);
    return id;
  };

  Region origin{std::vector<int>(n, 0), std::vector<int>(n, 0)};
  if (!satisfies(a.locations[a.initial].invariant, origin)) return g;
  g.has_initial = true;
  node(CornerState{a.initial, origin, Corner(n, 0)});

  while (!todo.empty()) {
    std::size_t const id = todo.front();
    todo.pop_front();
    CornerState const s = g.nodes[id];
    model::Location const & loc = a.locations[s.location];
    std::vector<Corner> const here = corners(s.region);

    bool const all_above = std::all_of(s.region.int_part.begin(), s.region.int_part.end(), [](int k) { return k < 0; });
    if (all_above) {
      g.arcs.push_back({id, id, loc.rate});
    } else {
      Corner next = s.corner;
      for (std::size_t i = 0; i < n; ++i)
        if (!s.region.above(i)) ++next[i];
      if (std::find(here.begin(), here.end(), next) != here.end()) {
        std::size_t const to = node(CornerState{s.location, s.region, next});
        g.arcs.push_back({id, to, loc.rate});
      }
    }

    if (auto succ = time_successor(s.region, bounds); succ && satisfies(loc.invariant, *succ)) {
      Corner c = s.corner;
      for (std::size_t i = 0; i < n; ++i)
        if (succ->above(i)) c[i] = -1;
      auto const there = corners(*succ);
      if (std::find(there.begin(), there.end(), c) != there.end()) {
        std::size_t const to = node(CornerState{s.location, *succ, c});
        g.arcs.push_back({id, to, 0});
      }
    }

    for (auto const & e : a.edges) {
      if (e.source != s.location || !satisfies(e.guard, s.region)) continue;
      Region r = reset(s.region, e.resets);
      if (!satisfies(a.locations[e.target].invariant, r)) continue;
      Corner c = s.corner;
      for (auto x : e.resets) c[x - 1] = 0;
      std::size_t const to = node(CornerState{e.target, std::move(r), std::move(c)});
      g.arcs.push_back({id, to, e.weight});
    }
  }
  return g;
}

ExtValue optimal_cost_cp(Graph const & g) {
  std::size_t const v = g.nodes.size();
  if (!g.has_initial) return ExtValue::plus_infinity();
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(v, inf);
  dist[0] = 0;

  auto best_goal = [&]() -> ExtValue {
    std::int64_t best = inf;
    for (std::size_t i = 0; i < v; ++i)
      if (g.goal[i]) best = std::min(best, dist[i]);
    return best == inf ? ExtValue::plus_infinity() : ExtValue(best);
  };

  bool const negative = std::any_of(g.arcs.begin(), g.arcs.end(), [](Arc const & a) { return a.weight < 0; });
  if (!negative) {
    std::vector<std::vector<std::size_t>> out(v);
    for (std::size_t k = 0; k < g.arcs.size(); ++k) out[g.arcs[k].from].push_back(k);
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, 0});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != dist[u]) continue;
      for (std::size_t k : out[u]) {
        Arc const & arc = g.arcs[k];
        if (d + arc.weight < dist[arc.to]) {
          dist[arc.to] = d + arc.weight;
          pq.push({dist[arc.to], arc.to});
        }
      }
    }
    return best_goal();
  }

  // every built node is reachable; keep those that co-reach a goal
  std::vector<std::vector<std::size_t>> in(v);
  for (auto const & arc : g.arcs) in[arc.to].push_back(arc.from);
  std::vector<bool> useful(v, false);
  std::deque<std::size_t> q;
  for (std::size_t i = 0; i < v; ++i)
    if (g.goal[i]) {
      useful[i] = true;
      q.push_back(i);
    }
  while (!q.empty()) {
    std::size_t const u = q.front();
    q.pop_front();
    for (std::size_t p : in[u])
      if (!useful[p]) {
        useful[p] = true;
        q.push_back(p);
      }
  }
  if (!useful[0]) return ExtValue::plus_infinity();

  std::size_t relevant = static_cast<std::size_t>(std::count(useful.begin(), useful.end(), true));
  for (std::size_t round = 0; round <= relevant; ++round) {
    bool changed = false;
    for (auto const & arc : g.arcs) {
      if (!useful[arc.from] || !useful[arc.to] || dist[arc.from] == inf) continue;
      if (dist[arc.from] + arc.weight < dist[arc.to]) {
        dist[arc.to] = dist[arc.from] + arc.weight;
        changed = true;
      }
    }
    if (!changed) return best_goal();
  }
  return ExtValue::minus_infinity();
}

ExtValue optimal_cost(model::Automaton const & a, std::size_t cap) {
  return optimal_cost_cp(build_corner_point(a, model::max_constants(a), cap));
}

}  // namespace zonecost::oracle
