#include "zonecost/explorer.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace zonecost {

using dbm::ClockIndex;
using dbm::RationalZone;
using model::Automaton;

namespace {

std::vector<PricedZone> enter(Automaton const & a, std::size_t target, PricedZone const & pz) {
  auto const & loc = a.locations[target];
  auto const inv = model::constraints(loc.invariant);
  std::vector<PricedZone> out;
  auto entry = constrain(pz, inv);
  if (!entry) return out;
  for (auto & d : delay_successors(*entry, loc.rate)) {
    auto c = constrain(d, inv);
    if (c) out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace

std::vector<SymbolicState> initial_states(Automaton const & a) {
  std::size_t const n = a.clock_count();
  std::vector<SymbolicState> out;
  for (auto & pz : enter(a, a.initial, PricedZone{dbm::Zone::origin(n), AffineCost::zero(n)}))
    out.push_back(SymbolicState{a.initial, std::move(pz), std::nullopt});
  return out;
}

std::vector<SymbolicState> symbolic_post(Automaton const & a, SymbolicState const & s) {
  std::vector<SymbolicState> out;
  for (std::size_t ei = 0; ei < a.edges.size(); ++ei) {
    auto const & e = a.edges[ei];
    if (e.source != s.location) continue;
    auto g = constrain(s.zone, model::constraints(e.guard));
    if (!g) continue;
    for (auto const & r : reset_successors(*g, std::span<ClockIndex const>(e.resets)))
      for (auto & pz : enter(a, e.target, add_weight(r, e.weight)))
        out.push_back(SymbolicState{e.target, std::move(pz), ei});
  }
  return out;
}

namespace {

struct Node {
  SymbolicState state;
  std::optional<std::size_t> parent;
  bool waiting = false;
};

class Search {
 public:
  Search(Automaton const & a, ExplorerConfig const & cfg) : a_(a), cfg_(cfg), passed_(a.locations.size()) {
    m_ = model::max_constants(a);
    if (cfg.uniform_m) m_ = m_.uniform();
    waiting_at_.resize(a.locations.size());
  }

  Verdict run() {
    auto const start = std::chrono::steady_clock::now();
    Verdict v;
    std::optional<std::uint64_t> cap = cfg_.iteration_cap;
    if (a_.has_negative_weights()) {
      if (cfg_.pruning || cfg_.hint) throw std::invalid_argument("pruning and hints need non-negative weights");
      if (!cap && !cfg_.time_cap) {
        cap = kNegativeWeightCap;
        v.warnings.push_back(
            "the model has negative weights; exploration is only guaranteed to terminate when every cycle has "
            "non-negative total cost, so it is capped at " +
            std::to_string(kNegativeWeightCap) + " iterations");
      }
    }
    for (auto & s : initial_states(a_)) push_state(std::move(s), std::nullopt);

    while (waiting_count_ > 0) {
      if (cap && v.stats.popped >= *cap) {
        v.terminated = false;
        break;
      }
      if (cfg_.time_cap && std::chrono::steady_clock::now() - start >= *cfg_.time_cap) {
        v.terminated = false;
        break;
      }
      std::size_t const id = pop();
      ++v.stats.popped;
      SymbolicState const & s = nodes_[id].state;
      ExtValue const low = mincost(s.zone);
      if (a_.locations[s.location].goal && low < v.cost) {
        v.cost = low;
        v.trace = trace_of(id);
        if (cfg_.on_progress) cfg_.on_progress(v.cost, v.stats.popped);
        if (v.cost.is_minus_infinity()) break;
      }
      if (pruned(low, v.cost)) continue;
      if (covered(id)) continue;
      bool const took_over = insert_passed(id);
      auto succ = symbolic_post(a_, nodes_[id].state);
      std::vector<std::size_t> fresh;
      for (auto & t : succ) {
        if (pruned(mincost(t.zone), v.cost)) continue;
        fresh.push_back(push_state(std::move(t), id));
      }
      if (took_over && cfg_.strategy == Strategy::sbfs) {
        for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) queue_.push_front(*it);
      } else if (cfg_.strategy == Strategy::dfs) {
        for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) queue_.push_back(*it);
      } else {
        for (auto id2 : fresh) queue_.push_back(id2);
      }
      stats_.max_stored = std::max<std::uint64_t>(stats_.max_stored, waiting_count_ + passed_count_);
    }
    stats_.popped = v.stats.popped;
    v.stats = stats_;
    if (!v.cost.is_finite()) v.trace.clear();
    v.stats.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
  }

 private:
  std::size_t push_state(SymbolicState s, std::optional<std::size_t> parent) {
    std::size_t const id = nodes_.size();
    std::size_t const loc = s.location;
    nodes_.push_back(Node{std::move(s), parent, true});
    waiting_at_[loc].push_back(id);
    ++waiting_count_;
    ++stats_.added_to_waiting;
    if (!parent) queue_.push_back(id);
    stats_.max_stored = std::max<std::uint64_t>(stats_.max_stored, waiting_count_ + passed_count_);
    return id;
  }

  std::size_t pop() {
    while (true) {
      std::size_t id;
      if (cfg_.strategy == Strategy::dfs) {
        id = queue_.back();
        queue_.pop_back();
      } else {
        id = queue_.front();
        queue_.pop_front();
      }
      if (!nodes_[id].waiting) continue;
      nodes_[id].waiting = false;
      --waiting_count_;
      auto & list = waiting_at_[nodes_[id].state.location];
      list.erase(std::find(list.begin(), list.end(), id));
      return id;
    }
  }

  bool pruned(ExtValue const & low, ExtValue const & best) const {
    if (cfg_.pruning && low >= best) return true;
    return cfg_.hint && low > ExtValue(*cfg_.hint);
  }

  bool test(PricedZone const & x, PricedZone const & y) {
    ++stats_.tests;
    bool const r = cfg_.inclusion == InclusionKind::abstract ? includes(x, y, m_) : simple_includes(x, y);
    if (r) ++stats_.successful_tests;
    if (cfg_.on_inclusion_test) cfg_.on_inclusion_test(x, y, r);
    return r;
  }

  bool covered(std::size_t id) {
    auto const & s = nodes_[id].state;
    for (std::size_t p : passed_[s.location])
      if (test(s.zone, nodes_[p].state.zone)) return true;
    return false;
  }

  // Adds id to Passed, dropping the entries it subsumes; under SBFS also
  // drops the waiting states it subsumes. Returns whether anything was dropped.
  bool insert_passed(std::size_t id) {
    auto const & s = nodes_[id].state;
    bool dropped = false;
    auto & list = passed_[s.location];
    std::vector<std::size_t> keep;
    for (std::size_t p : list) {
      if (test(nodes_[p].state.zone, s.zone)) {
        dropped = true;
        --passed_count_;
      } else {
        keep.push_back(p);
      }
    }
    list = std::move(keep);
    if (cfg_.strategy == Strategy::sbfs) {
      auto & w = waiting_at_[s.location];
      std::vector<std::size_t> still;
      for (std::size_t q : w) {
        if (test(nodes_[q].state.zone, s.zone)) {
          nodes_[q].waiting = false;
          --waiting_count_;
          dropped = true;
        } else {
          still.push_back(q);
        }
      }
      w = std::move(still);
    }
    list.push_back(id);
    ++passed_count_;
    ++stats_.added_to_passed;
    return dropped;
  }

  std::vector<SymbolicState> trace_of(std::size_t id) const {
    std::vector<SymbolicState> out;
    for (std::optional<std::size_t> cur = id; cur; cur = nodes_[*cur].parent) out.push_back(nodes_[*cur].state);
    std::reverse(out.begin(), out.end());
    return out;
  }

  Automaton const & a_;
  ExplorerConfig const & cfg_;
  MaxConstants m_;
  std::vector<Node> nodes_;
  std::deque<std::size_t> queue_;
  std::vector<std::vector<std::size_t>> waiting_at_;
  std::vector<std::vector<std::size_t>> passed_;
  std::size_t waiting_count_ = 0;
  std::size_t passed_count_ = 0;
  Stats stats_;
};

}  // namespace

Verdict explore(Automaton const & a, ExplorerConfig const & cfg) {
  if (a.clock_count() == 0) throw std::invalid_argument("the model has no clock");
  return Search(a, cfg).run();
}

namespace {

dbm::Constraint<Rational> to_rational(dbm::IntConstraint const & c) {
  return dbm::Constraint<Rational>{c.i, c.j, dbm::Bound<Rational>{zonecost::to_rational(c.bound.value),
                                                                   c.bound.strict, c.bound.infinite}};
}

RationalZone with(RationalZone z, std::vector<dbm::IntConstraint> const & cs) {
  for (auto const & c : cs) z = dbm::intersect(z, to_rational(c));
  return z;
}

// A point of z where f is at most its infimum plus eps.
std::vector<Rational> near_optimal(RationalZone const & z, dbm::Affine const & f, Rational const & eps) {
  auto const opt = dbm::inf_affine(z, f);
  if (!opt.value.is_finite()) throw std::domain_error("no finite optimum along the trace");
  auto const c = dbm::sample_point(z);
  Rational const gap = dbm::evaluate(f, std::span<Rational const>(c)) - opt.value.value();
  if (gap <= 0) return c;
  Rational lambda = eps / gap;
  if (lambda > Rational(1, 2)) lambda = Rational(1, 2);
  std::vector<Rational> p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) p[i] = (1 - lambda) * opt.witness[i] + lambda * c[i];
  return p;
}

struct Back {
  std::vector<Rational> before;
  Rational delay;
};

// Valuation of `from` and delay after edge e leading to w, nearly minimizing
// the cost of `from` plus the delay cost in the target location.
Back step_back(Automaton const & a, SymbolicState const & from, model::Edge const & e, std::vector<Rational> const & w,
               Rational const & eps) {
  std::size_t const n = a.clock_count();
  auto const & target = a.locations[e.target];
  RationalZone r = with(dbm::to_rational_zone(from.zone.zone), model::constraints(e.guard));
  std::vector<ClockIndex> kept;
  for (ClockIndex x = 1; x <= n; ++x)
    if (std::find(e.resets.begin(), e.resets.end(), x) == e.resets.end()) kept.push_back(x);

  std::optional<Rational> delay;
  if (!e.resets.empty()) delay = w[e.resets.front() - 1];
  // entry valuation must satisfy the target invariant
  std::vector<Rational> zero(n, Rational(0));
  for (auto const & atom : target.invariant) {
    if (std::find(kept.begin(), kept.end(), atom.clock) != kept.end()) {
      for (auto const & c : model::constraints(model::Guard{atom})) r = dbm::intersect(r, to_rational(c));
    } else if (!model::satisfies(model::Guard{atom}, zero)) {
      throw std::logic_error("entry violates the target invariant");
    }
  }
  dbm::Affine f = from.zone.cost.fn;
  Rational const rate = zonecost::to_rational(target.rate);
  if (!kept.empty()) {
    ClockIndex const y0 = kept.front();
    for (ClockIndex y : kept) {
      if (y == y0) continue;
      Rational const d = w[y - 1] - w[y0 - 1];
      r = dbm::intersect(r, dbm::difference<Rational>(y, y0, d));
      r = dbm::intersect(r, dbm::difference<Rational>(y0, y, -d));
    }
    if (delay) {
      r = dbm::intersect(r, dbm::upper_bound<Rational>(y0, w[y0 - 1] - *delay));
      r = dbm::intersect(r, dbm::lower_bound<Rational>(y0, w[y0 - 1] - *delay));
      f.constant += rate * *delay;
    } else {
      r = dbm::intersect(r, dbm::upper_bound<Rational>(y0, w[y0 - 1]));
      f.coefficient(y0) -= rate;
      f.constant += rate * w[y0 - 1];
    }
  } else {
    f.constant += rate * *delay;
  }
  if (r.is_empty()) throw std::logic_error("trace step has no predecessor");
  Back b{near_optimal(r, f, eps), 0};
  b.delay = delay ? *delay : w[kept.front() - 1] - b.before[kept.front() - 1];
  return b;
}

}  // namespace

model::Run extract_witness(Automaton const & a, std::vector<SymbolicState> const & trace, Rational const & eps) {
  if (trace.empty()) throw std::invalid_argument("empty trace");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (a.clock_count() == 0) throw std::invalid_argument("the model has no clock");
  auto const & last = trace.back().zone;
  if (!mincost(last).is_finite()) throw std::domain_error("no finite witness for this cost");
  Rational const share = eps / static_cast<long>(trace.size());
  std::vector<Rational> w = near_optimal(dbm::to_rational_zone(last.zone), last.cost.fn, share);
  std::vector<Rational> delays(trace.size());
  for (std::size_t j = trace.size() - 1; j > 0; --j) {
    auto const & e = a.edges[*trace[j].edge];
    Back b = step_back(a, trace[j - 1], e, w, share);
    delays[j] = b.delay;
    w = std::move(b.before);
  }
  delays[0] = w[0];
  model::Run run;
  for (std::size_t j = 1; j < trace.size(); ++j) run.steps.push_back({delays[j - 1], *trace[j].edge});
  run.final_delay = delays.back();
  return run;
}

}  // namespace zonecost
