#include "zonecost/dbm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace zonecost::dbm {

template <typename T>
BasicZone<T>::BasicZone(std::size_t clock_count)
    : dim_(clock_count + 1), m_(dim_ * dim_, Bound<T>::infinity()) {
  for (std::size_t i = 0; i < dim_; ++i) {
    raw(i, i) = Bound<T>::le(T(0));
    raw(0, i) = Bound<T>::le(T(0));
  }
}

template <typename T>
BasicZone<T> BasicZone<T>::origin(std::size_t clock_count) {
  BasicZone z(clock_count);
  for (auto & b : z.m_) b = Bound<T>::le(T(0));
  return z;
}

template <typename T>
BasicZone<T> BasicZone<T>::empty_zone(std::size_t clock_count) {
  BasicZone z(clock_count);
  z.empty_ = true;
  return z;
}

template <typename T>
bool BasicZone<T>::is_closed() const {
  return std::none_of(m_.begin(), m_.end(), [](Bound<T> const & b) { return b.is_finite() && b.strict; });
}

template <typename T>
bool BasicZone<T>::is_bounded() const {
  for (std::size_t i = 1; i < dim_; ++i)
    if (!at(i, 0).is_finite()) return false;
  return true;
}

Rational Affine::slope() const {
  Rational s = 0;
  for (auto const & c : coef) s += c;
  return s;
}

Affine operator-(Affine const & a, Affine const & b) {
  if (a.coef.size() != b.coef.size()) throw std::invalid_argument("affine functions over different clocks");
  Affine r = a;
  for (std::size_t i = 0; i < r.coef.size(); ++i) r.coef[i] -= b.coef[i];
  r.constant -= b.constant;
  return r;
}

Affine operator-(Affine const & a) {
  Affine r = a;
  for (auto & c : r.coef) c = -c;
  r.constant = -r.constant;
  return r;
}

Rational evaluate(Affine const & f, std::span<Rational const> valuation) {
  if (valuation.size() != f.coef.size()) throw std::invalid_argument("valuation size mismatch");
  Rational s = f.constant;
  for (std::size_t i = 0; i < valuation.size(); ++i) s += f.coef[i] * valuation[i];
  return s;
}

namespace {

template <typename T>
Rational as_rational(T const & v) {
  return to_rational(v);
}

// Tightens entry (i, j) of a canonical zone and restores canonical form in
// O(n^2).
template <typename T>
void tighten(BasicZone<T> & z, ClockIndex i, ClockIndex j, Bound<T> const & b) {
  if (z.is_empty() || !(b < z.at(i, j))) return;
  if (b + z.at(j, i) < Bound<T>::le(T(0))) {
    z.mark_empty();
    return;
  }
  std::size_t const d = z.dim();
  for (std::size_t a = 0; a < d; ++a) {
    Bound<T> const ai = (a == i) ? Bound<T>::le(T(0)) : z.at(a, i);
    if (!ai.is_finite()) continue;
    Bound<T> const via = ai + b;
    for (std::size_t c = 0; c < d; ++c) {
      Bound<T> const jc = (c == j) ? Bound<T>::le(T(0)) : z.at(j, c);
      Bound<T> const cand = via + jc;
      if (cand < z.at(a, c)) z.raw(a, c) = cand;
    }
  }
}

}  // namespace

template <typename T>
BasicZone<T> canonicalize(BasicZone<T> z) {
  if (z.is_empty()) return z;
  std::size_t const d = z.dim();
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      if (!z.at(i, k).is_finite()) continue;
      for (std::size_t j = 0; j < d; ++j) {
        Bound<T> const s = z.at(i, k) + z.at(k, j);
        if (s < z.at(i, j)) z.raw(i, j) = s;
      }
    }
  for (std::size_t i = 0; i < d; ++i) {
    if (z.at(i, i) < Bound<T>::le(T(0))) {
      z.mark_empty();
      return z;
    }
    z.raw(i, i) = Bound<T>::le(T(0));
  }
  return z;
}

template <typename T>
BasicZone<T> intersect(BasicZone<T> z, std::span<Constraint<T> const> constraints) {
  for (auto const & c : constraints) {
    if (c.i >= z.dim() || c.j >= z.dim()) throw std::out_of_range("constraint over unknown clock");
    if (z.is_empty()) break;
    if (c.i == c.j) {
      if (c.bound < Bound<T>::le(T(0))) z.mark_empty();
      continue;
    }
    tighten(z, c.i, c.j, c.bound);
  }
  return z;
}

template <typename T>
BasicZone<T> intersect(BasicZone<T> const & a, BasicZone<T> const & b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("zones over different clocks");
  if (a.is_empty()) return a;
  if (b.is_empty()) return b;
  BasicZone<T> r = a;
  for (std::size_t i = 0; i < r.dim(); ++i)
    for (std::size_t j = 0; j < r.dim(); ++j)
      if (b.at(i, j) < r.at(i, j)) r.raw(i, j) = b.at(i, j);
  return canonicalize(std::move(r));
}

template <typename T>
BasicZone<T> up(BasicZone<T> z) {
  if (z.is_empty()) return z;
  for (std::size_t i = 1; i < z.dim(); ++i) z.raw(i, 0) = Bound<T>::infinity();
  return z;
}

template <typename T>
BasicZone<T> reset(BasicZone<T> z, std::span<ClockIndex const> clocks) {
  if (z.is_empty()) return z;
  for (ClockIndex x : clocks) {
    if (x == 0 || x >= z.dim()) throw std::out_of_range("reset of unknown clock");
    for (std::size_t j = 0; j < z.dim(); ++j) {
      if (j == x) continue;
      z.raw(x, j) = z.at(0, j);
      z.raw(j, x) = z.at(j, 0);
    }
  }
  return z;
}

template <typename T>
BasicZone<T> project(BasicZone<T> const & z, std::span<ClockIndex const> keep) {
  if (!std::is_sorted(keep.begin(), keep.end())) throw std::invalid_argument("projection clocks must be sorted");
  std::vector<ClockIndex> idx{0};
  for (ClockIndex x : keep) {
    if (x == 0 || x >= z.dim()) throw std::out_of_range("projection onto unknown clock");
    idx.push_back(x);
  }
  BasicZone<T> r(keep.size());
  if (z.is_empty()) {
    r.mark_empty();
    return r;
  }
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) r.raw(a, b) = z.at(idx[a], idx[b]);
  return r;
}

template <typename T>
BasicZone<T> drop_last_clock(BasicZone<T> const & z) {
  if (z.clock_count() == 0) throw std::invalid_argument("zone has no clock to drop");
  std::vector<ClockIndex> keep(z.clock_count() - 1);
  std::iota(keep.begin(), keep.end(), ClockIndex{1});
  return project(z, std::span<ClockIndex const>(keep));
}

template <typename T>
BasicZone<T> closure(BasicZone<T> z) {
  if (z.is_empty()) return z;
  for (std::size_t i = 0; i < z.dim(); ++i)
    for (std::size_t j = 0; j < z.dim(); ++j)
      if (z.at(i, j).is_finite()) z.raw(i, j).strict = false;
  return canonicalize(std::move(z));
}

template <typename T>
bool zone_subset(BasicZone<T> const & a, BasicZone<T> const & b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("zones over different clocks");
  if (a.is_empty()) return true;
  if (b.is_empty()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (b.at(i, j) < a.at(i, j)) return false;
  return true;
}

template <typename T>
bool contains(BasicZone<T> const & z, std::span<Rational const> valuation) {
  if (valuation.size() != z.clock_count()) throw std::invalid_argument("valuation size mismatch");
  if (z.is_empty()) return false;
  auto value = [&](std::size_t i) { return i == 0 ? Rational(0) : valuation[i - 1]; };
  for (std::size_t i = 0; i < z.dim(); ++i)
    for (std::size_t j = 0; j < z.dim(); ++j) {
      auto const & b = z.at(i, j);
      if (i == j || !b.is_finite()) continue;
      Rational const diff = value(i) - value(j);
      Rational const lim = as_rational(b.value);
      if (diff > lim || (b.strict && diff == lim)) return false;
    }
  return true;
}

template <typename T>
std::vector<Facet<T>> facets(BasicZone<T> const & z, ClockIndex axis, FacetKind kind) {
  std::vector<Facet<T>> out;
  if (z.is_empty()) return out;
  if (axis == 0 || axis >= z.dim()) throw std::out_of_range("facet axis out of range");
  BasicZone<T> const w = closure(z);
  for (ClockIndex j = 0; j < w.dim(); ++j) {
    if (j == axis) continue;
    Facet<T> f;
    f.axis = axis;
    f.pivot_clock = j;
    f.kind = kind;
    if (kind == FacetKind::lower) {
      // x_j - x <= b, made tight: x - x_j = -b
      Bound<T> const & b = w.at(j, axis);
      if (!b.is_finite()) continue;
      f.pivot_offset = T(-b.value);
      f.zone = intersect(w, difference<T>(axis, j, T(-b.value)));
    } else {
      Bound<T> const & b = w.at(axis, j);
      if (!b.is_finite()) continue;
      f.pivot_offset = b.value;
      f.zone = intersect(w, difference<T>(j, axis, T(-b.value)));
    }
    if (f.zone.is_empty()) continue;
    bool const dup = std::any_of(out.begin(), out.end(), [&](Facet<T> const & g) { return g.zone == f.zone; });
    if (!dup) out.push_back(std::move(f));
  }
  return out;
}

template <typename T>
RecessionCone recession_directions(BasicZone<T> const & z) {
  RecessionCone cone;
  if (z.is_empty()) return cone;
  for (ClockIndex x = 1; x < z.dim(); ++x)
    if (!z.at(x, 0).is_finite()) cone.unbounded.push_back(x);
  for (ClockIndex x : cone.unbounded)
    for (ClockIndex y : cone.unbounded)
      if (x != y && z.at(x, y).is_finite()) cone.ordered.emplace_back(x, y);
  return cone;
}

template <typename T>
BasicZone<T> recession_zone(BasicZone<T> const & z) {
  if (z.is_empty()) return z;
  BasicZone<T> r = z;
  for (std::size_t i = 0; i < r.dim(); ++i)
    for (std::size_t j = 0; j < r.dim(); ++j)
      if (r.at(i, j).is_finite()) r.raw(i, j) = Bound<T>::le(T(0));
  return canonicalize(std::move(r));
}

bool increases_along(RecessionCone const & cone, Affine const & f) {
  // Extreme rays of the cone are indicator vectors of non-empty sets U closed
  // upwards under the ordering constraints.
  std::size_t const k = cone.unbounded.size();
  if (k == 0) return false;
  if (k > 24) throw std::length_error("too many unbounded clocks");
  auto pos = [&](ClockIndex x) {
    return static_cast<std::size_t>(std::find(cone.unbounded.begin(), cone.unbounded.end(), x) - cone.unbounded.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (auto const & [x, y] : cone.ordered) order.emplace_back(pos(x), pos(y));
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    bool closed = true;
    for (auto const & [a, b] : order)
      if ((mask >> a & 1u) && !(mask >> b & 1u)) {
        closed = false;
        break;
      }
    if (!closed) continue;
    Rational s = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) s += f.coefficient(cone.unbounded[i]);
    if (s > 0) return true;
  }
  return false;
}

namespace {

// Lowest value of the last clock compatible with the other coordinates.
template <typename T>
Rational lowest_last(BasicZone<T> const & w, std::vector<Rational> const & prefix) {
  ClockIndex const x = w.clock_count();
  Rational lo = 0;
  bool first = true;
  for (ClockIndex j = 0; j < w.dim(); ++j) {
    if (j == x || !w.at(j, x).is_finite()) continue;
    Rational const vj = j == 0 ? Rational(0) : prefix[j - 1];
    Rational const cand = vj - as_rational(w.at(j, x).value);
    if (first || cand > lo) lo = cand;
    first = false;
  }
  return lo;
}

// sup of f over a closed canonical non-empty zone, eliminating the last
// clock through the facets on the side f increases towards.
template <typename T>
Optimum sup_closed(BasicZone<T> const & w, Affine const & f) {
  std::size_t const n = w.clock_count();
  if (n == 0) return Optimum{ExtValue(f.constant), {}};
  ClockIndex const x = n;
  Rational const fx = f.coefficient(x);
  Affine g{std::vector<Rational>(f.coef.begin(), f.coef.end() - 1), f.constant};
  if (fx == 0) {
    Optimum r = sup_closed(drop_last_clock(w), g);
    if (r.value.is_finite()) r.witness.push_back(lowest_last(w, r.witness));
    return r;
  }
  auto const fs = facets(w, x, fx > 0 ? FacetKind::upper : FacetKind::lower);
  if (fs.empty()) return Optimum{ExtValue::plus_infinity(), {}};
  Optimum best{ExtValue::minus_infinity(), {}};
  for (auto const & facet : fs) {
    Affine h = g;
    if (facet.pivot_clock != 0) h.coefficient(facet.pivot_clock) += fx;
    h.constant += fx * as_rational(facet.pivot_offset);
    Optimum r = sup_closed(drop_last_clock(facet.zone), h);
    if (r.value.is_plus_infinity()) return r;
    if (best.value.is_minus_infinity() || r.value > best.value) {
      Rational const base = facet.pivot_clock == 0 ? Rational(0) : r.witness[facet.pivot_clock - 1];
      r.witness.push_back(base + as_rational(facet.pivot_offset));
      best = std::move(r);
    }
  }
  return best;
}

template <typename T>
std::vector<std::vector<T>> vertex_candidates(BasicZone<T> const & w) {
  std::size_t const n = w.clock_count();
  if (n == 0) return {std::vector<T>{}};
  ClockIndex const x = n;
  std::vector<std::vector<T>> out;
  for (FacetKind kind : {FacetKind::lower, FacetKind::upper})
    for (auto const & facet : facets(w, x, kind))
      for (auto & u : vertex_candidates(drop_last_clock(facet.zone))) {
        T const base = facet.pivot_clock == 0 ? T(0) : u[facet.pivot_clock - 1];
        u.push_back(T(base + facet.pivot_offset));
        if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(std::move(u));
      }
  return out;
}

// A point of a closed zone is a vertex iff its tight difference constraints
// connect every clock to the reference clock.
template <typename T>
bool is_vertex(BasicZone<T> const & w, std::vector<T> const & v) {
  std::size_t const d = w.dim();
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto value = [&](std::size_t i) { return i == 0 ? T(0) : v[i - 1]; };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j || !w.at(i, j).is_finite()) continue;
      if (T(value(i) - value(j)) == w.at(i, j).value) parent[find(i)] = find(j);
    }
  std::size_t const root = find(0);
  for (std::size_t i = 1; i < d; ++i)
    if (find(i) != root) return false;
  return true;
}

}  // namespace

template <typename T>
Optimum sup_affine(BasicZone<T> const & z, Affine const & f) {
  if (f.clock_count() != z.clock_count()) throw std::invalid_argument("affine function over different clocks");
  if (z.is_empty()) throw std::domain_error("optimization over an empty zone");
  BasicZone<T> const w = closure(z);
  if (increases_along(recession_directions(w), f)) return Optimum{ExtValue::plus_infinity(), {}};
  return sup_closed(w, f);
}

template <typename T>
Optimum inf_affine(BasicZone<T> const & z, Affine const & f) {
  Optimum r = sup_affine(z, -f);
  if (r.value.is_plus_infinity()) r.value = ExtValue::minus_infinity();
  else r.value = ExtValue(Rational(-r.value.value()));
  return r;
}

template <typename T>
std::vector<std::vector<T>> vertices(BasicZone<T> const & z) {
  if (z.is_empty()) throw std::domain_error("vertices of an empty zone");
  if (!closure(z).is_bounded()) throw std::domain_error("vertices of an unbounded zone");
  return extreme_points(z);
}

template <typename T>
std::vector<std::vector<T>> extreme_points(BasicZone<T> const & z) {
  if (z.is_empty()) throw std::domain_error("vertices of an empty zone");
  BasicZone<T> const w = closure(z);
  auto cands = vertex_candidates(w);
  std::vector<std::vector<T>> out;
  for (auto & c : cands)
    if (is_vertex(w, c)) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

RationalZone to_rational_zone(Zone const & z) {
  RationalZone r(z.clock_count());
  if (z.is_empty()) {
    r.mark_empty();
    return r;
  }
  for (std::size_t i = 0; i < z.dim(); ++i)
    for (std::size_t j = 0; j < z.dim(); ++j) {
      auto const & b = z.at(i, j);
      r.raw(i, j) = b.is_finite() ? Bound<Rational>{to_rational(b.value), b.strict, false} : Bound<Rational>::infinity();
    }
  return r;
}

template <typename T>
std::string to_string(BasicZone<T> const & z, std::span<std::string const> clock_names) {
  if (z.is_empty()) return "false";
  auto name = [&](std::size_t i) {
    if (i - 1 < clock_names.size()) return clock_names[i - 1];
    return "x" + std::to_string(i);
  };
  std::ostringstream os;
  bool first = true;
  auto emit = [&](std::string const & s) {
    if (!first) os << " && ";
    os << s;
    first = false;
  };
  auto val = [](T const & v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  for (std::size_t i = 1; i < z.dim(); ++i) {
    auto const & lo = z.at(0, i);
    if (lo.is_finite() && !(lo == Bound<T>::le(T(0)))) emit(name(i) + (lo.strict ? ">" : ">=") + val(T(-lo.value)));
    auto const & hi = z.at(i, 0);
    if (hi.is_finite()) emit(name(i) + (hi.strict ? "<" : "<=") + val(hi.value));
  }
  for (std::size_t i = 1; i < z.dim(); ++i)
    for (std::size_t j = 1; j < z.dim(); ++j) {
      auto const & b = z.at(i, j);
      if (i != j && b.is_finite()) emit(name(i) + "-" + name(j) + (b.strict ? "<" : "<=") + val(b.value));
    }
  return first ? "true" : os.str();
}

#define ZONECOST_INSTANTIATE(T)                                                                      \
  template class BasicZone<T>;                                                                       \
  template BasicZone<T> canonicalize(BasicZone<T>);                                                  \
  template BasicZone<T> intersect(BasicZone<T>, std::span<Constraint<T> const>);                     \
  template BasicZone<T> intersect(BasicZone<T> const &, BasicZone<T> const &);                       \
  template BasicZone<T> up(BasicZone<T>);                                                            \
  template BasicZone<T> reset(BasicZone<T>, std::span<ClockIndex const>);                            \
  template BasicZone<T> project(BasicZone<T> const &, std::span<ClockIndex const>);                  \
  template BasicZone<T> drop_last_clock(BasicZone<T> const &);                                       \
  template BasicZone<T> closure(BasicZone<T>);                                                       \
  template bool zone_subset(BasicZone<T> const &, BasicZone<T> const &);                             \
  template bool contains(BasicZone<T> const &, std::span<Rational const>);                           \
  template std::vector<Facet<T>> facets(BasicZone<T> const &, ClockIndex, FacetKind);                \
  template BasicZone<T> recession_zone(BasicZone<T> const &);                                        \
  template RecessionCone recession_directions(BasicZone<T> const &);                                 \
  template Optimum sup_affine(BasicZone<T> const &, Affine const &);                                 \
  template Optimum inf_affine(BasicZone<T> const &, Affine const &);                                 \
  template std::vector<std::vector<T>> extreme_points(BasicZone<T> const &);                         \
  template std::vector<std::vector<T>> vertices(BasicZone<T> const &);                               \
  template std::string to_string(BasicZone<T> const &, std::span<std::string const>);

ZONECOST_INSTANTIATE(std::int64_t)
ZONECOST_INSTANTIATE(Rational)

#undef ZONECOST_INSTANTIATE

std::vector<Rational> sample_point(RationalZone const & z) {
  if (z.is_empty()) throw std::domain_error("sample of an empty zone");
  RationalZone w = z;
  std::vector<Rational> v(z.clock_count());
  for (ClockIndex x = 1; x <= z.clock_count(); ++x) {
    auto const & up = w.at(x, 0);
    Rational const lo = -w.at(0, x).value;
    if (!up.is_finite()) v[x - 1] = lo + 1;
    else if (up.value == lo) v[x - 1] = lo;
    else v[x - 1] = (lo + up.value) / 2;
    w = intersect(w, upper_bound<Rational>(x, v[x - 1]));
    w = intersect(w, lower_bound<Rational>(x, v[x - 1]));
    if (w.is_empty()) throw std::logic_error("sample_point left the zone");
  }
  return v;
}

}  // namespace zonecost::dbm
