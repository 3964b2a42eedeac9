#ifndef ZONECOST_DBM_HPP
#define ZONECOST_DBM_HPP

// Difference bound matrices over a dense clock layout. Index 0 is the
// reference clock (constant zero); clocks are 1..n. Entry (i, j) bounds
// x_i - x_j from above.
//
// The kernel is templated on the bound value type: std::int64_t for
// exploration, Rational for witness reconstruction where zones receive
// rational equalities.

#include "zonecost/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zonecost::dbm {

using ClockIndex = std::size_t;
inline constexpr ClockIndex kReference = 0;

template <typename T>
struct Bound {
  T value{};
  bool strict = true;
  bool infinite = true;

  static Bound infinity() { return Bound{}; }
  static Bound le(T v) { return Bound{std::move(v), false, false}; }
  static Bound lt(T v) { return Bound{std::move(v), true, false}; }

  bool is_finite() const { return !infinite; }
};

// (m,<) < (m,<=) < (m',<) for m < m'; infinity is the maximum.
template <typename T>
bool operator<(Bound<T> const & a, Bound<T> const & b) {
  if (a.infinite) return false;
  if (b.infinite) return true;
  if (a.value != b.value) return a.value < b.value;
  return a.strict && !b.strict;
}

template <typename T>
bool operator==(Bound<T> const & a, Bound<T> const & b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.value == b.value && a.strict == b.strict;
}

template <typename T>
bool operator<=(Bound<T> const & a, Bound<T> const & b) {
  return !(b < a);
}

template <typename T>
Bound<T> operator+(Bound<T> const & a, Bound<T> const & b) {
  if (a.infinite || b.infinite) return Bound<T>::infinity();
  return Bound<T>{T(a.value + b.value), a.strict || b.strict, false};
}

/// x_i - x_j ≼ bound.
template <typename T>
struct Constraint {
  ClockIndex i = 0;
  ClockIndex j = 0;
  Bound<T> bound;
};

template <typename T>
Constraint<T> upper_bound(ClockIndex x, T c, bool strict = false) {
  return {x, kReference, strict ? Bound<T>::lt(std::move(c)) : Bound<T>::le(std::move(c))};
}

template <typename T>
Constraint<T> lower_bound(ClockIndex x, T c, bool strict = false) {
  T neg = -c;
  return {kReference, x, strict ? Bound<T>::lt(std::move(neg)) : Bound<T>::le(std::move(neg))};
}

/// x_i - x_j ≼ c as a constraint.
template <typename T>
Constraint<T> difference(ClockIndex i, ClockIndex j, T c, bool strict = false) {
  return {i, j, strict ? Bound<T>::lt(std::move(c)) : Bound<T>::le(std::move(c))};
}

template <typename T>
class BasicZone {
 public:
  /// All clocks non-negative and otherwise unconstrained.
  explicit BasicZone(std::size_t clock_count = 0);

  static BasicZone universal(std::size_t clock_count) { return BasicZone(clock_count); }
  static BasicZone origin(std::size_t clock_count);
  static BasicZone empty_zone(std::size_t clock_count);

  std::size_t clock_count() const { return dim_ - 1; }
  std::size_t dim() const { return dim_; }

  Bound<T> const & at(ClockIndex i, ClockIndex j) const { return m_[i * dim_ + j]; }
  /// Raw write access; the zone must be canonicalized afterwards.
  Bound<T> & raw(ClockIndex i, ClockIndex j) { return m_[i * dim_ + j]; }

  bool is_empty() const { return empty_; }
  void mark_empty() { empty_ = true; }

  bool is_closed() const;
  /// True iff every clock has a finite upper bound.
  bool is_bounded() const;

  friend bool operator==(BasicZone const & a, BasicZone const & b) {
    if (a.dim_ != b.dim_) return false;
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.m_ == b.m_;
  }

 private:
  std::size_t dim_;
  std::vector<Bound<T>> m_;
  bool empty_ = false;
};

using Zone = BasicZone<std::int64_t>;
using RationalZone = BasicZone<Rational>;
using IntConstraint = Constraint<std::int64_t>;

/// Affine function Σ coef[i-1]·x_i + constant over clocks 1..n.
struct Affine {
  std::vector<Rational> coef;
  Rational constant;

  static Affine zero(std::size_t clock_count) { return Affine{std::vector<Rational>(clock_count), Rational(0)}; }

  std::size_t clock_count() const { return coef.size(); }
  Rational const & coefficient(ClockIndex x) const { return coef[x - 1]; }
  Rational & coefficient(ClockIndex x) { return coef[x - 1]; }
  /// Σ coefficients: derivative along the diagonal direction (1,...,1).
  Rational slope() const;

  friend bool operator==(Affine const &, Affine const &) = default;
};

Affine operator-(Affine const & a, Affine const & b);
Affine operator-(Affine const & a);

/// valuation[i-1] is the value of clock i.
Rational evaluate(Affine const & f, std::span<Rational const> valuation);

template <typename T>
BasicZone<T> canonicalize(BasicZone<T> z);

template <typename T>
BasicZone<T> intersect(BasicZone<T> z, std::span<Constraint<T> const> constraints);

template <typename T>
BasicZone<T> intersect(BasicZone<T> z, Constraint<T> const & c) {
  return intersect(std::move(z), std::span<Constraint<T> const>(&c, 1));
}

/// Conjunction of two zones over the same clocks.
template <typename T>
BasicZone<T> intersect(BasicZone<T> const & a, BasicZone<T> const & b);

template <typename T>
BasicZone<T> up(BasicZone<T> z);

template <typename T>
BasicZone<T> reset(BasicZone<T> z, std::span<ClockIndex const> clocks);

/// Existential elimination of every clock not in `keep` (sorted, 1-based).
/// The result has clock i+1 equal to keep[i].
template <typename T>
BasicZone<T> project(BasicZone<T> const & z, std::span<ClockIndex const> keep);

/// Removes the last clock (existential elimination).
template <typename T>
BasicZone<T> drop_last_clock(BasicZone<T> const & z);

/// Weakens all strict bounds.
template <typename T>
BasicZone<T> closure(BasicZone<T> z);

template <typename T>
bool zone_subset(BasicZone<T> const & a, BasicZone<T> const & b);

template <typename T>
bool contains(BasicZone<T> const & z, std::span<Rational const> valuation);

enum class FacetKind { lower, upper };

/// Facet of closure(base): the zone where axis - pivot_clock == pivot_offset
/// (pivot_clock may be the reference clock).
template <typename T>
struct Facet {
  BasicZone<T> zone;
  ClockIndex axis = 0;
  ClockIndex pivot_clock = 0;
  T pivot_offset{};
  FacetKind kind = FacetKind::lower;
};

/// One facet per finite lower (resp. upper) bound on `axis` in closure(z),
/// non-empty ones only, identical zones merged.
template <typename T>
std::vector<Facet<T>> facets(BasicZone<T> const & z, ClockIndex axis, FacetKind kind);

/// Directions along which a zone is infinite: Σ_{x∈unbounded} α_x·e_x with
/// α ≥ 0 and α_x ≤ α_y for every (x, y) in `ordered`.
struct RecessionCone {
  std::vector<ClockIndex> unbounded;
  std::vector<std::pair<ClockIndex, ClockIndex>> ordered;

  bool empty() const { return unbounded.empty(); }
};

template <typename T>
RecessionCone recession_directions(BasicZone<T> const & z);

/// The recession cone of closure(z) as a zone: finite entries become (0, <=).
template <typename T>
BasicZone<T> recession_zone(BasicZone<T> const & z);

/// True iff some direction of the cone strictly increases f.
bool increases_along(RecessionCone const & cone, Affine const & f);

struct Optimum {
  ExtValue value;
  /// Point of closure(z) reaching the optimum; set only when finite.
  std::vector<Rational> witness;
};

/// sup of f over z (computed on the closure). Throws std::domain_error on an
/// empty zone.
template <typename T>
Optimum sup_affine(BasicZone<T> const & z, Affine const & f);

template <typename T>
Optimum inf_affine(BasicZone<T> const & z, Affine const & f);

/// Vertices of closure(z). Throws std::domain_error if the closure is
/// unbounded or z is empty.
template <typename T>
std::vector<std::vector<T>> vertices(BasicZone<T> const & z);

/// Vertices of closure(z), which may be unbounded (zones are pointed since
/// clocks are non-negative). Throws std::domain_error if z is empty.
template <typename T>
std::vector<std::vector<T>> extreme_points(BasicZone<T> const & z);

RationalZone to_rational_zone(Zone const & z);

/// Some valuation of z (strict constraints hold strictly). Throws
/// std::domain_error if z is empty.
std::vector<Rational> sample_point(RationalZone const & z);

template <typename T>
std::string to_string(BasicZone<T> const & z, std::span<std::string const> clock_names = {});

}  // namespace zonecost::dbm

#endif  // ZONECOST_DBM_HPP
