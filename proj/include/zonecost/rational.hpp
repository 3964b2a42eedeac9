#ifndef ZONECOST_RATIONAL_HPP
#define ZONECOST_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace zonecost {

/// Exact rational number. All cost arithmetic goes through this type.
using Rational = mpq_class;

inline Rational to_rational(std::int64_t v) { return Rational(static_cast<long>(v)); }
inline Rational const & to_rational(Rational const & v) { return v; }

/// Parses "7", "-3", "47/5" or a decimal such as "9.4". Throws
/// std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

std::string to_string(Rational const & q);

/// A value of ℚ ∪ {−∞, +∞}.
class ExtValue {
 public:
  enum class Kind { minus_infinity, finite, plus_infinity };

  ExtValue() : kind_(Kind::plus_infinity) {}
  ExtValue(Rational v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT(implicit)
  ExtValue(std::int64_t v) : kind_(Kind::finite), value_(to_rational(v)) {}  // NOLINT(implicit)

  static ExtValue plus_infinity() { return ExtValue(Kind::plus_infinity); }
  static ExtValue minus_infinity() { return ExtValue(Kind::minus_infinity); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_plus_infinity() const { return kind_ == Kind::plus_infinity; }
  bool is_minus_infinity() const { return kind_ == Kind::minus_infinity; }

  /// Only meaningful when is_finite().
  Rational const & value() const { return value_; }

  friend bool operator==(ExtValue const & a, ExtValue const & b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::finite || a.value_ == b.value_;
  }
  friend bool operator<(ExtValue const & a, ExtValue const & b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    return a.kind_ == Kind::finite && a.value_ < b.value_;
  }
  friend bool operator!=(ExtValue const & a, ExtValue const & b) { return !(a == b); }
  friend bool operator>(ExtValue const & a, ExtValue const & b) { return b < a; }
  friend bool operator<=(ExtValue const & a, ExtValue const & b) { return !(b < a); }
  friend bool operator>=(ExtValue const & a, ExtValue const & b) { return !(a < b); }

  friend std::ostream & operator<<(std::ostream & os, ExtValue const & v);

 private:
  explicit ExtValue(Kind k) : kind_(k) {}

  Kind kind_;
  Rational value_;
};

/// "inf", "-inf" or the exact rational ("47/5").
std::string to_string(ExtValue const & v);

/// Parses the output of to_string(ExtValue) back.
ExtValue parse_ext_value(std::string_view text);

}  // namespace zonecost

#endif  // ZONECOST_RATIONAL_HPP
