#include "zonecost/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace zonecost {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto const dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::string const whole = s.substr(0, dot);
  std::string const frac = s.substr(dot + 1);
  bool negative = false;
  std::string digits = whole;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  std::string const all = digits + frac;
  if (all.empty()) throw std::invalid_argument("malformed decimal '" + s + "'");
  for (char c : all)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("malformed decimal '" + s + "'");
  mpz_class num(all, 10);
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(Rational const & q) { return q.get_str(10); }

std::string to_string(ExtValue const & v) {
  switch (v.kind()) {
    case ExtValue::Kind::minus_infinity: return "-inf";
    case ExtValue::Kind::plus_infinity: return "inf";
    case ExtValue::Kind::finite: break;
  }
  return to_string(v.value());
}

std::ostream & operator<<(std::ostream & os, ExtValue const & v) { return os << to_string(v); }

ExtValue parse_ext_value(std::string_view text) {
  if (text == "inf" || text == "+inf") return ExtValue::plus_infinity();
  if (text == "-inf") return ExtValue::minus_infinity();
  return ExtValue(parse_rational(text));
}

}  // namespace zonecost
