#include "cstruct/rational.hpp"

#include <cctype>

#include "cstruct/error.hpp"

namespace cstruct {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw ParseError("malformed rational: '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_ext(const ExtRational& e) {
  return e.is_infinite() ? std::string("inf") : format_rational(e.value());
}

ExtRational parse_ext(std::string_view text) {
  if (text == "inf" || text == "INFINITY" || text == "infinity") return ExtRational::infinity();
  return parse_rational(text);
}

std::ostream& operator<<(std::ostream& os, const ExtRational& e) { return os << format_ext(e); }

Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  return d < 0 ? Rational(-d) : d;
}

}  // namespace cstruct
