#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cstruct {

using Rational = mpq_class;

// n/d in canonical form. Prefer this over mpq_class(n, d), which does not
// canonicalize.
inline Rational ratio(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

// Accepts "p/q", "p", with optional leading '-'. Result is canonical.
Rational parse_rational(std::string_view text);

// Always "p/q" in lowest terms with q > 0, e.g. "2/1", "0/1".
std::string format_rational(const Rational& q);

inline std::strong_ordering compare(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// A rational number or +infinity.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(const Rational& v) : value_(v) {}  // NOLINT(implicit)
  ExtRational(long v) : value_(v) {}             // NOLINT(implicit)
  ExtRational(int v) : value_(v) {}              // NOLINT(implicit)

  static ExtRational infinity() {
    ExtRational e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const Rational& value() const {
    if (infinite_) throw std::logic_error("value() on infinite ExtRational");
    return value_;
  }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtRational(Rational(a.value_ + b.value_));
  }
  ExtRational& operator+=(const ExtRational& b) { return *this = *this + b; }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    return compare(a.value_, b.value_);
  }

 private:
  Rational value_ = 0;
  bool infinite_ = false;
};

// "inf" for infinity, otherwise format_rational.
std::string format_ext(const ExtRational& e);
ExtRational parse_ext(std::string_view text);

inline const ExtRational& min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }
inline const ExtRational& max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtRational& e);

Rational abs_diff(const Rational& a, const Rational& b);

}  // namespace cstruct
