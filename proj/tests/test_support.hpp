#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cstruct/modulus.hpp"
#include "cstruct/rational.hpp"

namespace testing_support {

using cstruct::ExtRational;
using cstruct::Modulus;
using cstruct::Rational;

inline Rational Q(const char* s) { return cstruct::parse_rational(s); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  Rational grid(int lo, int hi, int den) { return cstruct::ratio(uniform(lo, hi), den); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Random valid modulus: 1 to 4 pieces with breakpoints on a quarter grid,
// random ownership, occasional point pieces and upward jumps, and a tail
// that is affine, constant or infinite.
inline Modulus random_modulus(Rng& rng) {
  std::vector<cstruct::Piece> pieces;
  int n = rng.uniform(1, 4);
  Rational pos = 0;
  bool prev_closed = false;
  Rational value = 0;  // left limit at pos
  for (int k = 0; k < n; ++k) {
    cstruct::Piece p;
    p.from = pos;
    p.from_closed = k == 0 ? false : !prev_closed;
    Rational start = value;
    if (k > 0 && rng.coin(0.4)) start += rng.grid(1, 4, 4);
    if (k > 0 && p.from_closed && rng.coin(0.15)) {
      // point piece in between
      cstruct::Piece pt = p;
      pt.to = p.from;
      pt.to_closed = true;
      pt.slope = 0;
      pt.offset = start;
      pieces.push_back(pt);
      p.from_closed = false;
      if (rng.coin(0.5)) start += rng.grid(1, 2, 4);
    }
    p.slope = k == 0 ? rng.grid(1, 12, 4) : rng.grid(0, 12, 4);
    p.offset = k == 0 ? Rational(0) : Rational(start - p.slope * pos);
    Rational to = pos + rng.grid(1, 6, 4);
    p.to = to;
    p.to_closed = rng.coin();
    pieces.push_back(p);
    value = p.slope * to + p.offset;
    pos = to;
    prev_closed = p.to_closed;
  }
  int tail_kind = rng.uniform(0, 2);
  if (tail_kind == 0) return Modulus(pieces, ExtRational::infinity());
  if (tail_kind == 1) return Modulus(pieces, ExtRational(Rational(value + rng.grid(0, 8, 4))));
  cstruct::Piece p;
  p.from = pos;
  p.from_closed = !prev_closed;
  p.to = ExtRational::infinity();
  p.slope = rng.grid(0, 8, 4);
  p.offset = value + rng.grid(0, 4, 4) - p.slope * pos;
  pieces.push_back(p);
  return Modulus(pieces);
}

inline mpz_class denominators_lcm(const Modulus& u, const Rational& bound) {
  mpz_class l = bound.get_den();
  auto fold = [&](const Rational& q) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t()); };
  for (const auto& b : u.breakpoints()) fold(b);
  for (const auto& p : u.pieces()) {
    fold(p.slope);
    fold(p.offset);
  }
  return l;
}

// Brute-force grid oracle for superadditivity on {x, y > 0, x + y <= bound}:
// all points with coordinates k / D for D four times the lcm of denominators.
inline bool grid_superadditive(const Modulus& u, const Rational& bound, bool closed, bool right) {
  mpz_class D = 4 * denominators_lcm(u, bound);
  Rational step(mpz_class(1), D);
  for (Rational x = step; x < bound; x += step) {
    for (Rational y = step; x + y <= bound; y += step) {
      Rational s = x + y;
      if (s == bound && !closed) break;
      ExtRational lhs = u.eval(s);
      if (lhs.is_infinite()) continue;
      ExtRational a = right ? u.right_limit(x) : u.eval(x);
      ExtRational b = right ? u.right_limit(y) : u.eval(y);
      if (a.is_infinite() || b.is_infinite()) return false;
      if (lhs.value() < a.value() + b.value()) return false;
    }
  }
  return true;
}

}  // namespace testing_support
