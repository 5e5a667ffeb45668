#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstruct/rational.hpp"

namespace cstruct {

// One interval of a piecewise-affine modulus. The value is slope*r + offset,
// or +infinity throughout when `infinite` is set.
struct Piece {
  Rational from;
  bool from_closed = false;
  ExtRational to;  // infinite for the last piece
  bool to_closed = false;
  bool infinite = false;
  Rational slope;
  Rational offset;

  bool is_point() const { return to.is_finite() && to.value() == from; }
  bool contains(const Rational& r) const;
  // Affine formula at r, ignoring containment.
  ExtRational formula(const Rational& r) const;

  friend bool operator==(const Piece&, const Piece&) = default;
};

// Nondecreasing piecewise-affine function on (0, inf) with explicit endpoint
// ownership; u(0) = 0 by convention. Construction checks the partition and
// monotonicity; continuity at 0 and positivity are reported by defects().
class Modulus {
 public:
  // `tail`, when present, is a constant on the unbounded interval following
  // the last piece, owning the endpoint the last piece leaves open.
  explicit Modulus(std::vector<Piece> pieces, std::optional<ExtRational> tail = std::nullopt);

  // k*r on (0, inf).
  static Modulus linear(const Rational& k);
  // k*r on (0, cap), +infinity on [cap, inf).
  static Modulus linear_capped(const Rational& k, const Rational& cap);

  ExtRational eval(const Rational& r) const;
  // Limit from the right at r >= 0.
  ExtRational right_limit(const Rational& r) const;
  // Limit from the left at r > 0.
  ExtRational left_limit(const Rational& r) const;

  // Sorted finite piece endpoints greater than 0.
  std::vector<Rational> breakpoints() const;
  const std::vector<Piece>& pieces() const { return pieces_; }
  const Piece& piece_at(const Rational& r) const;

  // Violations of "right limit at 0 is 0" and "positive on (0, inf)".
  std::vector<std::string> defects() const;

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  std::vector<Piece> pieces_;
};

// Builds contiguous pieces left to right starting at 0 (open).
class ModulusBuilder {
 public:
  // Affine piece up to `to`; the endpoint belongs to this piece iff to_closed.
  ModulusBuilder& affine(const Rational& slope, const Rational& offset, const Rational& to, bool to_closed);
  // Single point [b, b] at the current position with the given value.
  ModulusBuilder& point(const ExtRational& value);
  // Final unbounded piece.
  ModulusBuilder& last_affine(const Rational& slope, const Rational& offset);
  ModulusBuilder& last_infinite();
  Modulus build() const { return Modulus(pieces_); }

 private:
  Piece next_piece() const;
  std::vector<Piece> pieces_;
};

}  // namespace cstruct
