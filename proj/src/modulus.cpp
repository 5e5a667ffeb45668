#include "cstruct/modulus.hpp"

#include <algorithm>

#include "cstruct/error.hpp"

namespace cstruct {

bool Piece::contains(const Rational& r) const {
  if (r < from || (r == from && !from_closed)) return false;
  if (to.is_infinite()) return true;
  const Rational& b = to.value();
  return r < b || (r == b && to_closed);
}

ExtRational Piece::formula(const Rational& r) const {
  if (infinite) return ExtRational::infinity();
  return Rational(slope * r + offset);
}

Modulus::Modulus(std::vector<Piece> pieces, std::optional<ExtRational> tail) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw PreconditionError("modulus needs at least one piece");
  if (tail) {
    const Piece& last = pieces_.back();
    if (last.to.is_infinite()) throw PreconditionError("modulus has a tail after an unbounded piece");
    Piece t;
    t.from = last.to.value();
    t.from_closed = !last.to_closed;
    t.to = ExtRational::infinity();
    t.to_closed = false;
    if (tail->is_infinite()) {
      t.infinite = true;
    } else {
      t.offset = tail->value();
    }
    pieces_.push_back(t);
  }
  if (pieces_.front().from != 0 || pieces_.front().from_closed) {
    throw PreconditionError("first piece must start at 0 (open)");
  }
  if (pieces_.back().to.is_finite() || pieces_.back().to_closed) {
    throw PreconditionError("pieces must cover (0, inf)");
  }
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    Piece& p = pieces_[k];
    if (p.infinite) {
      p.slope = 0;
      p.offset = 0;
    } else if (p.slope < 0) {
      throw PreconditionError("negative slope in piece " + std::to_string(k));
    }
    if (p.to.is_finite()) {
      if (p.to.value() < p.from) throw PreconditionError("empty interval in piece " + std::to_string(k));
      if (p.is_point() && !(p.from_closed && p.to_closed)) {
        throw PreconditionError("degenerate piece " + std::to_string(k) + " must be a closed point");
      }
    }
    if (k + 1 < pieces_.size()) {
      const Piece& q = pieces_[k + 1];
      if (p.to.is_infinite() || p.to.value() != q.from) {
        throw PreconditionError("pieces " + std::to_string(k) + " and " + std::to_string(k + 1) + " are not contiguous");
      }
      if (p.to_closed == q.from_closed) {
        throw PreconditionError("endpoint " + format_rational(q.from) + " must belong to exactly one piece");
      }
      if (q.formula(q.from) < p.formula(q.from)) {
        throw PreconditionError("modulus decreases at " + format_rational(q.from));
      }
    }
  }
}

Modulus Modulus::linear(const Rational& k) { return ModulusBuilder().last_affine(k, 0).build(); }

Modulus Modulus::linear_capped(const Rational& k, const Rational& cap) {
  return ModulusBuilder().affine(k, 0, cap, false).last_infinite().build();
}

const Piece& Modulus::piece_at(const Rational& r) const {
  for (const Piece& p : pieces_) {
    if (p.contains(r)) return p;
  }
  throw PreconditionError("modulus evaluated outside (0, inf) at " + format_rational(r));
}

ExtRational Modulus::eval(const Rational& r) const {
  if (r < 0) throw PreconditionError("modulus evaluated at a negative argument");
  if (r == 0) return ExtRational(0);
  return piece_at(r).formula(r);
}

ExtRational Modulus::right_limit(const Rational& r) const {
  for (const Piece& p : pieces_) {
    if (p.is_point()) continue;
    if (p.from <= r && (p.to.is_infinite() || r < p.to.value())) return p.formula(r);
  }
  throw PreconditionError("right limit undefined at " + format_rational(r));
}

ExtRational Modulus::left_limit(const Rational& r) const {
  if (r <= 0) throw PreconditionError("left limit needs a positive argument");
  for (const Piece& p : pieces_) {
    if (p.is_point()) continue;
    if (p.from < r && (p.to.is_infinite() || r <= p.to.value())) return p.formula(r);
  }
  throw PreconditionError("left limit undefined at " + format_rational(r));
}

std::vector<Rational> Modulus::breakpoints() const {
  std::vector<Rational> out;
  for (const Piece& p : pieces_) {
    if (p.from > 0) out.push_back(p.from);
    if (p.to.is_finite()) out.push_back(p.to.value());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> Modulus::defects() const {
  std::vector<std::string> out;
  ExtRational at0 = right_limit(0);
  if (at0 != ExtRational(0)) out.push_back("right limit at 0 is " + format_ext(at0) + ", not 0");
  const Piece& first = pieces_.front();
  if (!first.infinite && first.offset == 0 && first.slope == 0) {
    out.push_back("modulus is 0 on an initial interval");
  }
  return out;
}

Piece ModulusBuilder::next_piece() const {
  Piece p;
  if (pieces_.empty()) {
    p.from = 0;
    p.from_closed = false;
  } else {
    const Piece& prev = pieces_.back();
    if (prev.to.is_infinite()) throw PreconditionError("builder: modulus already complete");
    p.from = prev.to.value();
    p.from_closed = !prev.to_closed;
  }
  return p;
}

ModulusBuilder& ModulusBuilder::affine(const Rational& slope, const Rational& offset, const Rational& to,
                                       bool to_closed) {
  Piece p = next_piece();
  p.slope = slope;
  p.offset = offset;
  p.to = to;
  p.to_closed = to_closed;
  pieces_.push_back(p);
  return *this;
}

ModulusBuilder& ModulusBuilder::point(const ExtRational& value) {
  Piece p = next_piece();
  p.to = p.from;
  p.to_closed = true;
  if (value.is_infinite()) {
    p.infinite = true;
  } else {
    p.offset = value.value();
  }
  pieces_.push_back(p);
  return *this;
}

ModulusBuilder& ModulusBuilder::last_affine(const Rational& slope, const Rational& offset) {
  Piece p = next_piece();
  p.slope = slope;
  p.offset = offset;
  p.to = ExtRational::infinity();
  pieces_.push_back(p);
  return *this;
}

ModulusBuilder& ModulusBuilder::last_infinite() {
  Piece p = next_piece();
  p.infinite = true;
  p.to = ExtRational::infinity();
  pieces_.push_back(p);
  return *this;
}

}  // namespace cstruct
