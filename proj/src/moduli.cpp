#include "cstruct/moduli.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "cstruct/error.hpp"

namespace cstruct {

Threshold threshold_set(const Modulus& u) {
  for (const Piece& p : u.pieces()) {
    bool whole = false;
    if (p.infinite || (p.slope == 0 && p.offset >= 1)) {
      whole = true;
    } else if (p.slope > 0) {
      Rational star = (Rational(1) - p.offset) / p.slope;
      if (star <= p.from) {
        whole = true;
      } else if (p.contains(star)) {
        return {ExtRational(star), false};
      }
    }
    if (whole) {
      // An open left end is owned by the previous piece, whose values are < 1.
      return {ExtRational(p.from), !p.from_closed};
    }
  }
  return {ExtRational::infinity(), false};
}

Threshold threshold_set(const Signature& sig, std::size_t r, std::size_t i) {
  return threshold_set(sig.modulus(r, i));
}

namespace {

int sign(int v) { return (v > 0) - (v < 0); }

// g(x, y) = u(x+y) - F(x) - F(y) < 0 ? Infinite u(x+y) never fails.
bool negative(const ExtRational& lhs, const ExtRational& a, const ExtRational& b) {
  if (lhs.is_infinite()) return false;
  if (a.is_infinite() || b.is_infinite()) return true;
  return lhs.value() < a.value() + b.value();
}

PairCheck pair_check(const Modulus& u, const Rational& bound, bool closed, bool right) {
  if (bound <= 0) throw PreconditionError("superadditivity bound must be positive");
  std::vector<Rational> lines{Rational(0)};
  for (const Rational& b : u.breakpoints()) {
    if (b < bound) lines.push_back(b);
  }
  lines.push_back(bound);

  auto in_closed_triangle = [&](const Rational& x, const Rational& y) {
    return x >= 0 && y >= 0 && x + y <= bound;
  };
  std::set<std::pair<Rational, Rational>> vertices;
  for (const Rational& a : lines) {
    for (const Rational& b : lines) {
      if (in_closed_triangle(a, b)) vertices.emplace(a, b);
      Rational c = b - a;
      if (in_closed_triangle(a, c)) vertices.emplace(a, c);
      if (in_closed_triangle(c, a)) vertices.emplace(c, a);
    }
  }

  auto one_sided = [&](const Rational& x, int s, bool use_right) -> ExtRational {
    if (s > 0) return u.right_limit(x);
    if (s < 0) return u.left_limit(x);
    return use_right ? u.right_limit(x) : u.eval(x);
  };
  auto in_domain = [&](const Rational& x, const Rational& y) {
    if (x <= 0 || y <= 0) return false;
    Rational s = x + y;
    return s < bound || (closed && s == bound);
  };
  auto fails_at = [&](const Rational& x, const Rational& y) {
    Rational s = x + y;
    return negative(u.eval(s), one_sided(x, 0, right), one_sided(y, 0, right));
  };

  static constexpr std::array<std::pair<int, int>, 13> kDirections{{
      {0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1},
      {1, 1}, {-1, -1}, {2, -1}, {1, -2}, {-2, 1}, {-1, 2},
  }};

  for (const auto& [x, y] : vertices) {
    Rational s = x + y;
    for (const auto& [dx, dy] : kDirections) {
      int sx = sign(dx), sy = sign(dy), ss = sign(dx + dy);
      bool ok_x = x > 0 || sx > 0;
      bool ok_y = y > 0 || sy > 0;
      bool ok_s = s < bound || ss < 0 || (ss == 0 && closed);
      if (dx == 0 && dy == 0) ok_x = x > 0, ok_y = y > 0;
      if (!ok_x || !ok_y || !ok_s) continue;
      ExtRational lhs = one_sided(s, ss, false);
      ExtRational a = x == 0 ? ExtRational(u.right_limit(0)) : one_sided(x, sx, right);
      ExtRational b = y == 0 ? ExtRational(u.right_limit(0)) : one_sided(y, sy, right);
      if (!negative(lhs, a, b)) continue;
      if (dx == 0 && dy == 0) return {false, std::make_pair(x, y)};
      Rational t(1);
      for (int iter = 0; iter < 512; ++iter, t /= 2) {
        Rational px = x + t * dx, py = y + t * dy;
        if (in_domain(px, py) && fails_at(px, py)) return {false, std::make_pair(px, py)};
      }
      throw std::logic_error("superadditivity witness search did not converge");
    }
  }
  return {true, std::nullopt};
}

bool in_threshold(const Modulus& u, const Rational& r) { return r >= 0 && u.eval(r) < ExtRational(1); }

// Two points of I with different ratios u(r)/r, given that u is not linear on I.
std::pair<Rational, Rational> nonlinearity_witness(const Modulus& u, const Threshold& th) {
  const Rational& c = th.sup.value();
  std::vector<Rational> samples;
  for (const Piece& p : u.pieces()) {
    if (p.from >= c) break;
    if (!p.is_point()) {
      Rational hi = p.to.is_finite() ? std::min(p.to.value(), c) : c;
      samples.push_back((p.from + hi) / 2);
      samples.push_back((3 * p.from + hi) / 4);
    }
  }
  for (const Rational& b : u.breakpoints()) {
    if (b < c || (b == c && th.attained)) samples.push_back(b);
  }
  const Rational& r1 = samples.front();
  Rational v1 = u.eval(r1).value();
  for (const Rational& r2 : samples) {
    if (!in_threshold(u, r2)) continue;
    if (u.eval(r2).value() * r1 != v1 * r2) return {r1, r2};
  }
  // Linear with constant 0 is excluded by positivity; report the sample.
  return {r1, r1};
}

}  // namespace

PairCheck check_superadditive(const Modulus& u, const Rational& bound, bool closed) {
  return pair_check(u, bound, closed, false);
}

PairCheck check_superadditive_right(const Modulus& u, const Rational& bound, bool closed) {
  return pair_check(u, bound, closed, true);
}

std::optional<Rational> check_linear(const Modulus& u, const Rational& bound, bool closed) {
  if (bound <= 0) throw PreconditionError("linearity bound must be positive");
  std::optional<Rational> k;
  for (const Piece& p : u.pieces()) {
    if (p.from >= bound) break;
    if (p.is_point()) continue;
    if (p.infinite || p.offset != 0 || p.slope <= 0) return std::nullopt;
    if (k && *k != p.slope) return std::nullopt;
    k = p.slope;
  }
  if (!k) return std::nullopt;
  for (const Rational& b : u.breakpoints()) {
    if (b > bound || (b == bound && !closed)) break;
    if (u.eval(b) != ExtRational(Rational(*k * b))) return std::nullopt;
  }
  return k;
}

UscCheck check_usc(const Modulus& u, const Rational& bound, bool closed) {
  for (const Rational& b : u.breakpoints()) {
    if (b > bound || (b == bound && !closed)) break;
    if (u.eval(b) != u.right_limit(b)) return {false, b};
  }
  return {true, std::nullopt};
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Unbounded: return "unbounded";
    case ViolationKind::Superadditivity: return "superadditivity";
    case ViolationKind::Linearity: return "linearity";
    case ViolationKind::StrongSemiproper: return "strong_semiproperness";
    case ViolationKind::Usc: return "upper_semicontinuity";
    case ViolationKind::NotLipschitz: return "not_lipschitz";
  }
  return "unknown";
}

const ArgumentReport& SignatureClassification::at(std::size_t r, std::size_t i) const {
  for (const ArgumentReport& a : arguments) {
    if (a.relation == r && a.argument == i) return a;
  }
  throw PreconditionError("no such relation argument");
}

SignatureClassification classify(const Signature& sig) {
  SignatureClassification out;
  bool bounded = true, superadditive = true, nary_linear = true, strong = true, usc = true, linear = true;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const RelationSymbol& rel = sig[r];
    for (std::size_t i = 0; i < rel.arity; ++i) {
      const Modulus& u = rel.moduli[i];
      ArgumentReport rep;
      rep.relation = r;
      rep.argument = i;
      rep.threshold = threshold_set(u);
      auto violation = [&](ViolationKind kind, std::optional<Rational> a = std::nullopt,
                           std::optional<Rational> b = std::nullopt) {
        out.violations.push_back({kind, r, i, std::move(a), std::move(b)});
      };
      if (!rep.threshold.bounded()) {
        bounded = false;
        linear = false;
        if (rel.arity >= 2) nary_linear = false;
        violation(ViolationKind::Unbounded);
        out.arguments.push_back(rep);
        continue;
      }
      const Rational c = rep.threshold.sup.value();
      const bool closed = rep.threshold.attained;
      PairCheck sa = check_superadditive(u, c, closed);
      rep.superadditive = sa.holds;
      if (!sa.holds) {
        superadditive = false;
        violation(ViolationKind::Superadditivity, sa.witness->first, sa.witness->second);
      }
      rep.lipschitz_constant = check_linear(u, c, closed);
      if (!rep.lipschitz_constant) {
        auto [w1, w2] = nonlinearity_witness(u, rep.threshold);
        linear = false;
        if (rel.arity >= 2) {
          nary_linear = false;
          violation(ViolationKind::Linearity, w1, w2);
        }
        violation(ViolationKind::NotLipschitz, w1, w2);
      }
      if (rel.arity == 1) {
        PairCheck st = check_superadditive_right(u, c, closed);
        if (!st.holds) {
          strong = false;
          violation(ViolationKind::StrongSemiproper, st.witness->first, st.witness->second);
        }
        UscCheck uc = check_usc(u, c, false);
        if (!uc.holds) {
          usc = false;
          violation(ViolationKind::Usc, uc.jump);
        }
      }
      out.arguments.push_back(rep);
    }
  }
  out.semiproper = bounded && superadditive && nary_linear;
  out.strongly_semiproper = out.semiproper && strong;
  out.proper = out.semiproper && usc;
  out.lipschitz = bounded && linear;
  return out;
}

bool witness_confirms(const Signature& sig, const ClassificationViolation& v) {
  const Modulus& u = sig.modulus(v.relation, v.argument);
  switch (v.kind) {
    case ViolationKind::Unbounded:
      return !threshold_set(u).bounded();
    case ViolationKind::Superadditivity:
    case ViolationKind::StrongSemiproper: {
      if (!v.r1 || !v.r2 || *v.r1 <= 0 || *v.r2 <= 0) return false;
      Rational s = *v.r1 + *v.r2;
      if (!in_threshold(u, s)) return false;
      bool right = v.kind == ViolationKind::StrongSemiproper;
      ExtRational a = right ? u.right_limit(*v.r1) : u.eval(*v.r1);
      ExtRational b = right ? u.right_limit(*v.r2) : u.eval(*v.r2);
      return negative(u.eval(s), a, b);
    }
    case ViolationKind::Usc:
      return v.r1 && *v.r1 > 0 && in_threshold(u, *v.r1) && u.eval(*v.r1) != u.right_limit(*v.r1) &&
             ExtRational(*v.r1) < threshold_set(u).sup;
    case ViolationKind::Linearity:
    case ViolationKind::NotLipschitz: {
      if (!v.r1 || !v.r2 || *v.r1 <= 0 || *v.r2 <= 0) return false;
      if (!in_threshold(u, *v.r1) || !in_threshold(u, *v.r2)) return false;
      return u.eval(*v.r1).value() * *v.r2 != u.eval(*v.r2).value() * *v.r1;
    }
  }
  return false;
}

PseudoInverse::PseudoInverse(Modulus u) : u_(std::move(u)) {
  Threshold th = threshold_set(u_);
  if (!th.bounded()) throw PreconditionError("pseudo-inverse needs a bounded threshold interval");
  c_ = th.sup.value();
  attained_ = th.attained;
  if (c_ <= 0) throw PreconditionError("pseudo-inverse needs a nondegenerate threshold interval");
  PairCheck sa = check_superadditive(u_, c_, attained_);
  if (!sa.holds) {
    throw PreconditionError("pseudo-inverse needs a superadditive modulus; fails at (" +
                            format_rational(sa.witness->first) + ", " + format_rational(sa.witness->second) + ")");
  }
}

PseudoInverse::Value PseudoInverse::operator()(const Rational& t) const {
  if (t < 0) throw PreconditionError("pseudo-inverse evaluated at a negative argument");
  for (const Piece& p : u_.pieces()) {
    if (p.from > c_ || (p.from == c_ && !p.from_closed)) break;
    bool hi_in;
    Rational hi;
    if (p.to.is_finite() && p.to.value() <= c_) {
      hi = p.to.value();
      hi_in = p.to_closed;
    } else {
      hi = c_;
      hi_in = true;
    }
    if (p.infinite || p.slope == 0) {
      if (p.formula(p.from) > ExtRational(t)) return {p.from, false};
      continue;
    }
    Rational star = (t - p.offset) / p.slope;
    Rational lo = std::max(p.from, star);
    if (lo < hi) return {lo, false};
    if (lo == hi && hi_in && hi > star && (hi > p.from || p.from_closed)) return {hi, false};
  }
  return {c_, true};
}

}  // namespace cstruct
