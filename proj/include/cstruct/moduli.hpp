#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cstruct/modulus.hpp"
#include "cstruct/signature.hpp"

namespace cstruct {

// I = {r >= 0 : u(r) < 1}, an interval [0, sup) or [0, sup].
struct Threshold {
  ExtRational sup;
  bool attained = false;
  bool bounded() const { return sup.is_finite(); }
};

Threshold threshold_set(const Modulus& u);
Threshold threshold_set(const Signature& sig, std::size_t r, std::size_t i);

struct PairCheck {
  bool holds = true;
  std::optional<std::pair<Rational, Rational>> witness;
};

// u(x+y) >= u(x) + u(y) for x, y > 0 with x + y <= bound (x + y < bound when
// !closed). Exact, via the vertices of the breakpoint arrangement.
PairCheck check_superadditive(const Modulus& u, const Rational& bound, bool closed = true);

// u(x+y) >= u+(x) + u+(y) on the same domain, with u+ the right limit.
PairCheck check_superadditive_right(const Modulus& u, const Rational& bound, bool closed = true);

// K with u(r) = K r on (0, bound), or on (0, bound] when closed.
std::optional<Rational> check_linear(const Modulus& u, const Rational& bound, bool closed = false);

struct UscCheck {
  bool holds = true;
  std::optional<Rational> jump;
};

// u(b) equals the right limit at every breakpoint b <= bound (b < bound when
// !closed).
UscCheck check_usc(const Modulus& u, const Rational& bound, bool closed = true);

enum class ViolationKind {
  Unbounded,         // I_{R,i} unbounded
  Superadditivity,   // u(r1+r2) < u(r1)+u(r2) on I
  Linearity,         // arity >= 2 argument not linear on I
  StrongSemiproper,  // u(r1+r2) < u+(r1)+u+(r2) with r1+r2 in I
  Usc,               // left-valued jump inside I
  NotLipschitz,      // argument not linear on a bounded I
};

std::string to_string(ViolationKind k);

struct ClassificationViolation {
  ViolationKind kind;
  std::size_t relation = 0;
  std::size_t argument = 0;
  std::optional<Rational> r1;  // witness point, or jump point for Usc
  std::optional<Rational> r2;
};

struct ArgumentReport {
  std::size_t relation = 0;
  std::size_t argument = 0;
  Threshold threshold;
  std::optional<Rational> lipschitz_constant;  // K with u = K r on I
  bool superadditive = false;
};

struct SignatureClassification {
  std::vector<ArgumentReport> arguments;  // relation-major order
  bool semiproper = false;
  bool strongly_semiproper = false;
  bool proper = false;
  bool lipschitz = false;
  std::vector<ClassificationViolation> violations;

  const ArgumentReport& at(std::size_t r, std::size_t i) const;
};

SignatureClassification classify(const Signature& sig);

// Re-evaluates a witness against the modulus; true if it exhibits the failure.
bool witness_confirms(const Signature& sig, const ClassificationViolation& v);

// u*(t) = inf{r in (0, c] : t < u(r)} for u superadditive on I = [0, c).
class PseudoInverse {
 public:
  explicit PseudoInverse(Modulus u);

  struct Value {
    Rational value;
    bool clamped = false;  // no r in (0, c] exceeds t; value is c
  };
  Value operator()(const Rational& t) const;

  const Rational& sup() const { return c_; }
  bool attained() const { return attained_; }

 private:
  Modulus u_;
  Rational c_;
  bool attained_ = false;
};

}  // namespace cstruct
