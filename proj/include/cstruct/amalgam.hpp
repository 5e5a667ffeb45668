#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cstruct/structure.hpp"

namespace cstruct {

enum class Origin { M, P, Q };
std::string to_string(Origin o);

struct AmalgamResult {
  FinStructure amalgam;
  Embedding iota;  // P -> amalgam
  Embedding tau;   // Q -> amalgam
  bool strong = true;
  bool joint_fallback = false;                       // M was empty; joint_embed semantics
  std::vector<std::pair<Origin, std::string>> tags;  // per amalgam point
};

// Canonical strong amalgam of p and q over m. Cross distances are
// min_{z in M} d^P(x, z) + d^Q(z, y); when `delta` (an ascending distance
// value set) is nonempty they are capped at its maximum.
AmalgamResult strong_amalgam(const FinStructure& m, const FinStructure& p, const FinStructure& q,
                             const Embedding& phi, const Embedding& psi, const std::vector<Rational>& delta = {});

struct JointEmbedding {
  FinStructure structure;
  Embedding i;  // M -> structure
  Embedding j;  // N -> structure
  Rational delta;
};

// Disjoint union with every cross distance equal to delta.
JointEmbedding joint_embed(const FinStructure& m, const FinStructure& n, const std::vector<Rational>& delta = {});

// The cross distance joint_embed would use.
Rational joint_embed_distance(const FinStructure& m, const FinStructure& n, const std::vector<Rational>& delta = {});

struct AmalgamationProblem {
  FinStructure m, p, q;
  Embedding phi, psi;
};

// M = {x0}; P = {x0, x1} at distance r1; Q = {x0, x2} at distance r2.
AmalgamationProblem necessity_fixture_superadditivity(const SignaturePtr& sig, std::size_t r, std::size_t i,
                                                      const Rational& r1, const Rational& r2);

// M = {x0, u0} at distance r1 + r2; P adds x1 at distance `far` from both;
// Q adds x2 at distances r1, r2.
AmalgamationProblem necessity_fixture_linearity(const SignaturePtr& sig, std::size_t r, std::size_t i,
                                                const Rational& r1, const Rational& r2, const Rational& far);

struct Obstruction {
  bool holds = false;  // lower <= middle <= upper
  ExtRational lower, middle, upper;
};

// For a candidate amalgam n of the superadditivity fixture (maps iota: P -> n,
// tau: Q -> n): min{1, u(r1)+u(r2)} <= u(d(x1, x2)) <= u(r1+r2).
Obstruction amalgam_obstruction_superadditivity(const AmalgamationProblem& fx, std::size_t r, std::size_t i,
                                                const FinStructure& n, const Embedding& iota, const Embedding& tau);

// For the linearity fixture: u(r1+r2) <= u(d(x0,x2)) + u(d(u0,x2)) = u(r1) + u(r2).
Obstruction amalgam_obstruction_linearity(const AmalgamationProblem& fx, std::size_t r, std::size_t i,
                                          const FinStructure& n, const Embedding& iota, const Embedding& tau);

}  // namespace cstruct
