#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cstruct/structure.hpp"

namespace cstruct {

// Finite group given by its multiplication table; the constructor checks the
// group axioms exhaustively and throws PreconditionError on failure.
class FinGroup {
 public:
  FinGroup(std::vector<std::string> elements, std::vector<std::vector<std::size_t>> mul);
  static FinGroup trivial();
  static FinGroup cyclic(std::size_t n);
  static FinGroup product(const FinGroup& a, const FinGroup& b);  // (g, h) at g * |b| + h

  std::size_t size() const { return elements_.size(); }
  const std::string& name(std::size_t g) const { return elements_[g]; }
  const std::vector<std::string>& elements() const { return elements_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a][b]; }
  const std::vector<std::vector<std::size_t>>& table() const { return mul_; }
  std::size_t identity() const { return identity_; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }

 private:
  std::vector<std::string> elements_;
  std::vector<std::vector<std::size_t>> mul_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
};

// Empty when the table is a group.
std::vector<std::string> group_violations(const std::vector<std::vector<std::size_t>>& mul);

// Injective homomorphism a -> b.
bool is_group_embedding(const FinGroup& a, const FinGroup& b, const std::vector<std::size_t>& e);

struct Action {
  FinGroup group;
  FinStructure structure;
  std::vector<std::vector<std::size_t>> act;  // act[g][x] = g . x
  std::size_t apply(std::size_t g, std::size_t x) const { return act[g][x]; }
};

struct ActionReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ActionReport validate_action(const Action& a);

// Trivial action of the trivial group.
Action trivial_action(const FinStructure& s);

struct ActionEmbedding {
  std::vector<std::size_t> group_map;  // source group -> target group
  Embedding point_map;
};

ActionReport check_action_embedding(const Action& from, const Action& to, const ActionEmbedding& e);
inline bool is_action_embedding(const Action& from, const Action& to, const ActionEmbedding& e) {
  return check_action_embedding(from, to, e).ok();
}

// The pseudo-metric on N x Gamma, indexed by (y * |Gamma| + g) pairs.
// `lambda_in_gamma` embeds the group of lambda_on_n into that of gamma_on_m;
// `m_in_n` embeds gamma_on_m's structure into lambda_on_n's.
std::vector<Rational> coset_pseudometric(const Action& gamma_on_m, const Action& lambda_on_n,
                                         const std::vector<std::size_t>& lambda_in_gamma, const Embedding& m_in_n);

struct ActionExtension {
  Action action;  // Gamma acting on Q
  Embedding phi;  // N -> Q, y -> [y, 1]
  std::vector<std::pair<std::size_t, std::size_t>> reps;  // least (point, group) per Q point
  std::vector<std::size_t> class_of;                      // (y * |Gamma| + g) -> Q point
};

// Coset-quotient extension of compatible actions. Points of Q that contain
// some (y, 1) keep the id of y and come first, in N's order; the others are
// named "y@g" after their least representative.
ActionExtension extend_action(const Action& gamma_on_m, const Action& lambda_on_n,
                              const std::vector<std::size_t>& lambda_in_gamma, const Embedding& m_in_n);

struct ActionJointEmbedding {
  Action action;  // product group on the joint structure
  ActionEmbedding left, right;
  Rational delta;
};

ActionJointEmbedding joint_embed_actions(const Action& a, const Action& b, const std::vector<Rational>& delta = {});

// Commuting-square check for an amalgam of actions: (e, f): mu -> tau,
// (p, q): mu -> pi, (g, h): tau -> kappa, (r, s): pi -> kappa.
ActionReport verify_action_amalgam(const Action& mu, const Action& tau, const Action& pi, const ActionEmbedding& ef,
                                   const ActionEmbedding& pq, const Action& kappa, const ActionEmbedding& gh,
                                   const ActionEmbedding& rs);

}  // namespace cstruct
