#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cstruct/structure.hpp"

namespace cstruct {

// A one-point extension M_x of `base`: `ext` lists the base points first, in
// base order, and the new point last.
class OnePointExt {
 public:
  OnePointExt(FinStructure base, FinStructure ext);

  const FinStructure& base() const { return base_; }
  const FinStructure& structure() const { return ext_; }
  std::size_t new_index() const { return base_.size(); }
  const std::string& new_id() const { return ext_.id(new_index()); }
  const Rational& dist_to(std::size_t z) const { return ext_.dist(new_index(), z); }

 private:
  FinStructure base_;
  FinStructure ext_;
};

// The canonical amalgam of base and fx over the points `support` of base;
// fx lists the support points in order, then the new point.
OnePointExt extension_from_support(const FinStructure& base, const std::vector<std::size_t>& support,
                                   const FinStructure& fx);

struct KatetovValue {
  Rational value;
  bool flagged = false;  // empty base (lambda, rho) or u* clamped (mu)
};

KatetovValue lambda(const OnePointExt& x, const OnePointExt& y);
KatetovValue mu(const OnePointExt& x, const OnePointExt& y);
KatetovValue rho(const OnePointExt& x, const OnePointExt& y);

struct ExtensionDistance {
  KatetovValue mu, rho, lambda;
  Rational value;  // max of the three
};

ExtensionDistance dE(const OnePointExt& x, const OnePointExt& y);

// x ~ y: the identity on the base plus x -> y is an isomorphism.
bool equivalent(const OnePointExt& x, const OnePointExt& y);

// M u {x, y} with d(x, y) = dE(x, y) and relations from the conservative
// extension of M_x and M_y. Points: base, then x, then y.
FinStructure two_point_amalgam(const OnePointExt& x, const OnePointExt& y);

// Whether x is the canonical amalgam of base and the restriction to f.
bool is_support(const OnePointExt& x, const std::vector<std::size_t>& f);

}  // namespace cstruct
