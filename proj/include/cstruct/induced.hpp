#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cstruct/structure.hpp"

namespace cstruct {

class PseudoMetricMatrix {
 public:
  explicit PseudoMetricMatrix(std::size_t n = 0) : n_(n), v_(n * n) {}
  std::size_t size() const { return n_; }
  const ExtRational& operator()(std::size_t x, std::size_t y) const { return v_[x * n_ + y]; }
  ExtRational& operator()(std::size_t x, std::size_t y) { return v_[x * n_ + y]; }
  friend bool operator==(const PseudoMetricMatrix&, const PseudoMetricMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<ExtRational> v_;
};

// d_u(x, y) = min over chains of the sum of u(d(z_{k-1}, z_k)).
PseudoMetricMatrix induced_du(std::size_t n, const std::vector<Rational>& dist, const Modulus& u);
// One matrix per argument of relation r.
std::vector<PseudoMetricMatrix> induced_du_all(std::size_t n, const std::vector<Rational>& dist, const Signature& sig,
                                               std::size_t r);

ExtRational d_R(const Tuple& x, const Tuple& y, const std::vector<PseudoMetricMatrix>& per_coordinate);

// FinStructure whose relation maps may be undefined on some tuples.
class PartialStructure {
 public:
  PartialStructure(SignaturePtr sig, std::vector<std::string> points, std::vector<Rational> dist);
  static PartialStructure from_total(const FinStructure& s);

  std::size_t size() const { return points_.size(); }
  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  const std::vector<std::string>& points() const { return points_; }
  const Rational& dist(std::size_t x, std::size_t y) const { return dist_[x * size() + y]; }
  const std::vector<Rational>& dist_matrix() const { return dist_; }

  void set(std::size_t r, const Tuple& t, const Rational& v) { rels_[r][encode_tuple(t, size())] = v; }
  const std::optional<Rational>& get(std::size_t r, const Tuple& t) const { return rels_[r][encode_tuple(t, size())]; }
  const std::vector<std::optional<Rational>>& rel_values(std::size_t r) const { return rels_[r]; }
  std::vector<std::optional<Rational>>& rel_values(std::size_t r) { return rels_[r]; }

 private:
  SignaturePtr sig_;
  std::vector<std::string> points_;
  std::vector<Rational> dist_;
  std::vector<std::vector<std::optional<Rational>>> rels_;
};

struct LipschitzViolation {
  std::size_t relation = 0;
  Tuple a, b;
  Rational diff;
  ExtRational bound;  // d_R(a, b)
};

// Metric axioms, values in [0,1], and 1-Lipschitz on each domain.
std::optional<std::string> check_partial(const PartialStructure& x);
std::optional<LipschitzViolation> lipschitz_violation(const PartialStructure& x);

// R(t) = max{0, max over dom of R(y) - d_R(t, y)}.
FinStructure conservative_extension(const PartialStructure& x, bool check_precondition = true);

}  // namespace cstruct
