#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cstruct/rational.hpp"
#include "cstruct/signature.hpp"

namespace cstruct {

using Tuple = std::vector<std::size_t>;

// Dense row-major indexing of n-tuples over {0..size-1}; the first
// coordinate is the most significant digit.
std::size_t tuple_count(std::size_t size, std::size_t arity);
std::size_t encode_tuple(const Tuple& t, std::size_t size);
Tuple decode_tuple(std::size_t index, std::size_t size, std::size_t arity);

// Finite metric space with total relation tensors. The constructor checks
// only the shape; validate() checks the metric axioms and (UC_L).
class FinStructure {
 public:
  FinStructure(SignaturePtr sig, std::vector<std::string> points, std::vector<Rational> dist,
               std::vector<std::vector<Rational>> rels);
  static FinStructure empty(SignaturePtr sig);

  std::size_t size() const { return points_.size(); }
  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& id(std::size_t x) const { return points_[x]; }
  std::optional<std::size_t> index_of(const std::string& id) const;

  const Rational& dist(std::size_t x, std::size_t y) const { return dist_[x * size() + y]; }
  const std::vector<Rational>& dist_matrix() const { return dist_; }
  const Rational& rel(std::size_t r, const Tuple& t) const { return rels_[r][encode_tuple(t, size())]; }
  const std::vector<Rational>& rel_values(std::size_t r) const { return rels_[r]; }
  const std::vector<std::vector<Rational>>& rel_tensors() const { return rels_; }

  Rational diameter() const;

  friend bool operator==(const FinStructure& a, const FinStructure& b);

 private:
  SignaturePtr sig_;
  std::vector<std::string> points_;
  std::vector<Rational> dist_;
  std::vector<std::vector<Rational>> rels_;
};

// Mutable staging area for a FinStructure; relation values default to 0.
class StructureBuilder {
 public:
  StructureBuilder(SignaturePtr sig, std::vector<std::string> points);
  StructureBuilder& dist(std::size_t x, std::size_t y, const Rational& d);  // sets both orders
  StructureBuilder& dist(const std::string& x, const std::string& y, const Rational& d);
  StructureBuilder& rel(std::size_t r, const Tuple& t, const Rational& v);
  StructureBuilder& rel(const std::string& name, const std::vector<std::string>& t, const Rational& v);
  // Sets every tuple of relation r.
  StructureBuilder& fill(std::size_t r, const Rational& v);
  FinStructure build() const;

 private:
  std::size_t point(const std::string& id) const;
  SignaturePtr sig_;
  std::vector<std::string> points_;
  std::vector<Rational> dist_;
  std::vector<std::vector<Rational>> rels_;
};

struct StructureViolation {
  enum class Kind { Asymmetric, Diagonal, NonPositive, Triangle, ValueRange, UniformContinuity };
  Kind kind;
  std::vector<std::size_t> points;  // pair or triple (x, y, z) with d(x,z) > d(x,y) + d(y,z)
  std::size_t relation = 0;
  std::size_t argument = 0;
  Tuple tuple_a, tuple_b;  // differ only in `argument`
  ExtRational lhs, rhs;    // the failed inequality lhs <= rhs
};

std::string to_string(StructureViolation::Kind k);
std::string describe(const FinStructure& s, const StructureViolation& v);

// Exhaustive; with stop_at_first the result holds at most one violation.
std::vector<StructureViolation> validate(const FinStructure& s, bool stop_at_first = false);
inline bool is_valid(const FinStructure& s) { return validate(s, true).empty(); }

// Metric axioms only.
std::vector<StructureViolation> validate_metric(std::size_t n, const std::vector<Rational>& dist,
                                                bool stop_at_first = false);

FinStructure substructure(const FinStructure& s, const std::vector<std::size_t>& subset);

// Injective point map, source index -> target index.
struct Embedding {
  std::vector<std::size_t> map;
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

bool is_embedding(const FinStructure& a, const FinStructure& b, const Embedding& e);

// All embeddings of a into b in lexicographic order; limit 0 means no limit.
std::vector<Embedding> find_embeddings(const FinStructure& a, const FinStructure& b, std::size_t limit = 0);
bool isomorphic(const FinStructure& a, const FinStructure& b);

// Bijection between dom and range; dom is sorted and image[k] = p(dom[k]).
struct PartialIso {
  std::vector<std::size_t> dom;
  std::vector<std::size_t> image;

  std::optional<std::size_t> apply(std::size_t x) const;
  std::vector<std::size_t> range() const;  // sorted
  friend bool operator==(const PartialIso&, const PartialIso&) = default;
};

// p after q, defined on dom(q); requires range(q) = dom(p).
PartialIso compose(const PartialIso& p, const PartialIso& q);
bool composable(const PartialIso& p, const PartialIso& q);

// Includes the empty map; ordered by domain size, then domain, then image.
std::vector<PartialIso> enumerate_partial_isos(const FinStructure& s);
bool is_partial_iso(const FinStructure& s, const PartialIso& p);

// Automorphisms as permutations.
std::vector<std::vector<std::size_t>> automorphisms(const FinStructure& s);

}  // namespace cstruct
