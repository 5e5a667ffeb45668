#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cstruct/amalgam.hpp"
#include "cstruct/fraisse.hpp"
#include "cstruct/structure.hpp"

namespace cstruct {

// Classical symbol D_p (binary, distance p) or R_v (relation r at value v).
struct ClassicalSymbol {
  enum class Kind { Distance, Relation } kind;
  std::size_t arity;
  Rational param;            // p or v
  std::size_t relation = 0;  // for R_v
  std::string name;
};

struct ClassicalSignature {
  std::vector<Rational> p;  // ascending distance values
  std::vector<Rational> v;  // ascending relation values
  std::vector<ClassicalSymbol> symbols;
  std::optional<std::size_t> distance_symbol(const Rational& p) const;
  std::optional<std::size_t> relation_symbol(std::size_t r, const Rational& v) const;
};

struct ClassicalStructure {
  std::vector<std::string> points;
  std::vector<std::set<Tuple>> facts;  // per symbol
  bool holds(std::size_t symbol, const Tuple& t) const { return facts[symbol].count(t) > 0; }
};

enum class TemplateShape { Metric, Lipschitz, Functional };  // shapes (a), (b), (c)
std::string to_string(TemplateShape s);

struct ForbiddenTemplate {
  TemplateShape shape;
  ClassicalStructure structure;
  std::string description;
};

struct ClassicalReduction {
  ClassicalSignature signature;
  std::vector<ForbiddenTemplate> catalog;
  ClassicalStructure m_star;
};

ClassicalSignature classical_signature(const FinStructure& m);
ClassicalStructure to_classical(const FinStructure& a, const ClassicalSignature& sig);

// Throws BudgetExceeded if the catalog would exceed `budget` templates.
ClassicalReduction classical_reduction(const FinStructure& m, std::size_t budget = 200'000);

struct Homomorphism {
  std::size_t template_index;
  std::vector<std::size_t> map;  // template point -> structure point
};

// Brute-force homomorphism search from each template; the first found
// homomorphism is returned when `x` is not catalog-free.
std::optional<Homomorphism> find_forbidden_homomorphism(const ClassicalStructure& x,
                                                        const std::vector<ForbiddenTemplate>& catalog);
inline bool is_catalog_free(const ClassicalStructure& x, const std::vector<ForbiddenTemplate>& catalog) {
  return !find_forbidden_homomorphism(x, catalog);
}

// The continuous structure on the chain class of M inside x (matched by
// point id): chain-sum metric, partial relations from R_v, conservative
// extension. Points of M come first, in M's order.
FinStructure quotient_to_continuous(const ClassicalStructure& x, const FinStructure& m, std::size_t budget = 200'000);

struct CoherentWitness {
  FinStructure n;  // M's points first
  std::vector<PartialIso> isos;
  std::vector<std::vector<std::size_t>> phi;  // automorphism of n per iso
};

struct EppaSearchResult {
  enum class Status { Found, Exhausted, BudgetExceeded } status;
  std::optional<CoherentWitness> witness;
  std::size_t candidates = 0;
};

// Coherent assignment over a fixed candidate extension n of m; nullopt if none.
std::optional<CoherentWitness> coherent_assignment(const FinStructure& m, const FinStructure& n);

// Searches (delta, v)-valued extensions of m by increasing size.
EppaSearchResult eppa_bruteforce(const FinStructure& m, const ValuePair& vp, std::size_t max_size,
                                 std::size_t budget = 100'000);

struct WitnessReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

WitnessReport verify_coherent_witness(const FinStructure& m, const CoherentWitness& w);

// Four points y, s, t, z on a line with gaps a, delta, b; R depends on
// argument i only. The swap of s and t is a partial isomorphism.
struct EppaFixture {
  FinStructure m;
  PartialIso swap;
};
EppaFixture eppa_superadditivity_fixture(const SignaturePtr& sig, std::size_t r, std::size_t i, const Rational& a,
                                         const Rational& b, const Rational& delta);

// For an extension n of the fixture and an automorphism f of n extending the
// swap: min{1, u(a)+u(b)} <= u(d(f(y), z)) <= u(a+b).
Obstruction eppa_obstruction(const EppaFixture& fx, std::size_t r, std::size_t i, const FinStructure& n,
                             const std::vector<std::size_t>& f);

}  // namespace cstruct
