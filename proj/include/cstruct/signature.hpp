#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cstruct/modulus.hpp"

namespace cstruct {

struct RelationSymbol {
  std::string name;
  std::size_t arity = 1;
  std::vector<Modulus> moduli;  // one per argument

  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

// Finite relational signature. Names are unique, every modulus is a genuine
// modulus of continuity (no defects).
class Signature {
 public:
  explicit Signature(std::vector<RelationSymbol> relations);

  std::size_t size() const { return relations_.size(); }
  const RelationSymbol& operator[](std::size_t r) const { return relations_[r]; }
  const std::vector<RelationSymbol>& relations() const { return relations_; }
  std::optional<std::size_t> find(const std::string& name) const;
  const Modulus& modulus(std::size_t r, std::size_t i) const { return relations_[r].moduli[i]; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<RelationSymbol> relations_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

inline SignaturePtr make_signature(std::vector<RelationSymbol> relations) {
  return std::make_shared<const Signature>(std::move(relations));
}

}  // namespace cstruct
