#include "cstruct/signature.hpp"

#include <set>

#include "cstruct/error.hpp"

namespace cstruct {

Signature::Signature(std::vector<RelationSymbol> relations) : relations_(std::move(relations)) {
  std::set<std::string> names;
  for (const RelationSymbol& rel : relations_) {
    if (rel.name.empty()) throw PreconditionError("relation with empty name");
    if (!names.insert(rel.name).second) throw PreconditionError("duplicate relation name '" + rel.name + "'");
    if (rel.arity == 0) throw PreconditionError("relation '" + rel.name + "' has arity 0");
    if (rel.moduli.size() != rel.arity) {
      throw PreconditionError("relation '" + rel.name + "' needs one modulus per argument");
    }
    for (std::size_t i = 0; i < rel.arity; ++i) {
      auto defects = rel.moduli[i].defects();
      if (!defects.empty()) {
        throw PreconditionError("relation '" + rel.name + "' argument " + std::to_string(i) + ": " + defects.front());
      }
    }
  }
}

std::optional<std::size_t> Signature::find(const std::string& name) const {
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    if (relations_[r].name == name) return r;
  }
  return std::nullopt;
}

}  // namespace cstruct
