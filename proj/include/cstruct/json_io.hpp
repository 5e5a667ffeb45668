#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cstruct/amalgam.hpp"
#include "cstruct/eppa.hpp"
#include "cstruct/fraisse.hpp"
#include "cstruct/group_actions.hpp"
#include "cstruct/induced.hpp"
#include "cstruct/katetov.hpp"
#include "cstruct/moduli.hpp"

namespace cstruct {

// Keys are kept sorted, so dump() is canonical.
using Json = nlohmann::json;

// Two-space indent and a trailing newline.
std::string dump(const Json& j);
Json parse_json(const std::string& text);
Json load_json(const std::filesystem::path& path);

Json to_json(const Rational& q);
Json to_json(const ExtRational& e);
Rational rational_from_json(const Json& j);
ExtRational ext_from_json(const Json& j);

// Moduli also accept the shorthands {"linear": k} and {"linear": k, "cap": c}.
Json to_json(const Modulus& u);
Modulus modulus_from_json(const Json& j);

Json to_json(const Signature& sig);
SignaturePtr signature_from_json(const Json& j);

// A string "signature" (or "structure") field is a path relative to `dir`.
Json to_json(const FinStructure& s);
FinStructure structure_from_json(const Json& j, const std::filesystem::path& dir = {});
// Without "default", tuples not listed are undefined.
Json to_json(const PartialStructure& s);
PartialStructure partial_from_json(const Json& j, const std::filesystem::path& dir = {});

SignaturePtr signature_ref(const Json& j, const std::filesystem::path& dir);

// {"map": {"x": "y"}} by point id.
Json embedding_to_json(const Embedding& e, const FinStructure& from, const FinStructure& to);
Embedding embedding_from_json(const Json& j, const FinStructure& from, const FinStructure& to);

Json to_json(const ValuePair& vp);
ValuePair value_pair_from_json(const Json& j);

Json to_json(const SignatureClassification& c, const Signature& sig);
Json violations_to_json(const FinStructure& s, const std::vector<StructureViolation>& vs);
Json to_json(const PseudoMetricMatrix& m);

Json to_json(const AmalgamResult& a, const FinStructure& p, const FinStructure& q);
Json to_json(const JointEmbedding& j, const FinStructure& m, const FinStructure& n);
Json to_json(const ExtensionDistance& d);
Json to_json(const ExtensionReport& r, const FinStructure& s);

Json to_json(const ClassicalReduction& red);
Json to_json(const CoherentWitness& w, const FinStructure& m);
Json to_json(const EppaSearchResult& r, const FinStructure& m);

Json to_json(const FinGroup& g);
FinGroup group_from_json(const Json& j);
Json to_json(const Action& a);
Action action_from_json(const Json& j, const std::filesystem::path& dir = {});
// {"group_map": {"g": "h"}, "map": {"x": "y"}}.
Json action_embedding_to_json(const ActionEmbedding& e, const Action& from, const Action& to);
std::vector<std::size_t> group_map_from_json(const Json& j, const FinGroup& from, const FinGroup& to);
ActionEmbedding action_embedding_from_json(const Json& j, const Action& from, const Action& to);
Json to_json(const ActionReport& r);

// Reorders `ext` so that base points come first (matched by id) and builds
// the one-point extension.
OnePointExt one_point_ext_from(const FinStructure& base, const FinStructure& ext);

}  // namespace cstruct
