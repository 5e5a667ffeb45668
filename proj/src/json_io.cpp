#include "cstruct/json_io.hpp"

#include <fstream>
#include <sstream>

#include "cstruct/error.hpp"

namespace cstruct {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

bool flag(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) bad(std::string("'") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::size_t point_index(const FinStructure& s, const Json& id) {
  auto k = s.index_of(text(id, "point id"));
  if (!k) bad("unknown point '" + id.get<std::string>() + "'");
  return *k;
}

Json tuple_ids(const std::vector<std::string>& ids, const Tuple& t) {
  Json out = Json::array();
  for (std::size_t x : t) out.push_back(ids[x]);
  return out;
}

Json iso_to_json(const PartialIso& p, const FinStructure& m) {
  Json o = Json::object();
  for (std::size_t k = 0; k < p.dom.size(); ++k) o[m.id(p.dom[k])] = m.id(p.image[k]);
  return o;
}

Json perm_to_json(const std::vector<std::size_t>& g, const FinStructure& n) {
  Json o = Json::object();
  for (std::size_t x = 0; x < g.size(); ++x) o[n.id(x)] = n.id(g[x]);
  return o;
}

std::filesystem::path resolve(const std::filesystem::path& dir, const std::string& ref) {
  std::filesystem::path p(ref);
  return p.is_absolute() || dir.empty() ? p : dir / p;
}

struct Frame {
  SignaturePtr sig;
  std::vector<std::string> points;
  std::vector<Rational> dist;
};

Frame read_frame(const Json& j, const std::filesystem::path& dir) {
  Frame f{signature_ref(field(j, "signature"), dir), {}, {}};
  const Json& pts = field(j, "points");
  if (!pts.is_array()) bad("'points' must be an array");
  for (const auto& p : pts) f.points.push_back(text(p, "point id"));
  const std::size_t n = f.points.size();
  const Json& d = field(j, "dist");
  if (!d.is_array() || d.size() != n) bad("'dist' must be an n x n array");
  for (const auto& row : d) {
    if (!row.is_array() || row.size() != n) bad("'dist' must be an n x n array");
    for (const auto& v : row) f.dist.push_back(rational_from_json(v));
  }
  return f;
}

// Calls put(r, tuple, value) for every listed entry and returns the defaults.
template <class Put>
std::vector<std::optional<Rational>> read_rels(const Json& j, const Signature& sig,
                                               const std::vector<std::string>& points, Put put) {
  std::vector<std::optional<Rational>> defaults(sig.size());
  if (!j.contains("rels")) return defaults;
  const Json& rels = j.at("rels");
  if (!rels.is_object()) bad("'rels' must be an object");
  for (const auto& [name, body] : rels.items()) {
    auto r = sig.find(name);
    if (!r) bad("unknown relation '" + name + "'");
    if (body.contains("default") && !body.at("default").is_null()) defaults[*r] = rational_from_json(body.at("default"));
    if (!body.contains("entries")) continue;
    for (const auto& e : body.at("entries")) {
      const Json& t = field(e, "tuple");
      if (!t.is_array() || t.size() != sig[*r].arity) bad("tuple of the wrong arity for '" + name + "'");
      Tuple tup;
      for (const auto& id : t) {
        auto it = std::find(points.begin(), points.end(), text(id, "point id"));
        if (it == points.end()) bad("unknown point '" + id.get<std::string>() + "'");
        tup.push_back(static_cast<std::size_t>(it - points.begin()));
      }
      put(*r, tup, rational_from_json(field(e, "value")));
    }
  }
  return defaults;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& t) {
  try {
    return Json::parse(t);
  } catch (const Json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Json to_json(const Rational& q) { return format_rational(q); }
Json to_json(const ExtRational& e) { return format_ext(e); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  bad("rational must be a \"p/q\" string or an integer");
}

ExtRational ext_from_json(const Json& j) {
  if (j.is_string()) return parse_ext(j.get<std::string>());
  return rational_from_json(j);
}

Json to_json(const Modulus& u) {
  Json pieces = Json::array();
  for (const Piece& p : u.pieces()) {
    Json o = {{"from", to_json(p.from)},     {"from_closed", p.from_closed}, {"to", to_json(p.to)},
              {"to_closed", p.to_closed},   {"slope", to_json(p.slope)},    {"offset", to_json(p.offset)}};
    if (p.infinite) o["infinite"] = true;
    pieces.push_back(std::move(o));
  }
  return {{"pieces", pieces}};
}

Modulus modulus_from_json(const Json& j) {
  try {
    if (j.is_object() && j.contains("linear")) {
      Rational k = rational_from_json(j.at("linear"));
      return j.contains("cap") ? Modulus::linear_capped(k, rational_from_json(j.at("cap"))) : Modulus::linear(k);
    }
    const Json& ps = field(j, "pieces");
    if (!ps.is_array()) bad("'pieces' must be an array");
    std::vector<Piece> pieces;
    for (const auto& o : ps) {
      Piece p;
      p.from = rational_from_json(field(o, "from"));
      p.from_closed = flag(o, "from_closed", false);
      p.to = ext_from_json(field(o, "to"));
      p.to_closed = flag(o, "to_closed", false);
      p.infinite = flag(o, "infinite", false);
      p.slope = o.contains("slope") ? rational_from_json(o.at("slope")) : Rational(0);
      p.offset = o.contains("offset") ? rational_from_json(o.at("offset")) : Rational(0);
      pieces.push_back(std::move(p));
    }
    std::optional<ExtRational> tail;
    if (j.contains("tail") && !j.at("tail").is_null()) tail = ext_from_json(j.at("tail"));
    return Modulus(std::move(pieces), tail);
  } catch (const PreconditionError& e) {
    bad(std::string("invalid modulus: ") + e.what());
  }
}

Json to_json(const Signature& sig) {
  Json rels = Json::array();
  for (const auto& r : sig.relations()) {
    Json moduli = Json::array();
    for (const auto& u : r.moduli) moduli.push_back(to_json(u));
    rels.push_back({{"name", r.name}, {"arity", r.arity}, {"moduli", moduli}});
  }
  return {{"relations", rels}};
}

SignaturePtr signature_from_json(const Json& j) {
  const Json& rels = field(j, "relations");
  if (!rels.is_array()) bad("'relations' must be an array");
  std::vector<RelationSymbol> out;
  for (const auto& r : rels) {
    RelationSymbol s{text(field(r, "name"), "relation name"), count(field(r, "arity"), "arity"), {}};
    const Json& ms = field(r, "moduli");
    if (!ms.is_array()) bad("'moduli' must be an array");
    for (const auto& m : ms) s.moduli.push_back(modulus_from_json(m));
    if (s.moduli.size() == 1 && s.arity > 1) s.moduli.resize(s.arity, s.moduli.front());
    if (s.arity == 0 || s.moduli.size() != s.arity) bad("relation '" + s.name + "' needs one modulus per argument");
    out.push_back(std::move(s));
  }
  try {
    return make_signature(std::move(out));
  } catch (const PreconditionError& e) {
    bad(std::string("invalid signature: ") + e.what());
  }
}

SignaturePtr signature_ref(const Json& j, const std::filesystem::path& dir) {
  if (j.is_string()) {
    auto path = resolve(dir, j.get<std::string>());
    return signature_from_json(load_json(path));
  }
  return signature_from_json(j);
}

Json to_json(const FinStructure& s) {
  const std::size_t n = s.size();
  Json dist = Json::array();
  for (std::size_t x = 0; x < n; ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < n; ++y) row.push_back(to_json(s.dist(x, y)));
    dist.push_back(std::move(row));
  }
  Json rels = Json::object();
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    Json entries = Json::array();
    for (std::size_t idx = 0; idx < s.rel_values(r).size(); ++idx) {
      const Rational& v = s.rel_values(r)[idx];
      if (v == 0) continue;
      entries.push_back({{"tuple", tuple_ids(s.points(), decode_tuple(idx, n, s.signature()[r].arity))},
                         {"value", to_json(v)}});
    }
    rels[s.signature()[r].name] = {{"default", to_json(Rational(0))}, {"entries", entries}};
  }
  return {{"signature", to_json(s.signature())}, {"points", s.points()}, {"dist", dist}, {"rels", rels}};
}

FinStructure structure_from_json(const Json& j, const std::filesystem::path& dir) {
  if (j.is_string()) {
    auto path = resolve(dir, j.get<std::string>());
    return structure_from_json(load_json(path), path.parent_path());
  }
  Frame f = read_frame(j, dir);
  const Signature& sig = *f.sig;
  const std::size_t n = f.points.size();
  std::vector<std::vector<std::optional<Rational>>> listed;
  for (std::size_t r = 0; r < sig.size(); ++r) listed.emplace_back(tuple_count(n, sig[r].arity));
  auto defaults = read_rels(j, sig, f.points, [&](std::size_t r, const Tuple& t, Rational v) {
    listed[r][encode_tuple(t, n)] = std::move(v);
  });
  std::vector<std::vector<Rational>> rels;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    std::vector<Rational> vals;
    for (const auto& v : listed[r]) vals.push_back(v ? *v : defaults[r].value_or(Rational(0)));
    rels.push_back(std::move(vals));
  }
  try {
    return FinStructure(f.sig, std::move(f.points), std::move(f.dist), std::move(rels));
  } catch (const PreconditionError& e) {
    bad(std::string("invalid structure: ") + e.what());
  }
}

Json to_json(const PartialStructure& s) {
  const std::size_t n = s.size();
  Json dist = Json::array();
  for (std::size_t x = 0; x < n; ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < n; ++y) row.push_back(to_json(s.dist(x, y)));
    dist.push_back(std::move(row));
  }
  Json rels = Json::object();
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    Json entries = Json::array();
    for (std::size_t idx = 0; idx < s.rel_values(r).size(); ++idx) {
      const auto& v = s.rel_values(r)[idx];
      if (!v) continue;
      entries.push_back({{"tuple", tuple_ids(s.points(), decode_tuple(idx, n, s.signature()[r].arity))},
                         {"value", to_json(*v)}});
    }
    rels[s.signature()[r].name] = {{"entries", entries}};
  }
  return {{"signature", to_json(s.signature())}, {"points", s.points()}, {"dist", dist}, {"rels", rels}};
}

PartialStructure partial_from_json(const Json& j, const std::filesystem::path& dir) {
  if (j.is_string()) {
    auto path = resolve(dir, j.get<std::string>());
    return partial_from_json(load_json(path), path.parent_path());
  }
  Frame f = read_frame(j, dir);
  try {
    PartialStructure p(f.sig, f.points, f.dist);
    auto defaults = read_rels(j, *f.sig, f.points, [&](std::size_t r, const Tuple& t, Rational v) { p.set(r, t, v); });
    for (std::size_t r = 0; r < f.sig->size(); ++r) {
      if (!defaults[r]) continue;
      for (auto& v : p.rel_values(r)) {
        if (!v) v = *defaults[r];
      }
    }
    return p;
  } catch (const PreconditionError& e) {
    bad(std::string("invalid partial structure: ") + e.what());
  }
}

Json embedding_to_json(const Embedding& e, const FinStructure& from, const FinStructure& to) {
  Json m = Json::object();
  for (std::size_t x = 0; x < e.map.size(); ++x) m[from.id(x)] = to.id(e.map[x]);
  return {{"map", m}};
}

Embedding embedding_from_json(const Json& j, const FinStructure& from, const FinStructure& to) {
  const Json& m = field(j, "map");
  if (!m.is_object()) bad("'map' must be an object");
  Embedding e{std::vector<std::size_t>(from.size())};
  std::vector<bool> seen(from.size());
  for (const auto& [x, y] : m.items()) {
    std::size_t a = point_index(from, Json(x));
    e.map[a] = point_index(to, y);
    seen[a] = true;
  }
  for (std::size_t x = 0; x < from.size(); ++x) {
    if (!seen[x]) bad("embedding does not map '" + from.id(x) + "'");
  }
  return e;
}

Json to_json(const ValuePair& vp) {
  Json d = Json::array(), v = Json::array();
  for (const auto& q : vp.delta) d.push_back(to_json(q));
  for (const auto& q : vp.v) v.push_back(to_json(q));
  return {{"delta", d}, {"v", v}};
}

ValuePair value_pair_from_json(const Json& j) {
  ValuePair vp;
  for (const auto& q : field(j, "delta")) vp.delta.push_back(rational_from_json(q));
  for (const auto& q : field(j, "v")) vp.v.push_back(rational_from_json(q));
  std::sort(vp.delta.begin(), vp.delta.end());
  std::sort(vp.v.begin(), vp.v.end());
  vp.delta.erase(std::unique(vp.delta.begin(), vp.delta.end()), vp.delta.end());
  vp.v.erase(std::unique(vp.v.begin(), vp.v.end()), vp.v.end());
  return vp;
}

Json to_json(const SignatureClassification& c, const Signature& sig) {
  Json args = Json::array();
  for (const auto& a : c.arguments) {
    Json o = {{"relation", sig[a.relation].name},
              {"argument", a.argument},
              {"threshold_sup", to_json(a.threshold.sup)},
              {"threshold_attained", a.threshold.attained},
              {"superadditive", a.superadditive}};
    o["lipschitz_constant"] = a.lipschitz_constant ? to_json(*a.lipschitz_constant) : Json(nullptr);
    args.push_back(std::move(o));
  }
  Json viol = Json::array();
  for (const auto& v : c.violations) {
    Json o = {{"kind", to_string(v.kind)}, {"relation", sig[v.relation].name}, {"argument", v.argument}};
    if (v.r1) o["r1"] = to_json(*v.r1);
    if (v.r2) o["r2"] = to_json(*v.r2);
    viol.push_back(std::move(o));
  }
  return {{"semiproper", c.semiproper},
          {"strongly_semiproper", c.strongly_semiproper},
          {"proper", c.proper},
          {"lipschitz", c.lipschitz},
          {"arguments", args},
          {"violations", viol}};
}

Json violations_to_json(const FinStructure& s, const std::vector<StructureViolation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    Json pts = Json::array();
    for (std::size_t x : v.points) pts.push_back(s.id(x));
    Json o = {{"kind", to_string(v.kind)},
              {"points", pts},
              {"lhs", to_json(v.lhs)},
              {"rhs", to_json(v.rhs)},
              {"message", describe(s, v)}};
    if (v.kind == StructureViolation::Kind::UniformContinuity || v.kind == StructureViolation::Kind::ValueRange) {
      o["relation"] = s.signature()[v.relation].name;
      o["argument"] = v.argument;
      o["tuple_a"] = tuple_ids(s.points(), v.tuple_a);
      if (!v.tuple_b.empty()) o["tuple_b"] = tuple_ids(s.points(), v.tuple_b);
    }
    out.push_back(std::move(o));
  }
  return out;
}

Json to_json(const PseudoMetricMatrix& m) {
  Json out = Json::array();
  for (std::size_t x = 0; x < m.size(); ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < m.size(); ++y) row.push_back(to_json(m(x, y)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const AmalgamResult& a, const FinStructure& p, const FinStructure& q) {
  Json tags = Json::array();
  for (const auto& [o, id] : a.tags) tags.push_back({{"origin", to_string(o)}, {"id", id}});
  return {{"amalgam", to_json(a.amalgam)},
          {"iota", embedding_to_json(a.iota, p, a.amalgam)},
          {"tau", embedding_to_json(a.tau, q, a.amalgam)},
          {"strong", a.strong},
          {"joint_fallback", a.joint_fallback},
          {"tags", tags}};
}

Json to_json(const JointEmbedding& j, const FinStructure& m, const FinStructure& n) {
  return {{"structure", to_json(j.structure)},
          {"i", embedding_to_json(j.i, m, j.structure)},
          {"j", embedding_to_json(j.j, n, j.structure)},
          {"delta", to_json(j.delta)}};
}

Json to_json(const ExtensionDistance& d) {
  auto kv = [](const KatetovValue& v) { return Json{{"value", to_json(v.value)}, {"flagged", v.flagged}}; };
  return {{"mu", kv(d.mu)}, {"rho", kv(d.rho)}, {"lambda", kv(d.lambda)}, {"value", to_json(d.value)}};
}

Json to_json(const ExtensionReport& r, const FinStructure& s) {
  Json unmet = Json::array();
  for (const auto& t : r.unmet) {
    Json base = Json::array();
    for (std::size_t x : t.base) base.push_back(s.id(x));
    unmet.push_back({{"base", base}, {"extension", to_json(t.ext)}});
  }
  return {{"total", r.total}, {"satisfied", r.satisfied}, {"all_satisfied", r.all_satisfied()}, {"unmet", unmet}};
}

Json to_json(const ClassicalReduction& red) {
  const ClassicalSignature& sig = red.signature;
  Json symbols = Json::array();
  for (const auto& s : sig.symbols) {
    symbols.push_back({{"name", s.name},
                       {"kind", s.kind == ClassicalSymbol::Kind::Distance ? "distance" : "relation"},
                       {"arity", s.arity},
                       {"param", to_json(s.param)}});
  }
  auto classical = [&](const ClassicalStructure& c) {
    Json facts = Json::object();
    for (std::size_t k = 0; k < c.facts.size(); ++k) {
      if (c.facts[k].empty()) continue;
      Json ts = Json::array();
      for (const Tuple& t : c.facts[k]) ts.push_back(tuple_ids(c.points, t));
      facts[sig.symbols[k].name] = ts;
    }
    return Json{{"points", c.points}, {"facts", facts}};
  };
  Json catalog = Json::array();
  for (const auto& t : red.catalog) {
    Json o = classical(t.structure);
    o["shape"] = to_string(t.shape);
    o["description"] = t.description;
    catalog.push_back(std::move(o));
  }
  Json p = Json::array(), v = Json::array();
  for (const auto& q : sig.p) p.push_back(to_json(q));
  for (const auto& q : sig.v) v.push_back(to_json(q));
  return {{"signature", {{"P", p}, {"V", v}, {"symbols", symbols}}}, {"catalog", catalog}, {"m_star", classical(red.m_star)}};
}

Json to_json(const CoherentWitness& w, const FinStructure& m) {
  Json phi = Json::array();
  for (std::size_t k = 0; k < w.isos.size(); ++k) {
    phi.push_back({{"partial_iso", iso_to_json(w.isos[k], m)}, {"automorphism", perm_to_json(w.phi[k], w.n)}});
  }
  return {{"n", to_json(w.n)}, {"phi", phi}};
}

Json to_json(const EppaSearchResult& r, const FinStructure& m) {
  const char* status = r.status == EppaSearchResult::Status::Found       ? "found"
                       : r.status == EppaSearchResult::Status::Exhausted ? "exhausted"
                                                                         : "budget_exceeded";
  return {{"status", status}, {"candidates", r.candidates},
          {"witness", r.witness ? to_json(*r.witness, m) : Json(nullptr)}};
}

Json to_json(const FinGroup& g) {
  Json mul = Json::array();
  for (std::size_t a = 0; a < g.size(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < g.size(); ++b) row.push_back(g.name(g.mul(a, b)));
    mul.push_back(std::move(row));
  }
  return {{"elements", g.elements()}, {"mul", mul}};
}

FinGroup group_from_json(const Json& j) {
  std::vector<std::string> names;
  for (const auto& e : field(j, "elements")) names.push_back(text(e, "group element"));
  const Json& mul = field(j, "mul");
  if (!mul.is_array() || mul.size() != names.size()) bad("'mul' must be a square table");
  std::vector<std::vector<std::size_t>> table;
  for (const auto& row : mul) {
    if (!row.is_array() || row.size() != names.size()) bad("'mul' must be a square table");
    std::vector<std::size_t> r;
    for (const auto& e : row) {
      if (e.is_string()) {
        auto it = std::find(names.begin(), names.end(), e.get<std::string>());
        if (it == names.end()) bad("unknown group element '" + e.get<std::string>() + "'");
        r.push_back(static_cast<std::size_t>(it - names.begin()));
      } else {
        r.push_back(count(e, "group element index"));
      }
    }
    table.push_back(std::move(r));
  }
  try {
    return FinGroup(std::move(names), std::move(table));
  } catch (const PreconditionError& e) {
    bad(std::string("invalid group: ") + e.what());
  }
}

Json to_json(const Action& a) {
  Json act = Json::object();
  for (std::size_t g = 0; g < a.group.size(); ++g) act[a.group.name(g)] = perm_to_json(a.act[g], a.structure);
  return {{"group", to_json(a.group)}, {"structure", to_json(a.structure)}, {"act", act}};
}

Action action_from_json(const Json& j, const std::filesystem::path& dir) {
  if (j.is_string()) {
    auto path = resolve(dir, j.get<std::string>());
    return action_from_json(load_json(path), path.parent_path());
  }
  FinGroup g = group_from_json(field(j, "group"));
  FinStructure s = structure_from_json(field(j, "structure"), dir);
  const std::size_t n = s.size();
  std::vector<std::vector<std::size_t>> act(g.size());
  const Json& a = j.contains("act") ? j.at("act") : Json::object();
  for (std::size_t k = 0; k < g.size(); ++k) {
    act[k].resize(n);
    for (std::size_t x = 0; x < n; ++x) act[k][x] = x;
    if (!a.contains(g.name(k))) {
      if (k != g.identity()) bad("no action given for '" + g.name(k) + "'");
      continue;
    }
    for (const auto& [x, y] : a.at(g.name(k)).items()) act[k][point_index(s, Json(x))] = point_index(s, y);
  }
  return Action{std::move(g), std::move(s), std::move(act)};
}

Json action_embedding_to_json(const ActionEmbedding& e, const Action& from, const Action& to) {
  Json gm = Json::object();
  for (std::size_t g = 0; g < e.group_map.size(); ++g) gm[from.group.name(g)] = to.group.name(e.group_map[g]);
  Json out = embedding_to_json(e.point_map, from.structure, to.structure);
  out["group_map"] = gm;
  return out;
}

std::vector<std::size_t> group_map_from_json(const Json& j, const FinGroup& from, const FinGroup& to) {
  const Json& gm = field(j, "group_map");
  if (!gm.is_object()) bad("'group_map' must be an object");
  std::vector<std::size_t> out(from.size());
  std::vector<bool> seen(from.size());
  for (const auto& [g, h] : gm.items()) {
    auto a = from.index_of(g);
    auto b = to.index_of(text(h, "group element"));
    if (!a || !b) bad("unknown group element in 'group_map'");
    out[*a] = *b;
    seen[*a] = true;
  }
  for (std::size_t g = 0; g < seen.size(); ++g) {
    if (!seen[g]) bad("'group_map' does not map '" + from.name(g) + "'");
  }
  return out;
}

ActionEmbedding action_embedding_from_json(const Json& j, const Action& from, const Action& to) {
  return {group_map_from_json(j, from.group, to.group), embedding_from_json(j, from.structure, to.structure)};
}

Json to_json(const ActionReport& r) { return {{"ok", r.ok()}, {"violations", r.violations}}; }

OnePointExt one_point_ext_from(const FinStructure& base, const FinStructure& ext) {
  if (ext.size() != base.size() + 1) throw PreconditionError("extension must add exactly one point");
  std::vector<std::size_t> order;
  for (const auto& id : base.points()) {
    auto k = ext.index_of(id);
    if (!k) throw PreconditionError("extension lacks base point '" + id + "'");
    order.push_back(*k);
  }
  for (std::size_t x = 0; x < ext.size(); ++x) {
    if (std::find(order.begin(), order.end(), x) == order.end()) order.push_back(x);
  }
  return OnePointExt(base, substructure(ext, order));
}

}  // namespace cstruct
