#include "cstruct/amalgam.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "cstruct/error.hpp"
#include "cstruct/induced.hpp"
#include "cstruct/moduli.hpp"

namespace cstruct {

std::string to_string(Origin o) {
  switch (o) {
    case Origin::M: return "M";
    case Origin::P: return "P";
    case Origin::Q: return "Q";
  }
  return "?";
}

namespace {

void require_semiproper(const Signature& sig, const char* what) {
  if (!classify(sig).semiproper) throw PreconditionError(std::string(what) + " needs a semiproper signature");
}

void require_same_signature(const FinStructure& a, const FinStructure& b) {
  if (a.signature_ptr() != b.signature_ptr() && !(a.signature() == b.signature())) {
    throw PreconditionError("structures over different signatures");
  }
}

// Copies relation values of `src` into `dst` along the point map.
void copy_relations(const FinStructure& src, const std::vector<std::size_t>& map, PartialStructure& dst) {
  for (std::size_t r = 0; r < src.signature().size(); ++r) {
    std::size_t arity = src.signature()[r].arity;
    for (std::size_t idx = 0; idx < src.rel_values(r).size(); ++idx) {
      Tuple t = decode_tuple(idx, src.size(), arity);
      for (auto& x : t) x = map[x];
      auto& slot = dst.rel_values(r)[encode_tuple(t, dst.size())];
      if (slot && *slot != src.rel_values(r)[idx]) throw std::logic_error("amalgam: conflicting relation values");
      slot = src.rel_values(r)[idx];
    }
  }
}

void check_result(const FinStructure& s, const char* what) {
  auto v = validate(s, true);
  if (!v.empty()) throw std::logic_error(std::string(what) + " produced an invalid structure: " + describe(s, v[0]));
}

}  // namespace

Rational joint_embed_distance(const FinStructure& m, const FinStructure& n, const std::vector<Rational>& delta) {
  const Signature& sig = m.signature();
  Rational bound = std::max(m.diameter(), n.diameter());
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t i = 0; i < sig[r].arity; ++i) {
      Threshold th = threshold_set(sig.modulus(r, i));
      if (!th.bounded()) throw PreconditionError("joint embedding needs bounded threshold intervals");
      bound = std::max(bound, th.sup.value());
    }
  }
  auto saturates = [&](const Rational& d) {
    for (std::size_t r = 0; r < sig.size(); ++r) {
      for (std::size_t i = 0; i < sig[r].arity; ++i) {
        if (sig.modulus(r, i).eval(d) < ExtRational(1)) return false;
      }
    }
    return true;
  };
  if (!delta.empty()) {
    for (const Rational& d : delta) {
      if (d >= bound && d > 0 && saturates(d)) return d;
    }
    throw PreconditionError("no distance in the value set is large enough for a joint embedding");
  }
  if (bound == 0) bound = 1;
  // An attained threshold leaves u(bound) < 1; any larger distance works.
  if (!saturates(bound)) bound *= 2;
  return bound;
}

JointEmbedding joint_embed(const FinStructure& m, const FinStructure& n, const std::vector<Rational>& delta) {
  require_same_signature(m, n);
  require_semiproper(m.signature(), "joint embedding");
  Rational d = joint_embed_distance(m, n, delta);
  std::vector<std::string> ids;
  for (const auto& id : m.points()) ids.push_back("M:" + id);
  for (const auto& id : n.points()) ids.push_back("N:" + id);
  const std::size_t a = m.size(), total = m.size() + n.size();
  std::vector<Rational> dist(total * total);
  Embedding i, j;
  for (std::size_t x = 0; x < a; ++x) i.map.push_back(x);
  for (std::size_t y = 0; y < n.size(); ++y) j.map.push_back(a + y);
  for (std::size_t x = 0; x < total; ++x) {
    for (std::size_t y = 0; y < total; ++y) {
      if (x < a && y < a) {
        dist[x * total + y] = m.dist(x, y);
      } else if (x >= a && y >= a) {
        dist[x * total + y] = n.dist(x - a, y - a);
      } else {
        dist[x * total + y] = d;
      }
    }
  }
  PartialStructure x(m.signature_ptr(), std::move(ids), std::move(dist));
  copy_relations(m, i.map, x);
  copy_relations(n, j.map, x);
  FinStructure out = conservative_extension(x);
  check_result(out, "joint embedding");
  return {std::move(out), std::move(i), std::move(j), d};
}

AmalgamResult strong_amalgam(const FinStructure& m, const FinStructure& p, const FinStructure& q,
                             const Embedding& phi, const Embedding& psi, const std::vector<Rational>& delta) {
  require_same_signature(m, p);
  require_same_signature(m, q);
  require_semiproper(m.signature(), "strong amalgamation");
  if (!is_embedding(m, p, phi)) throw PreconditionError("phi is not an embedding of M into P");
  if (!is_embedding(m, q, psi)) throw PreconditionError("psi is not an embedding of M into Q");

  if (m.size() == 0) {
    JointEmbedding je = joint_embed(p, q, delta);
    AmalgamResult res{std::move(je.structure), std::move(je.i), std::move(je.j), true, true, {}};
    for (const auto& id : p.points()) res.tags.emplace_back(Origin::P, id);
    for (const auto& id : q.points()) res.tags.emplace_back(Origin::Q, id);
    return res;
  }

  // Each amalgam point remembers its P index and/or Q index.
  std::vector<std::optional<std::size_t>> in_p, in_q;
  std::vector<std::pair<Origin, std::string>> tags;
  Embedding iota{std::vector<std::size_t>(p.size())}, tau{std::vector<std::size_t>(q.size())};
  for (std::size_t z = 0; z < m.size(); ++z) {
    in_p.push_back(phi.map[z]);
    in_q.push_back(psi.map[z]);
    tags.emplace_back(Origin::M, m.id(z));
    iota.map[phi.map[z]] = z;
    tau.map[psi.map[z]] = z;
  }
  std::set<std::size_t> phi_img(phi.map.begin(), phi.map.end()), psi_img(psi.map.begin(), psi.map.end());
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (phi_img.count(x)) continue;
    iota.map[x] = in_p.size();
    in_p.push_back(x);
    in_q.push_back(std::nullopt);
    tags.emplace_back(Origin::P, p.id(x));
  }
  for (std::size_t y = 0; y < q.size(); ++y) {
    if (psi_img.count(y)) continue;
    tau.map[y] = in_p.size();
    in_p.push_back(std::nullopt);
    in_q.push_back(y);
    tags.emplace_back(Origin::Q, q.id(y));
  }

  const std::size_t n = in_p.size();
  std::vector<Rational> dist(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Rational& d = dist[a * n + b];
      if (in_p[a] && in_p[b]) {
        d = p.dist(*in_p[a], *in_p[b]);
      } else if (in_q[a] && in_q[b]) {
        d = q.dist(*in_q[a], *in_q[b]);
      } else {
        std::size_t xp = in_p[a] ? *in_p[a] : *in_p[b];
        std::size_t yq = in_p[a] ? *in_q[b] : *in_q[a];
        std::optional<Rational> best;
        for (std::size_t z = 0; z < m.size(); ++z) {
          Rational via = p.dist(xp, phi.map[z]) + q.dist(psi.map[z], yq);
          if (!best || via < *best) best = via;
        }
        d = *best;
        if (!delta.empty() && d > delta.back()) d = delta.back();
      }
    }
  }
  std::vector<std::string> ids;
  for (const auto& [o, id] : tags) ids.push_back(to_string(o) + ":" + id);
  PartialStructure x(m.signature_ptr(), std::move(ids), std::move(dist));
  copy_relations(p, iota.map, x);
  copy_relations(q, tau.map, x);
  FinStructure out = conservative_extension(x);
  check_result(out, "strong amalgamation");
  return {std::move(out), std::move(iota), std::move(tau), true, false, std::move(tags)};
}

namespace {

void require_argument(const Signature& sig, std::size_t r, std::size_t i) {
  if (r >= sig.size() || i >= sig[r].arity) throw PreconditionError("no such relation argument");
}

Rational finite_eval(const Modulus& u, const Rational& x, const char* what) {
  ExtRational v = u.eval(x);
  if (v.is_infinite()) throw PreconditionError(std::string(what) + ": modulus is infinite at " + format_rational(x));
  return v.value();
}

}  // namespace

AmalgamationProblem necessity_fixture_superadditivity(const SignaturePtr& sig, std::size_t r, std::size_t i,
                                                      const Rational& r1, const Rational& r2) {
  require_argument(*sig, r, i);
  const Modulus& u = sig->modulus(r, i);
  if (r1 <= 0 || r2 <= 0) throw PreconditionError("fixture distances must be positive");
  if (!(u.eval(r1 + r2) < ExtRational(1))) throw PreconditionError("r1 + r2 must lie in the threshold interval");
  Rational u1 = finite_eval(u, r1, "fixture"), u2 = finite_eval(u, r2, "fixture");
  Rational far = std::min(Rational(1), Rational(u1 + u2));
  const std::size_t arity = (*sig)[r].arity;

  StructureBuilder mb(sig, {"x0"});
  mb.rel(r, Tuple(arity, 0), u1);
  StructureBuilder pb(sig, {"x0", "x1"});
  pb.dist(0, 1, r1);
  StructureBuilder qb(sig, {"x0", "x2"});
  qb.dist(0, 1, r2);
  for (std::size_t idx = 0; idx < tuple_count(2, arity); ++idx) {
    Tuple t = decode_tuple(idx, 2, arity);
    bool at_base = t[i] == 0;
    pb.rel(r, t, at_base ? u1 : Rational(0));
    qb.rel(r, t, at_base ? u1 : far);
  }
  return {mb.build(), pb.build(), qb.build(), Embedding{{0}}, Embedding{{0}}};
}

AmalgamationProblem necessity_fixture_linearity(const SignaturePtr& sig, std::size_t r, std::size_t i,
                                                const Rational& r1, const Rational& r2, const Rational& far) {
  require_argument(*sig, r, i);
  const std::size_t arity = (*sig)[r].arity;
  if (arity < 2) throw PreconditionError("the linearity fixture needs arity at least 2");
  if (r1 <= 0 || r2 <= 0) throw PreconditionError("fixture distances must be positive");
  const std::size_t k = i == arity - 1 ? 0 : arity - 1;
  const Modulus& u = sig->modulus(r, i);
  if (!(u.eval(r1 + r2) < ExtRational(1))) throw PreconditionError("r1 + r2 must lie in the threshold interval");
  if (far <= r1 + r2) throw PreconditionError("the far distance must exceed r1 + r2");
  if (sig->modulus(r, k).eval(far) < ExtRational(1)) {
    throw PreconditionError("the far distance must bound the threshold interval of the other argument");
  }
  Rational v = finite_eval(u, r1 + r2, "fixture");
  StructureBuilder mb(sig, {"x0", "u0"});
  mb.dist(0, 1, r1 + r2);
  StructureBuilder pb(sig, {"x0", "u0", "x1"});
  pb.dist(0, 1, r1 + r2).dist(0, 2, far).dist(1, 2, far);
  for (std::size_t idx = 0; idx < tuple_count(3, arity); ++idx) {
    Tuple t = decode_tuple(idx, 3, arity);
    if (t[i] == 0 && t[k] == 2) pb.rel(r, t, v);
  }
  StructureBuilder qb(sig, {"x0", "u0", "x2"});
  qb.dist(0, 1, r1 + r2).dist(0, 2, r1).dist(1, 2, r2);
  return {mb.build(), pb.build(), qb.build(), Embedding{{0, 1}}, Embedding{{0, 1}}};
}

Obstruction amalgam_obstruction_superadditivity(const AmalgamationProblem& fx, std::size_t r, std::size_t i,
                                                const FinStructure& n, const Embedding& iota, const Embedding& tau) {
  const Modulus& u = fx.m.signature().modulus(r, i);
  Rational r1 = fx.p.dist(0, 1), r2 = fx.q.dist(0, 1);
  Obstruction o;
  o.lower = min(ExtRational(1), u.eval(r1) + u.eval(r2));
  std::size_t x1 = iota.map[1], x2 = tau.map[1];
  o.middle = x1 == x2 ? ExtRational(0) : u.eval(n.dist(x1, x2));
  o.upper = u.eval(r1 + r2);
  o.holds = o.lower <= o.middle && o.middle <= o.upper;
  return o;
}

Obstruction amalgam_obstruction_linearity(const AmalgamationProblem& fx, std::size_t r, std::size_t i,
                                          const FinStructure& n, const Embedding& iota, const Embedding& tau) {
  const Modulus& u = fx.m.signature().modulus(r, i);
  Rational r1 = fx.q.dist(0, 2), r2 = fx.q.dist(1, 2);
  Obstruction o;
  o.lower = u.eval(r1 + r2);
  std::size_t x0 = iota.map[0], u0 = iota.map[1], x2 = tau.map[2];
  o.middle = u.eval(n.dist(x0, x2)) + u.eval(n.dist(u0, x2));
  o.upper = u.eval(r1) + u.eval(r2);
  o.holds = o.lower <= o.middle && o.middle <= o.upper;
  return o;
}

}  // namespace cstruct
