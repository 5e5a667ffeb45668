#include "cstruct/group_actions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cstruct/amalgam.hpp"
#include "cstruct/error.hpp"
#include "cstruct/induced.hpp"
#include "cstruct/moduli.hpp"

namespace cstruct {

std::vector<std::string> group_violations(const std::vector<std::vector<std::size_t>>& mul) {
  const std::size_t n = mul.size();
  std::vector<std::string> out;
  if (n == 0) return {"empty: a group needs an identity"};
  for (std::size_t a = 0; a < n; ++a) {
    if (mul[a].size() != n) return {"shape: row " + std::to_string(a) + " has the wrong length"};
    for (std::size_t b = 0; b < n; ++b) {
      if (mul[a][b] >= n) return {"closure: product out of range"};
    }
  }
  for (std::size_t a = 0; a < n && out.empty(); ++a) {
    for (std::size_t b = 0; b < n && out.empty(); ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]]) {
          out.push_back("associativity: fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                        std::to_string(c) + ")");
          break;
        }
      }
    }
  }
  std::optional<std::size_t> e;
  for (std::size_t a = 0; a < n && !e; ++a) {
    bool ok = true;
    for (std::size_t b = 0; b < n && ok; ++b) ok = mul[a][b] == b && mul[b][a] == b;
    if (ok) e = a;
  }
  if (!e) {
    out.push_back("identity: no two-sided identity");
    return out;
  }
  for (std::size_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < n && !found; ++b) found = mul[a][b] == *e && mul[b][a] == *e;
    if (!found) out.push_back("inverse: element " + std::to_string(a) + " has no inverse");
  }
  return out;
}

FinGroup::FinGroup(std::vector<std::string> elements, std::vector<std::vector<std::size_t>> mul)
    : elements_(std::move(elements)), mul_(std::move(mul)) {
  if (elements_.size() != mul_.size()) throw PreconditionError("group: element count differs from table size");
  if (std::set<std::string>(elements_.begin(), elements_.end()).size() != elements_.size()) {
    throw PreconditionError("group: duplicate element names");
  }
  auto problems = group_violations(mul_);
  if (!problems.empty()) throw PreconditionError("group: " + problems.front());
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a) {
    if (mul_[a][a] == a) identity_ = a;
  }
  inverse_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (mul_[a][b] == identity_) inverse_[a] = b;
    }
  }
}

FinGroup FinGroup::trivial() { return FinGroup({"e"}, {{0}}); }

FinGroup FinGroup::cyclic(std::size_t n) {
  if (n == 0) throw PreconditionError("cyclic group of order 0");
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back(a == 0 ? "e" : n == 2 ? "g" : "g" + std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  }
  return FinGroup(std::move(names), std::move(mul));
}

FinGroup FinGroup::product(const FinGroup& a, const FinGroup& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mul(na * nb, std::vector<std::size_t>(na * nb));
  for (std::size_t g = 0; g < na; ++g) {
    for (std::size_t h = 0; h < nb; ++h) names.push_back("(" + a.name(g) + "," + b.name(h) + ")");
  }
  for (std::size_t x = 0; x < na * nb; ++x) {
    for (std::size_t y = 0; y < na * nb; ++y) mul[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  }
  return FinGroup(std::move(names), std::move(mul));
}

std::optional<std::size_t> FinGroup::index_of(const std::string& name) const {
  auto it = std::find(elements_.begin(), elements_.end(), name);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

bool is_group_embedding(const FinGroup& a, const FinGroup& b, const std::vector<std::size_t>& e) {
  if (e.size() != a.size()) return false;
  if (std::set<std::size_t>(e.begin(), e.end()).size() != e.size()) return false;
  for (std::size_t g : e) {
    if (g >= b.size()) return false;
  }
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (e[a.mul(x, y)] != b.mul(e[x], e[y])) return false;
    }
  }
  return true;
}

ActionReport validate_action(const Action& a) {
  ActionReport rep;
  const FinGroup& g = a.group;
  const std::size_t n = a.structure.size();
  if (a.act.size() != g.size()) {
    rep.violations.push_back("shape: one row per group element required");
    return rep;
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (a.act[k].size() != n || std::any_of(a.act[k].begin(), a.act[k].end(), [&](std::size_t x) { return x >= n; })) {
      rep.violations.push_back("shape: row for " + g.name(k) + " is not a point map");
      return rep;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (a.act[g.identity()][x] != x) rep.violations.push_back("identity: moves " + a.structure.id(x));
  }
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (std::size_t q = 0; q < g.size(); ++q) {
      for (std::size_t x = 0; x < n; ++x) {
        if (a.act[g.mul(p, q)][x] != a.act[p][a.act[q][x]]) {
          rep.violations.push_back("composition: (" + g.name(p) + g.name(q) + ")." + a.structure.id(x) + " differs from " +
                                   g.name(p) + ".(" + g.name(q) + "." + a.structure.id(x) + ")");
          break;
        }
      }
    }
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!is_embedding(a.structure, a.structure, Embedding{a.act[k]})) {
      rep.violations.push_back("automorphism: " + g.name(k) + " does not act by an automorphism");
    }
  }
  return rep;
}

Action trivial_action(const FinStructure& s) {
  std::vector<std::size_t> id(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) id[x] = x;
  return Action{FinGroup::trivial(), s, {id}};
}

ActionReport check_action_embedding(const Action& from, const Action& to, const ActionEmbedding& e) {
  ActionReport rep;
  if (!is_group_embedding(from.group, to.group, e.group_map)) {
    rep.violations.push_back("group: not an injective homomorphism");
  }
  if (!is_embedding(from.structure, to.structure, e.point_map)) {
    rep.violations.push_back("structure: point map is not an embedding");
  }
  if (!rep.ok()) return rep;
  for (std::size_t g = 0; g < from.group.size(); ++g) {
    for (std::size_t x = 0; x < from.structure.size(); ++x) {
      if (to.apply(e.group_map[g], e.point_map.map[x]) != e.point_map.map[from.apply(g, x)]) {
        rep.violations.push_back("equivariance: fails for " + from.group.name(g) + " at " + from.structure.id(x));
      }
    }
  }
  return rep;
}

namespace {

// Shared view of the extension inputs.
struct CosetData {
  const Action& gm;  // Gamma on M
  const Action& ln;  // Lambda on N
  std::vector<std::optional<std::size_t>> lambda_of;  // Gamma index -> Lambda index
  std::vector<std::optional<std::size_t>> m_of;       // N index -> M index
  const Embedding& f;

  const FinGroup& gamma() const { return gm.group; }
  const FinStructure& n() const { return ln.structure; }
  bool in_m(std::size_t y) const { return m_of[y].has_value(); }

  // h . y, defined when h is in Lambda or y is in M.
  std::optional<std::size_t> act(std::size_t h, std::size_t y) const {
    if (lambda_of[h]) return ln.apply(*lambda_of[h], y);
    if (m_of[y]) return f.map[gm.apply(h, *m_of[y])];
    return std::nullopt;
  }

  bool first_case(std::size_t y1, std::size_t y2, std::size_t h) const {
    return (in_m(y1) && in_m(y2)) || lambda_of[h].has_value();
  }

  Rational partial(std::size_t y1, std::size_t g1, std::size_t y2, std::size_t g2) const {
    const FinGroup& G = gamma();
    std::size_t h = G.mul(G.inverse(g2), g1);
    if (first_case(y1, y2, h)) return n().dist(*act(h, y1), y2);
    if (gm.structure.size() == 0) {
      throw PreconditionError("extend_action: M is empty, so (" + n().id(y1) + "," + G.name(g1) + ") and (" +
                              n().id(y2) + "," + G.name(g2) + ") cannot be bridged");
    }
    std::optional<Rational> best;
    for (std::size_t x = 0; x < gm.structure.size(); ++x) {
      Rational s = n().dist(y1, f.map[gm.apply(G.inverse(g1), x)]) + n().dist(y2, f.map[gm.apply(G.inverse(g2), x)]);
      if (!best || s < *best) best = s;
    }
    return *best;
  }
};

CosetData prepare(const Action& gamma_on_m, const Action& lambda_on_n, const std::vector<std::size_t>& e,
                  const Embedding& f) {
  if (!classify(gamma_on_m.structure.signature()).semiproper) {
    throw PreconditionError("extend_action needs a semiproper signature");
  }
  auto check = [](const Action& a, const char* what) {
    auto rep = validate_action(a);
    if (!rep.ok()) throw PreconditionError(std::string("extend_action: ") + what + ": " + rep.violations.front());
  };
  check(gamma_on_m, "action on M");
  check(lambda_on_n, "action on N");
  if (!is_group_embedding(lambda_on_n.group, gamma_on_m.group, e)) {
    throw PreconditionError("extend_action: Lambda is not a subgroup of Gamma via the given map");
  }
  if (!is_embedding(gamma_on_m.structure, lambda_on_n.structure, f)) {
    throw PreconditionError("extend_action: M is not a substructure of N via the given map");
  }
  CosetData d{gamma_on_m, lambda_on_n, std::vector<std::optional<std::size_t>>(gamma_on_m.group.size()),
              std::vector<std::optional<std::size_t>>(lambda_on_n.structure.size()), f};
  for (std::size_t l = 0; l < e.size(); ++l) d.lambda_of[e[l]] = l;
  for (std::size_t x = 0; x < f.map.size(); ++x) d.m_of[f.map[x]] = x;
  for (std::size_t l = 0; l < e.size(); ++l) {
    for (std::size_t x = 0; x < f.map.size(); ++x) {
      if (lambda_on_n.apply(l, f.map[x]) != f.map[gamma_on_m.apply(e[l], x)]) {
        throw PreconditionError("extend_action: actions disagree at " + lambda_on_n.group.name(l) + " on " +
                                gamma_on_m.structure.id(x));
      }
    }
  }
  return d;
}

}  // namespace

std::vector<Rational> coset_pseudometric(const Action& gamma_on_m, const Action& lambda_on_n,
                                         const std::vector<std::size_t>& lambda_in_gamma, const Embedding& m_in_n) {
  CosetData d = prepare(gamma_on_m, lambda_on_n, lambda_in_gamma, m_in_n);
  const std::size_t ng = d.gamma().size(), total = d.n().size() * ng;
  std::vector<Rational> out(total * total);
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) out[a * total + b] = d.partial(a / ng, a % ng, b / ng, b % ng);
  }
  return out;
}

ActionExtension extend_action(const Action& gamma_on_m, const Action& lambda_on_n,
                              const std::vector<std::size_t>& lambda_in_gamma, const Embedding& m_in_n) {
  CosetData d = prepare(gamma_on_m, lambda_on_n, lambda_in_gamma, m_in_n);
  const FinGroup& G = d.gamma();
  const FinStructure& n = d.n();
  const std::size_t ng = G.size(), total = n.size() * ng;
  auto same = [&](std::size_t y1, std::size_t g1, std::size_t y2, std::size_t g2) {
    std::size_t h = G.mul(G.inverse(g2), g1);
    return d.first_case(y1, y2, h) && *d.act(h, y1) == y2;
  };

  // Classes, found through the explicit criterion.
  std::vector<std::size_t> cls(total, total);
  std::vector<std::pair<std::size_t, std::size_t>> reps;
  for (std::size_t a = 0; a < total; ++a) {
    if (cls[a] != total) continue;
    for (std::size_t b = a; b < total; ++b) {
      if (cls[b] == total && same(a / ng, a % ng, b / ng, b % ng)) cls[b] = reps.size();
    }
    reps.emplace_back(a / ng, a % ng);
  }
  // Order: classes through N first, then the rest by least representative.
  std::vector<std::size_t> order;
  std::vector<bool> placed(reps.size());
  for (std::size_t y = 0; y < n.size(); ++y) {
    std::size_t c = cls[y * ng + G.identity()];
    if (!placed[c]) {
      placed[c] = true;
      order.push_back(c);
    }
  }
  for (std::size_t c = 0; c < reps.size(); ++c) {
    if (!placed[c]) order.push_back(c);
  }
  std::vector<std::size_t> rank(reps.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  for (auto& c : cls) c = rank[c];

  const std::size_t nq = order.size();
  std::vector<std::string> ids;
  std::set<std::string> used;
  std::vector<std::pair<std::size_t, std::size_t>> q_reps;
  for (std::size_t k = 0; k < nq; ++k) {
    auto [y, g] = reps[order[k]];
    q_reps.emplace_back(y, g);
    std::string id = k < n.size() ? n.id(k) : n.id(y) + "@" + G.name(g);
    while (used.count(id)) id += "'";
    used.insert(id);
    ids.push_back(id);
  }
  std::vector<Rational> dist(nq * nq);
  for (std::size_t a = 0; a < nq; ++a) {
    for (std::size_t b = 0; b < nq; ++b) {
      dist[a * nq + b] = d.partial(q_reps[a].first, q_reps[a].second, q_reps[b].first, q_reps[b].second);
    }
  }
  PartialStructure part(n.signature_ptr(), std::move(ids), std::move(dist));
  const Signature& sig = n.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t idx = 0; idx < tuple_count(n.size(), arity); ++idx) {
        Tuple z = decode_tuple(idx, n.size(), arity), w(arity);
        for (std::size_t i = 0; i < arity; ++i) w[i] = cls[z[i] * ng + g];
        auto& slot = part.rel_values(r)[encode_tuple(w, nq)];
        const Rational& v = n.rel_values(r)[idx];
        if (slot && *slot != v) throw std::logic_error("extend_action: relation not well defined on classes");
        slot = v;
      }
    }
  }
  FinStructure q = conservative_extension(part);

  ActionExtension out{Action{G, q, std::vector<std::vector<std::size_t>>(ng, std::vector<std::size_t>(nq))}, {},
                      std::move(q_reps), cls};
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t k = 0; k < nq; ++k) out.action.act[g][k] = cls[out.reps[k].first * ng + G.mul(g, out.reps[k].second)];
  }
  for (std::size_t y = 0; y < n.size(); ++y) out.phi.map.push_back(cls[y * ng + G.identity()]);
  if (!validate_action(out.action).ok()) throw std::logic_error("extend_action: result is not an action");
  return out;
}

ActionJointEmbedding joint_embed_actions(const Action& a, const Action& b, const std::vector<Rational>& delta) {
  for (const Action* x : {&a, &b}) {
    auto rep = validate_action(*x);
    if (!rep.ok()) throw PreconditionError("joint_embed_actions: " + rep.violations.front());
  }
  JointEmbedding je = joint_embed(a.structure, b.structure, delta);
  FinGroup g = FinGroup::product(a.group, b.group);
  const std::size_t nb = b.group.size(), np = je.structure.size();
  Action act{g, je.structure, std::vector<std::vector<std::size_t>>(g.size(), std::vector<std::size_t>(np))};
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t x = 0; x < a.structure.size(); ++x) act.act[k][je.i.map[x]] = je.i.map[a.apply(k / nb, x)];
    for (std::size_t y = 0; y < b.structure.size(); ++y) act.act[k][je.j.map[y]] = je.j.map[b.apply(k % nb, y)];
  }
  ActionEmbedding left{{}, je.i}, right{{}, je.j};
  for (std::size_t x = 0; x < a.group.size(); ++x) left.group_map.push_back(x * nb + b.group.identity());
  for (std::size_t y = 0; y < nb; ++y) right.group_map.push_back(a.group.identity() * nb + y);
  ActionJointEmbedding out{std::move(act), std::move(left), std::move(right), je.delta};
  if (!validate_action(out.action).ok() || !is_action_embedding(a, out.action, out.left) ||
      !is_action_embedding(b, out.action, out.right)) {
    throw std::logic_error("joint_embed_actions: construction failed its own check");
  }
  return out;
}

ActionReport verify_action_amalgam(const Action& mu, const Action& tau, const Action& pi, const ActionEmbedding& ef,
                                   const ActionEmbedding& pq, const Action& kappa, const ActionEmbedding& gh,
                                   const ActionEmbedding& rs) {
  ActionReport rep;
  auto sub = [&](const Action& from, const Action& to, const ActionEmbedding& e, const char* name) {
    for (const auto& v : check_action_embedding(from, to, e).violations) rep.violations.push_back(std::string(name) + " " + v);
  };
  for (const Action* a : {&mu, &tau, &pi, &kappa}) {
    for (const auto& v : validate_action(*a).violations) rep.violations.push_back("action " + v);
  }
  sub(mu, tau, ef, "(e,f)");
  sub(mu, pi, pq, "(p,q)");
  sub(tau, kappa, gh, "(g,h)");
  sub(pi, kappa, rs, "(r,s)");
  if (!rep.ok()) return rep;
  for (std::size_t l = 0; l < mu.group.size(); ++l) {
    if (gh.group_map[ef.group_map[l]] != rs.group_map[pq.group_map[l]]) {
      rep.violations.push_back("group square: g.e and r.p differ at " + mu.group.name(l));
    }
  }
  for (std::size_t x = 0; x < mu.structure.size(); ++x) {
    if (gh.point_map.map[ef.point_map.map[x]] != rs.point_map.map[pq.point_map.map[x]]) {
      rep.violations.push_back("structure square: h.f and s.q differ at " + mu.structure.id(x));
    }
  }
  return rep;
}

}  // namespace cstruct
