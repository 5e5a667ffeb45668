#include "cstruct/eppa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "cstruct/error.hpp"
#include "cstruct/induced.hpp"
#include "cstruct/moduli.hpp"

namespace cstruct {

std::string to_string(TemplateShape s) {
  switch (s) {
    case TemplateShape::Metric: return "metric";
    case TemplateShape::Lipschitz: return "lipschitz";
    case TemplateShape::Functional: return "functional";
  }
  return "?";
}

std::optional<std::size_t> ClassicalSignature::distance_symbol(const Rational& q) const {
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (symbols[k].kind == ClassicalSymbol::Kind::Distance && symbols[k].param == q) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> ClassicalSignature::relation_symbol(std::size_t r, const Rational& val) const {
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const auto& s = symbols[k];
    if (s.kind == ClassicalSymbol::Kind::Relation && s.relation == r && s.param == val) return k;
  }
  return std::nullopt;
}

ClassicalSignature classical_signature(const FinStructure& m) {
  std::set<Rational> ps, vs;
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (x != y) ps.insert(m.dist(x, y));
    }
  }
  for (const auto& tensor : m.rel_tensors()) vs.insert(tensor.begin(), tensor.end());
  ClassicalSignature sig{{ps.begin(), ps.end()}, {vs.begin(), vs.end()}, {}};
  for (const Rational& p : sig.p) {
    sig.symbols.push_back({ClassicalSymbol::Kind::Distance, 2, p, 0, "D[" + format_rational(p) + "]"});
  }
  const Signature& ls = m.signature();
  for (std::size_t r = 0; r < ls.size(); ++r) {
    for (const Rational& v : sig.v) {
      sig.symbols.push_back(
          {ClassicalSymbol::Kind::Relation, ls[r].arity, v, r, ls[r].name + "[" + format_rational(v) + "]"});
    }
  }
  return sig;
}

ClassicalStructure to_classical(const FinStructure& a, const ClassicalSignature& sig) {
  ClassicalStructure out{a.points(), std::vector<std::set<Tuple>>(sig.symbols.size())};
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (x == y) continue;
      if (auto k = sig.distance_symbol(a.dist(x, y))) out.facts[*k].insert({x, y});
    }
  }
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    const std::size_t arity = a.signature()[r].arity;
    for (std::size_t idx = 0; idx < a.rel_values(r).size(); ++idx) {
      if (auto k = sig.relation_symbol(r, a.rel_values(r)[idx])) out.facts[*k].insert(decode_tuple(idx, a.size(), arity));
    }
  }
  return out;
}

namespace {

ClassicalStructure blank(const ClassicalSignature& sig, std::size_t n, const std::string& prefix) {
  ClassicalStructure s;
  for (std::size_t k = 0; k < n; ++k) s.points.push_back(prefix + std::to_string(k));
  s.facts.resize(sig.symbols.size());
  return s;
}

void both_ways(ClassicalStructure& s, std::size_t symbol, std::size_t a, std::size_t b) {
  s.facts[symbol].insert({a, b});
  s.facts[symbol].insert({b, a});
}

std::string join(const std::vector<Rational>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "+" : "") + format_rational(xs[k]);
  return out;
}

}  // namespace

ClassicalReduction classical_reduction(const FinStructure& m, std::size_t budget) {
  const Signature& ls = m.signature();
  if (!classify(ls).semiproper) throw PreconditionError("classical reduction needs a semiproper signature");
  if (!is_valid(m)) throw PreconditionError("classical reduction needs a valid structure");
  ClassicalReduction red;
  red.signature = classical_signature(m);
  red.m_star = to_classical(m, red.signature);
  const ClassicalSignature& sig = red.signature;
  auto emit = [&](ForbiddenTemplate t) {
    if (red.catalog.size() >= budget) {
      throw BudgetExceeded("forbidden catalog exceeded " + std::to_string(budget) + " templates");
    }
    red.catalog.push_back(std::move(t));
  };

  // (a): a chain p_1..p_m whose sum is below a direct distance p.
  if (!sig.p.empty()) {
    const Rational& top = sig.p.back();
    std::vector<Rational> chain;
    Rational sum = 0;
    std::function<void()> grow = [&] {
      if (!chain.empty()) {
        for (const Rational& p : sig.p) {
          if (!(sum < p)) continue;
          ClassicalStructure s = blank(sig, chain.size() + 1, "z");
          for (std::size_t k = 0; k < chain.size(); ++k) both_ways(s, *sig.distance_symbol(chain[k]), k, k + 1);
          both_ways(s, *sig.distance_symbol(p), 0, chain.size());
          emit({TemplateShape::Metric, std::move(s), join(chain) + " < " + format_rational(p)});
        }
      }
      for (const Rational& q : sig.p) {
        if (!(sum + q < top)) break;
        chain.push_back(q);
        sum += q;
        grow();
        sum -= q;
        chain.pop_back();
      }
    };
    grow();
  }

  for (std::size_t r = 0; r < ls.size(); ++r) {
    const std::size_t n = ls[r].arity;
    for (std::size_t a = 0; a < sig.v.size(); ++a) {
      for (std::size_t b = a + 1; b < sig.v.size(); ++b) {
        const Rational& v = sig.v[a];
        const Rational& w = sig.v[b];
        const Rational gap = w - v;
        const std::size_t sv = *sig.relation_symbol(r, v), sw = *sig.relation_symbol(r, w);

        // (c): one tuple carrying two values.
        {
          ClassicalStructure s = blank(sig, n, "x");
          Tuple t(n);
          std::iota(t.begin(), t.end(), 0);
          s.facts[sv].insert(t);
          s.facts[sw].insert(t);
          emit({TemplateShape::Functional, std::move(s), ls[r].name + " at " + format_rational(v) + " and " +
                                                              format_rational(w)});
        }

        // (b): per-coordinate chains (possibly empty, not all empty) whose
        // modulus sum is below the value gap.
        std::vector<std::vector<Rational>> chains(n);
        Rational sum = 0;
        std::function<void(std::size_t)> coord = [&](std::size_t i) {
          if (i == n) {
            bool any = std::any_of(chains.begin(), chains.end(), [](const auto& c) { return !c.empty(); });
            if (!any) return;
            std::size_t total = 0;
            std::vector<std::size_t> start(n);
            for (std::size_t k = 0; k < n; ++k) {
              start[k] = total;
              total += chains[k].size() + 1;
            }
            ClassicalStructure s = blank(sig, total, "z");
            Tuple first(n), last(n);
            std::string desc = ls[r].name;
            for (std::size_t k = 0; k < n; ++k) {
              for (std::size_t j = 0; j < chains[k].size(); ++j) {
                both_ways(s, *sig.distance_symbol(chains[k][j]), start[k] + j, start[k] + j + 1);
              }
              first[k] = start[k];
              last[k] = start[k] + chains[k].size();
              desc += (k ? " | " : " chains ") + join(chains[k]);
            }
            s.facts[sv].insert(first);
            s.facts[sw].insert(last);
            emit({TemplateShape::Lipschitz, std::move(s), desc});
            return;
          }
          std::function<void()> extend = [&] {
            coord(i + 1);
            for (const Rational& q : sig.p) {
              ExtRational uq = ls.modulus(r, i).eval(q);
              if (uq.is_infinite() || !(sum + uq.value() < gap)) continue;
              chains[i].push_back(q);
              sum += uq.value();
              extend();
              sum -= uq.value();
              chains[i].pop_back();
            }
          };
          extend();
        };
        coord(0);
      }
    }
  }
  return red;
}

namespace {

std::optional<std::vector<std::size_t>> homomorphism(const ClassicalStructure& t, const ClassicalStructure& x) {
  const std::size_t n = t.points.size();
  // Facts grouped by their largest point, checked once that point is placed.
  std::vector<std::vector<std::pair<std::size_t, const Tuple*>>> by_last(n);
  for (std::size_t s = 0; s < t.facts.size(); ++s) {
    for (const Tuple& tup : t.facts[s]) by_last[*std::max_element(tup.begin(), tup.end())].emplace_back(s, &tup);
  }
  std::vector<std::size_t> map(n);
  std::function<bool(std::size_t)> place = [&](std::size_t k) {
    if (k == n) return true;
    for (std::size_t p = 0; p < x.points.size(); ++p) {
      map[k] = p;
      bool ok = true;
      for (auto [s, tup] : by_last[k]) {
        Tuple img(tup->size());
        for (std::size_t j = 0; j < tup->size(); ++j) img[j] = map[(*tup)[j]];
        if (!x.holds(s, img)) {
          ok = false;
          break;
        }
      }
      if (ok && place(k + 1)) return true;
    }
    return false;
  };
  if (place(0)) return map;
  return std::nullopt;
}

}  // namespace

std::optional<Homomorphism> find_forbidden_homomorphism(const ClassicalStructure& x,
                                                        const std::vector<ForbiddenTemplate>& catalog) {
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    if (auto map = homomorphism(catalog[k].structure, x)) return Homomorphism{k, std::move(*map)};
  }
  return std::nullopt;
}

FinStructure quotient_to_continuous(const ClassicalStructure& x, const FinStructure& m, std::size_t budget) {
  ClassicalReduction red = classical_reduction(m, budget);
  const ClassicalSignature& sig = red.signature;
  if (x.facts.size() != sig.symbols.size()) throw PreconditionError("classical structure over a different signature");
  if (auto h = find_forbidden_homomorphism(x, red.catalog)) {
    throw PreconditionError("classical structure is not catalog-free: template " + std::to_string(h->template_index) +
                            " (" + red.catalog[h->template_index].description + ")");
  }
  std::vector<std::size_t> m_in_x;
  for (const auto& id : m.points()) {
    auto it = std::find(x.points.begin(), x.points.end(), id);
    if (it == x.points.end()) throw PreconditionError("point '" + id + "' of M is missing");
    m_in_x.push_back(static_cast<std::size_t>(it - x.points.begin()));
  }
  for (std::size_t s = 0; s < red.m_star.facts.size(); ++s) {
    for (const Tuple& t : red.m_star.facts[s]) {
      Tuple img(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) img[j] = m_in_x[t[j]];
      if (!x.holds(s, img)) throw PreconditionError("M* does not map into the classical structure");
    }
  }
  if (m.size() == 0) return FinStructure::empty(m.signature_ptr());

  // Symmetric D_p edges; their shortest paths give both the class and d^Y.
  const std::size_t nx = x.points.size();
  std::vector<std::optional<Rational>> w(nx * nx);
  for (std::size_t s = 0; s < sig.symbols.size(); ++s) {
    if (sig.symbols[s].kind != ClassicalSymbol::Kind::Distance) continue;
    for (const Tuple& t : x.facts[s]) {
      if (t[0] == t[1] || !x.holds(s, {t[1], t[0]})) continue;
      auto& e = w[t[0] * nx + t[1]];
      if (!e || sig.symbols[s].param < *e) e = sig.symbols[s].param;
    }
  }
  for (std::size_t k = 0; k < nx; ++k) {
    for (std::size_t a = 0; a < nx; ++a) {
      if (!w[a * nx + k]) continue;
      for (std::size_t b = 0; b < nx; ++b) {
        if (a == b || !w[k * nx + b]) continue;
        Rational via = *w[a * nx + k] + *w[k * nx + b];
        auto& e = w[a * nx + b];
        if (!e || via < *e) e = via;
      }
    }
  }
  std::vector<std::size_t> order = m_in_x;
  for (std::size_t p = 0; p < nx; ++p) {
    if (std::find(order.begin(), order.end(), p) == order.end() && w[m_in_x[0] * nx + p]) order.push_back(p);
  }
  const std::size_t ny = order.size();
  std::vector<std::string> ids;
  for (std::size_t p : order) ids.push_back(x.points[p]);
  std::vector<Rational> dist(ny * ny);
  for (std::size_t a = 0; a < ny; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      if (a == b) continue;
      const auto& e = w[order[a] * nx + order[b]];
      if (!e) throw PreconditionError("points of M are not chain-connected");
      dist[a * ny + b] = *e;
    }
  }
  PartialStructure part(m.signature_ptr(), std::move(ids), std::move(dist));
  std::vector<std::size_t> pos(nx, ny);
  for (std::size_t a = 0; a < ny; ++a) pos[order[a]] = a;
  for (std::size_t s = 0; s < sig.symbols.size(); ++s) {
    const auto& sym = sig.symbols[s];
    if (sym.kind != ClassicalSymbol::Kind::Relation) continue;
    for (const Tuple& t : x.facts[s]) {
      Tuple img(t.size());
      bool inside = true;
      for (std::size_t j = 0; j < t.size() && inside; ++j) {
        img[j] = pos[t[j]];
        inside = img[j] < ny;
      }
      if (inside) part.set(sym.relation, img, sym.param);
    }
  }
  FinStructure out = conservative_extension(part);
  std::vector<std::size_t> base(m.size());
  std::iota(base.begin(), base.end(), 0);
  if (!(substructure(out, base) == m)) throw std::logic_error("quotient does not extend M");
  return out;
}

namespace {

using Perm = std::vector<std::size_t>;

Perm compose_perm(const Perm& g, const Perm& h) {
  Perm out(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) out[x] = g[h[x]];
  return out;
}

bool extends(const Perm& g, const PartialIso& p) {
  for (std::size_t k = 0; k < p.dom.size(); ++k) {
    if (g[p.dom[k]] != p.image[k]) return false;
  }
  return true;
}

bool restricts_to(const FinStructure& n, const FinStructure& m) {
  if (n.size() < m.size()) return false;
  if (m.size() == 0) return true;
  std::vector<std::size_t> base(m.size());
  std::iota(base.begin(), base.end(), 0);
  return substructure(n, base) == m;
}

}  // namespace

std::optional<CoherentWitness> coherent_assignment(const FinStructure& m, const FinStructure& n) {
  if (!restricts_to(n, m)) throw PreconditionError("candidate does not extend M");
  std::vector<PartialIso> isos = enumerate_partial_isos(m);
  std::vector<Perm> auts = automorphisms(n);
  std::map<Perm, std::size_t> aut_index;
  for (std::size_t k = 0; k < auts.size(); ++k) aut_index[auts[k]] = k;
  const std::size_t np = isos.size();

  std::vector<std::vector<std::size_t>> cand(np);
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t g = 0; g < auts.size(); ++g) {
      if (extends(auts[g], isos[k])) cand[k].push_back(g);
    }
    if (cand[k].empty()) return std::nullopt;
  }
  // Composable pairs (p, q) with range(q) = dom(p), and the index of p o q.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t q = 0; q < np; ++q) {
      if (!composable(isos[p], isos[q])) continue;
      PartialIso c = compose(isos[p], isos[q]);
      auto it = std::find(isos.begin(), isos.end(), c);
      pairs.emplace_back(p, q, static_cast<std::size_t>(it - isos.begin()));
    }
  }
  std::vector<std::vector<std::size_t>> pairs_of(np);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [p, q, c] = pairs[k];
    pairs_of[p].push_back(k);
    pairs_of[q].push_back(k);
  }

  using Assign = std::vector<std::optional<std::size_t>>;
  // Assigns phi(k) = g and follows forced compositions; false on conflict.
  std::function<bool(Assign&, std::size_t, std::size_t)> set = [&](Assign& a, std::size_t k, std::size_t g) {
    if (a[k]) return *a[k] == g;
    if (!std::binary_search(cand[k].begin(), cand[k].end(), g)) return false;
    a[k] = g;
    for (std::size_t pk : pairs_of[k]) {
      auto [p, q, c] = pairs[pk];
      if (!a[p] || !a[q]) continue;
      std::size_t gc = aut_index.at(compose_perm(auts[*a[p]], auts[*a[q]]));
      if (!set(a, c, gc)) return false;
    }
    return true;
  };

  Assign start(np);
  Perm id(n.size());
  std::iota(id.begin(), id.end(), 0);
  // phi of an identity map is idempotent, hence the identity automorphism.
  for (std::size_t k = 0; k < np; ++k) {
    if (isos[k].dom == isos[k].image && !set(start, k, aut_index.at(id))) return std::nullopt;
  }
  std::function<std::optional<Assign>(Assign)> search = [&](Assign a) -> std::optional<Assign> {
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < np; ++k) {
      if (!a[k] && (!pick || cand[k].size() < cand[*pick].size())) pick = k;
    }
    if (!pick) return a;
    for (std::size_t g : cand[*pick]) {
      Assign next = a;
      if (!set(next, *pick, g)) continue;
      if (auto done = search(std::move(next))) return done;
    }
    return std::nullopt;
  };
  auto found = search(std::move(start));
  if (!found) return std::nullopt;
  CoherentWitness w{n, isos, {}};
  for (const auto& g : *found) w.phi.push_back(auts[*g]);
  return w;
}

EppaSearchResult eppa_bruteforce(const FinStructure& m, const ValuePair& vp, std::size_t max_size,
                                 std::size_t budget) {
  if (!classify(m.signature()).semiproper) throw PreconditionError("EPPA search needs a semiproper signature");
  if (!is_valued(m, vp)) throw PreconditionError("M is not (delta, V)-valued");
  if (max_size < m.size()) throw PreconditionError("max size below |M|");
  EppaSearchResult res{EppaSearchResult::Status::Exhausted, std::nullopt, 0};
  std::vector<FinStructure> level{m};
  for (std::size_t size = m.size(); size <= max_size; ++size) {
    for (const FinStructure& n : level) {
      if (++res.candidates > budget) {
        res.status = EppaSearchResult::Status::BudgetExceeded;
        return res;
      }
      if (auto w = coherent_assignment(m, n)) {
        res.status = EppaSearchResult::Status::Found;
        res.witness = std::move(w);
        return res;
      }
    }
    if (size == max_size) break;
    std::vector<FinStructure> next;
    for (const FinStructure& n : level) {
      try {
        for (auto& e : enumerate_one_point_extensions(n, vp, budget * 64)) next.push_back(std::move(e));
      } catch (const BudgetExceeded&) {
        res.status = EppaSearchResult::Status::BudgetExceeded;
        return res;
      }
      if (next.size() > budget) {
        res.status = EppaSearchResult::Status::BudgetExceeded;
        return res;
      }
    }
    level = std::move(next);
  }
  return res;
}

WitnessReport verify_coherent_witness(const FinStructure& m, const CoherentWitness& w) {
  WitnessReport rep;
  if (!restricts_to(w.n, m)) {
    rep.violations.push_back("extension: N does not restrict to M");
    return rep;
  }
  if (!is_valid(w.n)) rep.violations.push_back("invalid: N fails validation");
  if (w.isos.size() != w.phi.size()) {
    rep.violations.push_back("shape: one automorphism per partial isomorphism required");
    return rep;
  }
  std::vector<PartialIso> all = enumerate_partial_isos(m);
  for (const auto& p : all) {
    if (std::find(w.isos.begin(), w.isos.end(), p) == w.isos.end()) {
      rep.violations.push_back("missing: a partial isomorphism of M has no image");
    }
  }
  auto describe = [&](std::size_t k) {
    std::string s = "{";
    for (std::size_t j = 0; j < w.isos[k].dom.size(); ++j) {
      s += (j ? "," : "") + m.id(w.isos[k].dom[j]) + "->" + m.id(w.isos[k].image[j]);
    }
    return s + "}";
  };
  for (std::size_t k = 0; k < w.isos.size(); ++k) {
    const Perm& g = w.phi[k];
    Perm sorted = g;
    std::sort(sorted.begin(), sorted.end());
    bool perm = g.size() == w.n.size();
    for (std::size_t x = 0; perm && x < sorted.size(); ++x) perm = sorted[x] == x;
    if (!perm || !is_embedding(w.n, w.n, Embedding{g})) {
      rep.violations.push_back("automorphism: image of " + describe(k) + " is not an automorphism of N");
      continue;
    }
    if (!extends(g, w.isos[k])) rep.violations.push_back("extension: image of " + describe(k) + " does not extend it");
  }
  if (!rep.ok()) return rep;
  for (std::size_t p = 0; p < w.isos.size(); ++p) {
    for (std::size_t q = 0; q < w.isos.size(); ++q) {
      if (!composable(w.isos[p], w.isos[q])) continue;
      PartialIso c = compose(w.isos[p], w.isos[q]);
      auto it = std::find(w.isos.begin(), w.isos.end(), c);
      if (it == w.isos.end()) continue;
      if (w.phi[static_cast<std::size_t>(it - w.isos.begin())] != compose_perm(w.phi[p], w.phi[q])) {
        rep.violations.push_back("coherence: phi(" + describe(p) + " o " + describe(q) + ") differs");
      }
    }
  }
  return rep;
}

EppaFixture eppa_superadditivity_fixture(const SignaturePtr& sig, std::size_t r, std::size_t i, const Rational& a,
                                         const Rational& b, const Rational& delta) {
  if (r >= sig->size() || i >= (*sig)[r].arity) throw PreconditionError("no such relation argument");
  if (a <= 0 || b <= 0 || delta <= 0) throw PreconditionError("gaps must be positive");
  const Modulus& u = sig->modulus(r, i);
  if (!(u.eval(a + b) < ExtRational(1))) throw PreconditionError("a + b must lie in the threshold interval");
  if (u.eval(delta) < ExtRational(1)) throw PreconditionError("delta must exceed the threshold interval");
  Rational ua = u.eval(a).value(), ub = u.eval(b).value();
  std::vector<Rational> pos{0, a, a + delta, a + delta + b};
  StructureBuilder sb(sig, {"y", "s", "t", "z"});
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t y = x + 1; y < 4; ++y) sb.dist(x, y, pos[y] - pos[x]);
  }
  const Rational top = std::min(Rational(1), Rational(ua + ub));
  const std::size_t arity = (*sig)[r].arity;
  for (std::size_t idx = 0; idx < tuple_count(4, arity); ++idx) {
    Tuple t = decode_tuple(idx, 4, arity);
    sb.rel(r, t, t[i] == 0 ? top : t[i] == 3 ? Rational(0) : ub);
  }
  return {sb.build(), PartialIso{{1, 2}, {2, 1}}};
}

Obstruction eppa_obstruction(const EppaFixture& fx, std::size_t r, std::size_t i, const FinStructure& n,
                             const std::vector<std::size_t>& f) {
  const Modulus& u = fx.m.signature().modulus(r, i);
  Rational a = fx.m.dist(0, 1), b = fx.m.dist(2, 3);
  Obstruction o;
  o.lower = min(ExtRational(1), u.eval(a) + u.eval(b));
  o.middle = u.eval(n.dist(f[0], 3));
  o.upper = u.eval(a + b);
  o.holds = o.lower <= o.middle && o.middle <= o.upper;
  return o;
}

}  // namespace cstruct
