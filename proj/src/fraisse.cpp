#include "cstruct/fraisse.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "cstruct/amalgam.hpp"
#include "cstruct/error.hpp"
#include "cstruct/induced.hpp"
#include "cstruct/moduli.hpp"

namespace cstruct {

namespace {

bool sorted_unique(const std::vector<Rational>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k - 1] < v[k])) return false;
  }
  return true;
}

bool contains(const std::vector<Rational>& sorted, const Rational& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

void require_semiproper(const Signature& sig, const char* what) {
  if (!classify(sig).semiproper) throw PreconditionError(std::string(what) + " needs a semiproper signature");
}

// Finite positive values u_{R,i}(delta) over the whole signature.
std::vector<Rational> subtraction_quanta(const std::vector<Rational>& delta, const Signature& sig) {
  std::set<Rational> q;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t i = 0; i < sig[r].arity; ++i) {
      for (const Rational& d : delta) {
        ExtRational v = sig.modulus(r, i).eval(d);
        if (!v.is_infinite()) q.insert(v.value());
      }
    }
  }
  return {q.begin(), q.end()};
}

std::string unique_id(const std::vector<std::string>& taken, std::string id) {
  while (std::find(taken.begin(), taken.end(), id) != taken.end()) id += "'";
  return id;
}

}  // namespace

bool is_distance_value_set(const std::vector<Rational>& delta) {
  if (delta.empty() || !sorted_unique(delta) || delta.front() <= 0) return false;
  const Rational& sup = delta.back();
  for (const Rational& a : delta) {
    for (const Rational& b : delta) {
      if (!contains(delta, std::min(Rational(a + b), sup))) return false;
    }
  }
  return true;
}

std::vector<std::string> value_pair_violations(const ValuePair& vp, const Signature& sig) {
  std::vector<std::string> out;
  if (!is_distance_value_set(vp.delta)) out.push_back("delta is not a distance value set");
  if (!vp.delta.empty()) {
    for (std::size_t r = 0; r < sig.size(); ++r) {
      for (std::size_t i = 0; i < sig[r].arity; ++i) {
        if (sig.modulus(r, i).eval(vp.delta.back()) < ExtRational(1)) {
          out.push_back("u(" + sig[r].name + "," + std::to_string(i) + ") at sup delta is below 1");
        }
      }
    }
  }
  if (!sorted_unique(vp.v)) out.push_back("v is not strictly ascending");
  if (!contains(vp.v, Rational(0))) out.push_back("v does not contain 0");
  for (const Rational& x : vp.v) {
    if (x < 0 || x > 1) out.push_back("value " + format_rational(x) + " outside [0,1]");
  }
  for (const Rational& q : subtraction_quanta(vp.delta, sig)) {
    for (const Rational& x : vp.v) {
      if (x > q && !contains(vp.v, Rational(x - q))) {
        out.push_back("v is not closed: " + format_rational(x) + " - " + format_rational(q));
      }
    }
  }
  return out;
}

std::vector<Rational> close_distance_set(const std::vector<Rational>& p, const Rational& sup) {
  if (sup <= 0) throw PreconditionError("distance supremum must be positive");
  std::set<Rational> s{sup};
  for (const Rational& x : p) {
    if (x <= 0 || x > sup) throw PreconditionError("distance " + format_rational(x) + " outside (0, sup]");
    s.insert(x);
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<Rational> snapshot(s.begin(), s.end());
    for (const Rational& a : snapshot) {
      for (const Rational& b : snapshot) {
        if (s.insert(std::min(Rational(a + b), sup)).second) grew = true;
      }
    }
  }
  return {s.begin(), s.end()};
}

ValuePair close_value_pair(const std::vector<Rational>& delta, const std::vector<Rational>& w, const Signature& sig) {
  require_semiproper(sig, "value pair closure");
  if (!is_distance_value_set(delta)) throw PreconditionError("delta is not a distance value set");
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t i = 0; i < sig[r].arity; ++i) {
      if (sig.modulus(r, i).eval(delta.back()) < ExtRational(1)) {
        throw PreconditionError("sup delta lies in a threshold interval");
      }
    }
  }
  std::set<Rational> v{Rational(0)};
  for (const Rational& x : w) {
    if (x < 0 || x > 1) throw PreconditionError("value " + format_rational(x) + " outside [0,1]");
    v.insert(x);
  }
  // Every quantum is positive (moduli have no flat start), so this terminates.
  const std::vector<Rational> quanta = subtraction_quanta(delta, sig);
  std::vector<Rational> frontier(v.begin(), v.end());
  while (!frontier.empty()) {
    std::vector<Rational> next;
    for (const Rational& x : frontier) {
      for (const Rational& q : quanta) {
        if (x > q && v.insert(x - q).second) next.push_back(x - q);
      }
    }
    frontier = std::move(next);
  }
  return {delta, {v.begin(), v.end()}};
}

ValuePair value_pair_for(const FinStructure& s) {
  const Signature& sig = s.signature();
  require_semiproper(sig, "value_pair_for");
  std::vector<Rational> p;
  Rational sup = 0;
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = x + 1; y < s.size(); ++y) {
      p.push_back(s.dist(x, y));
      sup = std::max(sup, s.dist(x, y));
    }
  }
  bool attained = false;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t i = 0; i < sig[r].arity; ++i) {
      Threshold th = threshold_set(sig.modulus(r, i));
      sup = std::max(sup, th.sup.value());
    }
  }
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t i = 0; i < sig[r].arity; ++i) {
      if (sig.modulus(r, i).eval(sup) < ExtRational(1)) attained = true;
    }
  }
  if (sup == 0) sup = 1;
  if (attained) sup *= 2;
  std::vector<Rational> w;
  for (const auto& tensor : s.rel_tensors()) w.insert(w.end(), tensor.begin(), tensor.end());
  return close_value_pair(close_distance_set(p, sup), w, sig);
}

bool is_valued(const FinStructure& s, const ValuePair& vp) {
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (x != y && !contains(vp.delta, s.dist(x, y))) return false;
    }
  }
  for (const auto& tensor : s.rel_tensors()) {
    for (const Rational& v : tensor) {
      if (!contains(vp.v, v)) return false;
    }
  }
  return true;
}

std::vector<FinStructure> enumerate_one_point_extensions(const FinStructure& a, const ValuePair& vp,
                                                         std::size_t budget) {
  const Signature& sig = a.signature();
  const std::size_t n = a.size(), total = n + 1;
  std::size_t nodes = 0;
  auto tick = [&] {
    if (++nodes > budget) {
      throw BudgetExceeded("one-point extension enumeration exceeded " + std::to_string(budget) + " search nodes");
    }
  };

  std::vector<Rational> dist(total * total);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) dist[x * total + y] = a.dist(x, y);
  }
  // Tensors over the extension; new-point tuples filled during search.
  std::vector<std::vector<std::optional<Rational>>> rels(sig.size());
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (relation, index) containing the new point
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    rels[r].resize(tuple_count(total, arity));
    for (std::size_t idx = 0; idx < rels[r].size(); ++idx) {
      Tuple t = decode_tuple(idx, total, arity);
      if (std::find(t.begin(), t.end(), n) == t.end()) {
        rels[r][idx] = a.rel(r, t);
      } else {
        slots.emplace_back(r, idx);
      }
    }
  }

  std::vector<std::string> ids = a.points();
  ids.push_back(unique_id(ids, "x"));
  std::vector<FinStructure> out;

  auto consistent = [&](std::size_t r, std::size_t idx, const Rational& v) {
    const std::size_t arity = sig[r].arity;
    Tuple t = decode_tuple(idx, total, arity);
    for (std::size_t i = 0; i < arity; ++i) {
      Tuple other = t;
      for (std::size_t p = 0; p < total; ++p) {
        if (p == t[i]) continue;
        other[i] = p;
        const auto& w = rels[r][encode_tuple(other, total)];
        if (!w) continue;
        ExtRational bound = sig.modulus(r, i).eval(dist[t[i] * total + p]);
        if (ExtRational(abs_diff(v, *w)) > bound) return false;
      }
    }
    return true;
  };

  std::function<void(std::size_t)> assign_values = [&](std::size_t k) {
    tick();
    if (k == slots.size()) {
      std::vector<std::vector<Rational>> full(sig.size());
      for (std::size_t r = 0; r < sig.size(); ++r) {
        for (const auto& v : rels[r]) full[r].push_back(*v);
      }
      FinStructure s(a.signature_ptr(), ids, dist, std::move(full));
      if (is_valid(s)) out.push_back(std::move(s));
      return;
    }
    auto [r, idx] = slots[k];
    for (const Rational& v : vp.v) {
      if (!consistent(r, idx, v)) continue;
      rels[r][idx] = v;
      assign_values(k + 1);
      rels[r][idx].reset();
    }
  };

  std::function<void(std::size_t)> assign_distances = [&](std::size_t k) {
    tick();
    if (k == n) {
      assign_values(0);
      return;
    }
    for (const Rational& d : vp.delta) {
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        const Rational& dj = dist[j * total + n];
        const Rational& ajk = a.dist(j, k);
        ok = abs_diff(dj, ajk) <= d && d <= dj + ajk;
      }
      if (!ok) continue;
      dist[k * total + n] = dist[n * total + k] = d;
      assign_distances(k + 1);
    }
  };
  assign_distances(0);
  return out;
}

bool realizes(const FinStructure& s, const std::vector<std::size_t>& base, const FinStructure& ext, std::size_t y) {
  const std::size_t n = base.size(), last = n;
  if (ext.size() != n + 1) throw PreconditionError("extension does not match its base");
  if (std::find(base.begin(), base.end(), y) != base.end()) return false;
  std::vector<std::size_t> map = base;
  map.push_back(y);
  for (std::size_t k = 0; k < n; ++k) {
    if (s.dist(base[k], y) != ext.dist(k, last)) return false;
  }
  const Signature& sig = s.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t idx = 0; idx < ext.rel_values(r).size(); ++idx) {
      Tuple t = decode_tuple(idx, ext.size(), sig[r].arity);
      for (auto& x : t) x = map[x];
      if (s.rel(r, t) != ext.rel_values(r)[idx]) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::size_t>> small_subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out{{}};
  std::vector<std::size_t> cur;
  for (std::size_t size = 1; size <= std::min(m, n); ++size) {
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (cur.size() == size) {
        out.push_back(cur);
        return;
      }
      for (std::size_t x = from; x < n; ++x) {
        cur.push_back(x);
        rec(x + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

LimitApprox::LimitApprox(SignaturePtr sig, ValuePair vp, LimitOptions opts)
    : vp_(std::move(vp)), opts_(opts), current_(FinStructure::empty(sig)) {
  require_semiproper(*sig, "Fraisse limit approximation");
  auto problems = value_pair_violations(vp_, *sig);
  if (!problems.empty()) throw PreconditionError("not a good value pair: " + problems.front());
  for (auto& ext : enumerate_one_point_extensions(current_, vp_, opts_.catalog_budget)) {
    pending_.push_back(Task{{}, std::move(ext)});
  }
}

void LimitApprox::enqueue_for(std::size_t new_point) {
  for (const auto& base : small_subsets(current_.size(), opts_.size_cap)) {
    if (std::find(base.begin(), base.end(), new_point) == base.end()) continue;
    FinStructure a = substructure(current_, base);
    for (auto& ext : enumerate_one_point_extensions(a, vp_, opts_.catalog_budget)) {
      pending_.push_back(Task{base, std::move(ext)});
    }
  }
}

FinStructure LimitApprox::grow(const Task& t, const std::vector<Rational>& to_new) const {
  const std::size_t n = current_.size(), total = n + 1, last = t.base.size();
  std::vector<std::string> ids = current_.points();
  ids.push_back(unique_id(ids, "u" + std::to_string(n)));
  std::vector<Rational> dist(total * total);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) dist[x * total + y] = current_.dist(x, y);
    dist[x * total + n] = dist[n * total + x] = to_new[x];
  }
  PartialStructure x(current_.signature_ptr(), std::move(ids), std::move(dist));
  std::vector<std::size_t> map = t.base;
  map.push_back(n);
  const Signature& sig = current_.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    for (std::size_t idx = 0; idx < current_.rel_values(r).size(); ++idx) {
      x.set(r, decode_tuple(idx, n, arity), current_.rel_values(r)[idx]);
    }
    for (std::size_t idx = 0; idx < t.ext.rel_values(r).size(); ++idx) {
      Tuple tup = decode_tuple(idx, last + 1, arity);
      for (auto& p : tup) p = map[p];
      x.set(r, tup, t.ext.rel_values(r)[idx]);
    }
  }
  return conservative_extension(x);
}

FinStructure LimitApprox::grow_canonical(const Task& t) const {
  const std::size_t n = current_.size(), last = t.base.size();
  std::vector<Rational> to_new(n);
  if (t.base.empty()) {
    Rational d = joint_embed_distance(current_, t.ext, vp_.delta);
    std::fill(to_new.begin(), to_new.end(), d);
    return grow(t, to_new);
  }
  for (std::size_t y = 0; y < n; ++y) {
    std::optional<Rational> best;
    for (std::size_t k = 0; k < last; ++k) {
      Rational via = t.base[k] == y ? t.ext.dist(k, last) : current_.dist(y, t.base[k]) + t.ext.dist(k, last);
      if (!best || via < *best) best = via;
    }
    to_new[y] = std::min(*best, vp_.delta.back());
  }
  return grow(t, to_new);
}

std::vector<Rational> LimitApprox::saturating_distances(const Task& t) const {
  const Signature& sig = current_.signature();
  const std::size_t n = current_.size(), last = t.base.size();
  const Rational& cap = vp_.delta.back();
  std::vector<std::size_t> unary;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (sig[r].arity == 1) unary.push_back(r);
  }
  auto same_unary = [&](std::size_t z) {
    for (std::size_t r : unary) {
      if (current_.rel(r, {z}) != t.ext.rel(r, {last})) return false;
    }
    return true;
  };
  auto same_unary_pair = [&](std::size_t z, std::size_t y) {
    for (std::size_t r : unary) {
      if (current_.rel(r, {z}) != current_.rel(r, {y})) return false;
    }
    return true;
  };
  std::vector<std::optional<Rational>> d(n);
  for (std::size_t k = 0; k < last; ++k) d[t.base[k]] = t.ext.dist(k, last);
  for (std::size_t y = 0; y < n; ++y) {
    if (d[y]) continue;
    Rational lo = 0, hi = cap;
    for (std::size_t z = 0; z < n; ++z) {
      if (!d[z]) continue;
      lo = std::max(lo, abs_diff(*d[z], current_.dist(y, z)));
      hi = std::min(hi, Rational(*d[z] + current_.dist(y, z)));
    }
    // Rank feasible distances: a new neighbour type for both y and the new
    // point, then for y alone, then for the new point alone.
    std::optional<Rational> choice;
    int best_rank = 0;
    for (const Rational& c : vp_.delta) {
      if (c < lo || c > hi) continue;
      bool uc = true;
      for (std::size_t r : unary) {
        Rational diff = abs_diff(current_.rel(r, {y}), t.ext.rel(r, {last}));
        if (ExtRational(diff) > sig.modulus(r, 0).eval(c)) uc = false;
      }
      if (!uc) continue;
      bool met_y = false, met_x = false;
      for (std::size_t z = 0; z < n && !met_y; ++z) {
        met_y = z != y && current_.dist(y, z) == c && same_unary(z);
      }
      for (std::size_t z = 0; z < n && !met_x; ++z) {
        met_x = d[z] && *d[z] == c && same_unary_pair(z, y);
      }
      int rank = (met_y ? 0 : 2) + (met_x ? 0 : 1);
      if (rank > best_rank) {
        best_rank = rank;
        choice = c;
      }
    }
    d[y] = choice ? *choice : hi;
  }
  std::vector<Rational> out;
  for (auto& v : d) out.push_back(*v);
  return out;
}

bool LimitApprox::step() {
  if (pending_.empty()) return false;
  Task t = std::move(pending_.front());
  pending_.pop_front();
  ++round_;
  if (opts_.mode == Realization::Saturating) {
    for (std::size_t y = 0; y < current_.size(); ++y) {
      if (realizes(current_, t.base, t.ext, y)) {
        log_.push_back(TaskRecord{std::move(t), y, true});
        return true;
      }
    }
  }
  std::optional<FinStructure> grown;
  if (opts_.mode == Realization::Saturating) {
    try {
      FinStructure g = grow(t, saturating_distances(t));
      if (is_valid(g)) grown = std::move(g);
    } catch (const PreconditionError&) {
      // Lower distances can break the Lipschitz precondition for higher arities.
    }
  }
  if (!grown) grown = grow_canonical(t);
  const std::size_t y = current_.size();
  if (!is_valid(*grown) || !is_valued(*grown, vp_) || !realizes(*grown, t.base, t.ext, y)) {
    throw std::logic_error("Fraisse step left the class K(delta, V)");
  }
  current_ = std::move(*grown);
  log_.push_back(TaskRecord{std::move(t), y, false});
  enqueue_for(y);
  return true;
}

LimitApprox limit_step(LimitApprox st) {
  if (!st.step()) throw PreconditionError("no pending tasks");
  return st;
}

ExtensionReport check_extension_property(const FinStructure& s, const ValuePair& vp, std::size_t m,
                                         std::size_t budget) {
  ExtensionReport rep;
  for (const auto& base : small_subsets(s.size(), m)) {
    FinStructure a = base.empty() ? FinStructure::empty(s.signature_ptr()) : substructure(s, base);
    for (auto& ext : enumerate_one_point_extensions(a, vp, budget)) {
      ++rep.total;
      bool found = false;
      for (std::size_t y = 0; y < s.size() && !found; ++y) found = realizes(s, base, ext, y);
      if (found) {
        ++rep.satisfied;
      } else {
        rep.unmet.push_back(Task{base, std::move(ext)});
      }
    }
  }
  return rep;
}

}  // namespace cstruct
