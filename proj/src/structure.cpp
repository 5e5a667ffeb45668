#include "cstruct/structure.hpp"

#include <algorithm>
#include <set>

#include "cstruct/error.hpp"

namespace cstruct {

std::size_t tuple_count(std::size_t size, std::size_t arity) {
  std::size_t c = 1;
  for (std::size_t k = 0; k < arity; ++k) c *= size;
  return c;
}

std::size_t encode_tuple(const Tuple& t, std::size_t size) {
  std::size_t idx = 0;
  for (std::size_t x : t) idx = idx * size + x;
  return idx;
}

Tuple decode_tuple(std::size_t index, std::size_t size, std::size_t arity) {
  Tuple t(arity);
  for (std::size_t k = arity; k-- > 0;) {
    t[k] = index % size;
    index /= size;
  }
  return t;
}

FinStructure::FinStructure(SignaturePtr sig, std::vector<std::string> points, std::vector<Rational> dist,
                           std::vector<std::vector<Rational>> rels)
    : sig_(std::move(sig)), points_(std::move(points)), dist_(std::move(dist)), rels_(std::move(rels)) {
  if (!sig_) throw PreconditionError("structure without signature");
  const std::size_t n = points_.size();
  if (std::set<std::string>(points_.begin(), points_.end()).size() != n) {
    throw PreconditionError("duplicate point ids");
  }
  if (dist_.size() != n * n) throw PreconditionError("distance matrix has the wrong shape");
  if (rels_.size() != sig_->size()) throw PreconditionError("one relation tensor per symbol required");
  for (std::size_t r = 0; r < rels_.size(); ++r) {
    if (rels_[r].size() != tuple_count(n, (*sig_)[r].arity)) {
      throw PreconditionError("relation tensor for '" + (*sig_)[r].name + "' has the wrong size");
    }
  }
}

FinStructure FinStructure::empty(SignaturePtr sig) {
  std::vector<std::vector<Rational>> rels(sig->size());
  return FinStructure(std::move(sig), {}, {}, std::move(rels));
}

std::optional<std::size_t> FinStructure::index_of(const std::string& id) const {
  auto it = std::find(points_.begin(), points_.end(), id);
  if (it == points_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

Rational FinStructure::diameter() const {
  Rational d = 0;
  for (const Rational& v : dist_) d = std::max(d, v);
  return d;
}

bool operator==(const FinStructure& a, const FinStructure& b) {
  return (a.sig_ == b.sig_ || *a.sig_ == *b.sig_) && a.points_ == b.points_ && a.dist_ == b.dist_ &&
         a.rels_ == b.rels_;
}

StructureBuilder::StructureBuilder(SignaturePtr sig, std::vector<std::string> points)
    : sig_(std::move(sig)), points_(std::move(points)), dist_(points_.size() * points_.size()) {
  for (std::size_t r = 0; r < sig_->size(); ++r) rels_.emplace_back(tuple_count(points_.size(), (*sig_)[r].arity));
}

std::size_t StructureBuilder::point(const std::string& id) const {
  auto it = std::find(points_.begin(), points_.end(), id);
  if (it == points_.end()) throw PreconditionError("unknown point '" + id + "'");
  return static_cast<std::size_t>(it - points_.begin());
}

StructureBuilder& StructureBuilder::dist(std::size_t x, std::size_t y, const Rational& d) {
  dist_[x * points_.size() + y] = d;
  dist_[y * points_.size() + x] = d;
  return *this;
}

StructureBuilder& StructureBuilder::dist(const std::string& x, const std::string& y, const Rational& d) {
  return dist(point(x), point(y), d);
}

StructureBuilder& StructureBuilder::rel(std::size_t r, const Tuple& t, const Rational& v) {
  if (t.size() != (*sig_)[r].arity) throw PreconditionError("tuple arity mismatch");
  rels_[r][encode_tuple(t, points_.size())] = v;
  return *this;
}

StructureBuilder& StructureBuilder::rel(const std::string& name, const std::vector<std::string>& t,
                                        const Rational& v) {
  auto r = sig_->find(name);
  if (!r) throw PreconditionError("unknown relation '" + name + "'");
  Tuple idx;
  for (const auto& id : t) idx.push_back(point(id));
  return rel(*r, idx, v);
}

StructureBuilder& StructureBuilder::fill(std::size_t r, const Rational& v) {
  for (auto& x : rels_[r]) x = v;
  return *this;
}

FinStructure StructureBuilder::build() const { return FinStructure(sig_, points_, dist_, rels_); }

std::string to_string(StructureViolation::Kind k) {
  using K = StructureViolation::Kind;
  switch (k) {
    case K::Asymmetric: return "asymmetric";
    case K::Diagonal: return "nonzero_diagonal";
    case K::NonPositive: return "nonpositive_distance";
    case K::Triangle: return "triangle";
    case K::ValueRange: return "value_range";
    case K::UniformContinuity: return "uniform_continuity";
  }
  return "unknown";
}

std::string describe(const FinStructure& s, const StructureViolation& v) {
  std::string pts;
  for (std::size_t x : v.points) pts += (pts.empty() ? "" : ",") + s.id(x);
  auto tup = [&](const Tuple& t) {
    std::string o = "(";
    for (std::size_t k = 0; k < t.size(); ++k) o += (k ? "," : "") + s.id(t[k]);
    return o + ")";
  };
  std::string out = to_string(v.kind) + " at " + pts;
  if (v.kind == StructureViolation::Kind::UniformContinuity || v.kind == StructureViolation::Kind::ValueRange) {
    out += " relation " + s.signature()[v.relation].name + " " + tup(v.tuple_a);
    if (!v.tuple_b.empty()) out += " vs " + tup(v.tuple_b);
  }
  return out + ": " + format_ext(v.lhs) + " > " + format_ext(v.rhs);
}

std::vector<StructureViolation> validate_metric(std::size_t n, const std::vector<Rational>& dist, bool stop_at_first) {
  using K = StructureViolation::Kind;
  std::vector<StructureViolation> out;
  auto d = [&](std::size_t x, std::size_t y) -> const Rational& { return dist[x * n + y]; };
  auto push = [&](StructureViolation v) {
    out.push_back(std::move(v));
    return stop_at_first;
  };
  for (std::size_t x = 0; x < n; ++x) {
    if (d(x, x) != 0 && push({K::Diagonal, {x, x}, 0, 0, {}, {}, d(x, x), 0})) return out;
    for (std::size_t y = x + 1; y < n; ++y) {
      if (d(x, y) != d(y, x) && push({K::Asymmetric, {x, y}, 0, 0, {}, {}, d(x, y), d(y, x)})) return out;
      if (d(x, y) <= 0 && push({K::NonPositive, {x, y}, 0, 0, {}, {}, 0, d(x, y)})) return out;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (x == z || y == x || y == z) continue;
        Rational via = d(x, y) + d(y, z);
        if (d(x, z) > via && push({K::Triangle, {x, y, z}, 0, 0, {}, {}, d(x, z), via})) return out;
      }
    }
  }
  return out;
}

std::vector<StructureViolation> validate(const FinStructure& s, bool stop_at_first) {
  using K = StructureViolation::Kind;
  std::vector<StructureViolation> out = validate_metric(s.size(), s.dist_matrix(), stop_at_first);
  if (stop_at_first && !out.empty()) return out;
  const std::size_t n = s.size();
  const Signature& sig = s.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    const std::vector<Rational>& vals = s.rel_values(r);
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
      if (vals[idx] < 0 || vals[idx] > 1) {
        Tuple t = decode_tuple(idx, n, arity);
        out.push_back({K::ValueRange, t, r, 0, t, {}, vals[idx] < 0 ? ExtRational(0) : ExtRational(vals[idx]),
                       vals[idx] < 0 ? ExtRational(vals[idx]) : ExtRational(1)});
        if (stop_at_first) return out;
      }
    }
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
      Tuple a = decode_tuple(idx, n, arity);
      for (std::size_t i = 0; i < arity; ++i) {
        const Modulus& u = sig.modulus(r, i);
        for (std::size_t z = a[i] + 1; z < n; ++z) {
          Tuple b = a;
          b[i] = z;
          Rational diff = abs_diff(vals[idx], s.rel(r, b));
          if (diff == 0) continue;
          ExtRational bound = u.eval(s.dist(a[i], z));
          if (ExtRational(diff) > bound) {
            out.push_back({K::UniformContinuity, {a[i], z}, r, i, a, b, diff, bound});
            if (stop_at_first) return out;
          }
        }
      }
    }
  }
  return out;
}

FinStructure substructure(const FinStructure& s, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw PreconditionError("substructure of the empty subset");
  const std::size_t m = subset.size();
  for (std::size_t x : subset) {
    if (x >= s.size()) throw PreconditionError("substructure index out of range");
  }
  std::vector<std::string> ids;
  for (std::size_t x : subset) ids.push_back(s.id(x));
  std::vector<Rational> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = s.dist(subset[a], subset[b]);
  }
  std::vector<std::vector<Rational>> rels;
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    std::size_t arity = s.signature()[r].arity;
    std::vector<Rational> vals(tuple_count(m, arity));
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
      Tuple t = decode_tuple(idx, m, arity);
      for (auto& x : t) x = subset[x];
      vals[idx] = s.rel(r, t);
    }
    rels.push_back(std::move(vals));
  }
  return FinStructure(s.signature_ptr(), std::move(ids), std::move(dist), std::move(rels));
}

namespace {

bool same_signature(const FinStructure& a, const FinStructure& b) {
  return a.signature_ptr() == b.signature_ptr() || a.signature() == b.signature();
}

// Checks the relation tuples over assigned source points {0..k} that contain k.
bool relations_agree_at(const FinStructure& a, const FinStructure& b, const std::vector<std::size_t>& map,
                        std::size_t k) {
  const Signature& sig = a.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    std::size_t arity = sig[r].arity;
    std::size_t count = tuple_count(k + 1, arity);
    for (std::size_t idx = 0; idx < count; ++idx) {
      Tuple t = decode_tuple(idx, k + 1, arity);
      if (std::find(t.begin(), t.end(), k) == t.end()) continue;
      Tuple img = t;
      for (auto& x : img) x = map[x];
      if (a.rel(r, t) != b.rel(r, img)) return false;
    }
  }
  return true;
}

void search(const FinStructure& a, const FinStructure& b, const std::vector<std::vector<std::size_t>>& candidates,
            std::vector<std::size_t>& map, std::vector<bool>& used, std::size_t limit, std::vector<Embedding>& out) {
  std::size_t k = map.size();
  if (k == a.size()) {
    out.push_back({map});
    return;
  }
  for (std::size_t y : candidates[k]) {
    if (used[y]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) ok = a.dist(j, k) == b.dist(map[j], y);
    if (!ok) continue;
    map.push_back(y);
    if (relations_agree_at(a, b, map, k)) {
      used[y] = true;
      search(a, b, candidates, map, used, limit, out);
      used[y] = false;
    }
    map.pop_back();
    if (limit && out.size() >= limit) return;
  }
}

std::vector<Rational> distance_profile(const FinStructure& s, std::size_t x) {
  std::vector<Rational> p;
  for (std::size_t y = 0; y < s.size(); ++y) {
    if (y != x) p.push_back(s.dist(x, y));
  }
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<Rational> diagonal_values(const FinStructure& s, std::size_t x) {
  std::vector<Rational> v;
  for (std::size_t r = 0; r < s.signature().size(); ++r) v.push_back(s.rel(r, Tuple(s.signature()[r].arity, x)));
  return v;
}

}  // namespace

bool is_embedding(const FinStructure& a, const FinStructure& b, const Embedding& e) {
  if (!same_signature(a, b) || e.map.size() != a.size()) return false;
  std::set<std::size_t> img(e.map.begin(), e.map.end());
  if (img.size() != a.size() || (!img.empty() && *img.rbegin() >= b.size())) return false;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (a.dist(x, y) != b.dist(e.map[x], e.map[y])) return false;
    }
  }
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    std::size_t arity = a.signature()[r].arity;
    for (std::size_t idx = 0; idx < a.rel_values(r).size(); ++idx) {
      Tuple t = decode_tuple(idx, a.size(), arity);
      for (auto& x : t) x = e.map[x];
      if (a.rel_values(r)[idx] != b.rel(r, t)) return false;
    }
  }
  return true;
}

std::vector<Embedding> find_embeddings(const FinStructure& a, const FinStructure& b, std::size_t limit) {
  std::vector<Embedding> out;
  if (!same_signature(a, b) || a.size() > b.size()) return out;
  std::vector<std::vector<std::size_t>> candidates(a.size());
  std::vector<std::vector<Rational>> profiles_b, diag_b;
  for (std::size_t y = 0; y < b.size(); ++y) {
    profiles_b.push_back(distance_profile(b, y));
    diag_b.push_back(diagonal_values(b, y));
  }
  for (std::size_t x = 0; x < a.size(); ++x) {
    std::vector<Rational> pa = distance_profile(a, x);
    std::vector<Rational> da = diagonal_values(a, x);
    for (std::size_t y = 0; y < b.size(); ++y) {
      if (da == diag_b[y] && std::includes(profiles_b[y].begin(), profiles_b[y].end(), pa.begin(), pa.end())) {
        candidates[x].push_back(y);
      }
    }
  }
  std::vector<std::size_t> map;
  std::vector<bool> used(b.size(), false);
  search(a, b, candidates, map, used, limit, out);
  return out;
}

bool isomorphic(const FinStructure& a, const FinStructure& b) {
  return a.size() == b.size() && !find_embeddings(a, b, 1).empty();
}

std::optional<std::size_t> PartialIso::apply(std::size_t x) const {
  auto it = std::lower_bound(dom.begin(), dom.end(), x);
  if (it == dom.end() || *it != x) return std::nullopt;
  return image[static_cast<std::size_t>(it - dom.begin())];
}

std::vector<std::size_t> PartialIso::range() const {
  std::vector<std::size_t> r = image;
  std::sort(r.begin(), r.end());
  return r;
}

bool composable(const PartialIso& p, const PartialIso& q) { return q.range() == p.dom; }

PartialIso compose(const PartialIso& p, const PartialIso& q) {
  if (!composable(p, q)) throw PreconditionError("compose: range(q) differs from dom(p)");
  PartialIso out{q.dom, {}};
  for (std::size_t y : q.image) out.image.push_back(*p.apply(y));
  return out;
}

bool is_partial_iso(const FinStructure& s, const PartialIso& p) {
  if (p.dom.size() != p.image.size()) return false;
  if (!std::is_sorted(p.dom.begin(), p.dom.end())) return false;
  if (p.dom.empty()) return true;
  FinStructure sub = substructure(s, p.dom);
  return is_embedding(sub, s, Embedding{p.image});
}

std::vector<PartialIso> enumerate_partial_isos(const FinStructure& s) {
  const std::size_t n = s.size();
  if (n > 20) throw BudgetExceeded("partial isomorphism enumeration limited to 20 points");
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> d;
    for (std::size_t x = 0; x < n; ++x) {
      if (mask >> x & 1) d.push_back(x);
    }
    subsets.push_back(std::move(d));
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  std::vector<PartialIso> out;
  for (const auto& d : subsets) {
    if (d.empty()) {
      out.push_back({});
      continue;
    }
    FinStructure sub = substructure(s, d);
    for (Embedding& e : find_embeddings(sub, s)) out.push_back({d, std::move(e.map)});
  }
  return out;
}

std::vector<std::vector<std::size_t>> automorphisms(const FinStructure& s) {
  std::vector<std::vector<std::size_t>> out;
  for (Embedding& e : find_embeddings(s, s)) out.push_back(std::move(e.map));
  return out;
}

}  // namespace cstruct
