#include "cstruct/katetov.hpp"

#include <algorithm>
#include <optional>

#include "cstruct/amalgam.hpp"
#include "cstruct/error.hpp"
#include "cstruct/induced.hpp"
#include "cstruct/moduli.hpp"

namespace cstruct {

OnePointExt::OnePointExt(FinStructure base, FinStructure ext) : base_(std::move(base)), ext_(std::move(ext)) {
  const std::size_t n = base_.size();
  if (ext_.size() != n + 1) throw PreconditionError("a one-point extension has exactly one new point");
  if (!(ext_.signature() == base_.signature())) throw PreconditionError("extension over a different signature");
  if (n > 0) {
    std::vector<std::size_t> old(n);
    for (std::size_t k = 0; k < n; ++k) old[k] = k;
    if (!(substructure(ext_, old) == base_)) throw PreconditionError("extension does not restrict to its base");
  }
  auto v = validate(ext_, true);
  if (!v.empty()) throw PreconditionError("invalid extension: " + describe(ext_, v[0]));
}

OnePointExt extension_from_support(const FinStructure& base, const std::vector<std::size_t>& support,
                                   const FinStructure& fx) {
  if (fx.size() != support.size() + 1) throw PreconditionError("fx must add one point to the support");
  FinStructure f = support.empty() ? FinStructure::empty(base.signature_ptr()) : substructure(base, support);
  std::vector<std::size_t> sup_in_fx(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) sup_in_fx[k] = k;
  AmalgamResult a = strong_amalgam(f, base, fx, Embedding{support}, Embedding{sup_in_fx});
  std::vector<std::size_t> order = a.iota.map;
  order.push_back(a.tau.map[support.size()]);
  FinStructure s = substructure(a.amalgam, order);
  std::vector<std::string> ids = base.points();
  ids.push_back(fx.id(support.size()));
  return OnePointExt(base, FinStructure(s.signature_ptr(), std::move(ids), s.dist_matrix(), s.rel_tensors()));
}

namespace {

void require_same_base(const OnePointExt& x, const OnePointExt& y) {
  if (!(x.base() == y.base())) throw PreconditionError("extensions over different bases");
}

}  // namespace

KatetovValue lambda(const OnePointExt& x, const OnePointExt& y) {
  require_same_base(x, y);
  if (x.base().size() == 0) return {0, true};
  Rational best = 0;
  for (std::size_t z = 0; z < x.base().size(); ++z) best = std::max(best, abs_diff(x.dist_to(z), y.dist_to(z)));
  return {best, false};
}

KatetovValue mu(const OnePointExt& x, const OnePointExt& y) {
  require_same_base(x, y);
  const Signature& sig = x.base().signature();
  KatetovValue out{0, false};
  const std::size_t nx = x.new_index();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (sig[r].arity != 1) continue;
    Rational diff = abs_diff(x.structure().rel(r, {nx}), y.structure().rel(r, {nx}));
    if (diff == 0) continue;
    PseudoInverse inv(sig.modulus(r, 0));
    PseudoInverse::Value v = inv(diff);
    out.value = std::max(out.value, v.value);
    out.flagged = out.flagged || v.clamped;
  }
  return out;
}

KatetovValue rho(const OnePointExt& x, const OnePointExt& y) {
  require_same_base(x, y);
  const Signature& sig = x.base().signature();
  SignatureClassification cls = classify(sig);
  const std::size_t total = x.structure().size(), nx = x.new_index();
  KatetovValue out{0, x.base().size() == 0};
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    if (arity < 2) continue;
    std::vector<Rational> k(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      const auto& c = cls.at(r, i).lipschitz_constant;
      if (!c) throw PreconditionError("rho needs linear moduli for '" + sig[r].name + "'");
      k[i] = *c;
    }
    for (std::size_t idx = 0; idx < tuple_count(total, arity); ++idx) {
      Tuple t = decode_tuple(idx, total, arity);
      Rational norm = 0;
      for (std::size_t i = 0; i < arity; ++i) {
        if (t[i] == nx) norm += k[i];
      }
      if (norm == 0) continue;
      Rational diff = abs_diff(x.structure().rel_values(r)[idx], y.structure().rel_values(r)[idx]);
      out.value = std::max(out.value, Rational(diff / norm));
    }
  }
  return out;
}

ExtensionDistance dE(const OnePointExt& x, const OnePointExt& y) {
  ExtensionDistance d{mu(x, y), rho(x, y), lambda(x, y), 0};
  d.value = std::max({d.mu.value, d.rho.value, d.lambda.value});
  return d;
}

bool equivalent(const OnePointExt& x, const OnePointExt& y) {
  require_same_base(x, y);
  return x.structure().dist_matrix() == y.structure().dist_matrix() &&
         x.structure().rel_tensors() == y.structure().rel_tensors();
}

FinStructure two_point_amalgam(const OnePointExt& x, const OnePointExt& y) {
  require_same_base(x, y);
  const Rational d = dE(x, y).value;
  if (d == 0) throw PreconditionError("equivalent extensions have no two-point amalgam");
  const FinStructure& m = x.base();
  const std::size_t n = m.size(), total = n + 2, px = n, py = n + 1;
  std::vector<std::string> ids = m.points();
  ids.push_back(x.new_id());
  std::string yid = y.new_id();
  while (std::find(ids.begin(), ids.end(), yid) != ids.end()) yid += "'";
  ids.push_back(yid);
  std::vector<Rational> dist(total * total);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) dist[a * total + b] = m.dist(a, b);
    dist[a * total + px] = dist[px * total + a] = x.dist_to(a);
    dist[a * total + py] = dist[py * total + a] = y.dist_to(a);
  }
  dist[px * total + py] = dist[py * total + px] = d;
  PartialStructure part(m.signature_ptr(), std::move(ids), std::move(dist));
  const Signature& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    for (std::size_t idx = 0; idx < tuple_count(n + 1, arity); ++idx) {
      Tuple t = decode_tuple(idx, n + 1, arity);
      part.set(r, t, x.structure().rel_values(r)[idx]);
      for (auto& p : t) {
        if (p == n) p = py;
      }
      part.set(r, t, y.structure().rel_values(r)[idx]);
    }
  }
  return conservative_extension(part);
}

bool is_support(const OnePointExt& x, const std::vector<std::size_t>& f) {
  const FinStructure& m = x.base();
  const FinStructure& s = x.structure();
  const std::size_t n = m.size(), total = n + 1, nx = n;
  for (std::size_t z : f) {
    if (z >= n) throw PreconditionError("support point outside the base");
  }
  for (std::size_t y = 0; y < n; ++y) {
    std::optional<Rational> best;
    for (std::size_t z : f) {
      Rational via = s.dist(nx, z) + m.dist(z, y);
      if (!best || via < *best) best = via;
    }
    if (!best || *best != s.dist(nx, y)) return false;
  }
  std::vector<bool> in_fx(total, false);
  for (std::size_t z : f) in_fx[z] = true;
  in_fx[nx] = true;
  const Signature& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t arity = sig[r].arity;
    if (arity < 2) continue;
    auto per = induced_du_all(total, s.dist_matrix(), sig, r);
    std::vector<Tuple> dom;
    for (std::size_t idx = 0; idx < tuple_count(total, arity); ++idx) {
      Tuple v = decode_tuple(idx, total, arity);
      bool in_m = std::none_of(v.begin(), v.end(), [&](std::size_t p) { return p == nx; });
      bool in_f = std::all_of(v.begin(), v.end(), [&](std::size_t p) { return in_fx[p]; });
      if (in_m || in_f) dom.push_back(std::move(v));
    }
    for (std::size_t idx = 0; idx < tuple_count(total, arity); ++idx) {
      Tuple u = decode_tuple(idx, total, arity);
      Rational best = 0;
      for (const Tuple& v : dom) {
        ExtRational dv = d_R(u, v, per);
        if (dv.is_infinite()) continue;
        best = std::max(best, Rational(s.rel(r, v) - dv.value()));
      }
      if (best != s.rel_values(r)[idx]) return false;
    }
  }
  return true;
}

}  // namespace cstruct
