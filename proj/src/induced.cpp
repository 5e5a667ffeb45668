#include "cstruct/induced.hpp"

#include "cstruct/error.hpp"

namespace cstruct {

PseudoMetricMatrix induced_du(std::size_t n, const std::vector<Rational>& dist, const Modulus& u) {
  PseudoMetricMatrix m(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) m(x, y) = x == y ? ExtRational(0) : u.eval(dist[x * n + y]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      if (m(x, k).is_infinite()) continue;
      for (std::size_t y = 0; y < n; ++y) {
        ExtRational via = m(x, k) + m(k, y);
        if (via < m(x, y)) m(x, y) = via;
      }
    }
  }
  return m;
}

std::vector<PseudoMetricMatrix> induced_du_all(std::size_t n, const std::vector<Rational>& dist, const Signature& sig,
                                               std::size_t r) {
  std::vector<PseudoMetricMatrix> out;
  for (std::size_t i = 0; i < sig[r].arity; ++i) {
    // Arguments often share a modulus; reuse the matrix.
    bool reused = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (sig.modulus(r, j) == sig.modulus(r, i)) {
        out.push_back(out[j]);
        reused = true;
        break;
      }
    }
    if (!reused) out.push_back(induced_du(n, dist, sig.modulus(r, i)));
  }
  return out;
}

ExtRational d_R(const Tuple& x, const Tuple& y, const std::vector<PseudoMetricMatrix>& per_coordinate) {
  if (x.size() != y.size() || x.size() != per_coordinate.size()) throw PreconditionError("d_R: arity mismatch");
  ExtRational sum(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += per_coordinate[i](x[i], y[i]);
    if (sum.is_infinite()) break;
  }
  return sum;
}

PartialStructure::PartialStructure(SignaturePtr sig, std::vector<std::string> points, std::vector<Rational> dist)
    : sig_(std::move(sig)), points_(std::move(points)), dist_(std::move(dist)) {
  if (dist_.size() != points_.size() * points_.size()) throw PreconditionError("distance matrix has the wrong shape");
  for (std::size_t r = 0; r < sig_->size(); ++r) rels_.emplace_back(tuple_count(points_.size(), (*sig_)[r].arity));
}

PartialStructure PartialStructure::from_total(const FinStructure& s) {
  PartialStructure p(s.signature_ptr(), s.points(), s.dist_matrix());
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    for (std::size_t idx = 0; idx < s.rel_values(r).size(); ++idx) p.rels_[r][idx] = s.rel_values(r)[idx];
  }
  return p;
}

std::optional<LipschitzViolation> lipschitz_violation(const PartialStructure& x) {
  const std::size_t n = x.size();
  for (std::size_t r = 0; r < x.signature().size(); ++r) {
    const std::size_t arity = x.signature()[r].arity;
    const auto& vals = x.rel_values(r);
    std::vector<std::size_t> dom;
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
      if (vals[idx]) dom.push_back(idx);
    }
    if (dom.size() < 2) continue;
    auto per = induced_du_all(n, x.dist_matrix(), x.signature(), r);
    std::vector<Tuple> tuples;
    for (std::size_t idx : dom) tuples.push_back(decode_tuple(idx, n, arity));
    for (std::size_t a = 0; a < dom.size(); ++a) {
      for (std::size_t b = a + 1; b < dom.size(); ++b) {
        Rational diff = abs_diff(*vals[dom[a]], *vals[dom[b]]);
        if (diff == 0) continue;
        ExtRational bound = d_R(tuples[a], tuples[b], per);
        if (ExtRational(diff) > bound) return LipschitzViolation{r, tuples[a], tuples[b], diff, bound};
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_partial(const PartialStructure& x) {
  auto metric = validate_metric(x.size(), x.dist_matrix(), true);
  if (!metric.empty()) return "distance matrix is not a metric (" + to_string(metric.front().kind) + ")";
  for (std::size_t r = 0; r < x.signature().size(); ++r) {
    for (const auto& v : x.rel_values(r)) {
      if (v && (*v < 0 || *v > 1)) return "relation value outside [0,1] in " + x.signature()[r].name;
    }
  }
  if (auto v = lipschitz_violation(x)) {
    auto tup = [&](const Tuple& t) {
      std::string o = "(";
      for (std::size_t k = 0; k < t.size(); ++k) o += (k ? "," : "") + x.points()[t[k]];
      return o + ")";
    };
    return "relation " + x.signature()[v->relation].name + " is not 1-Lipschitz on its domain: |R" + tup(v->a) +
           " - R" + tup(v->b) + "| = " + format_rational(v->diff) + " > d_R = " + format_ext(v->bound);
  }
  return std::nullopt;
}

FinStructure conservative_extension(const PartialStructure& x, bool check_precondition) {
  if (check_precondition) {
    if (auto problem = check_partial(x)) throw PreconditionError("conservative extension: " + *problem);
  }
  const std::size_t n = x.size();
  std::vector<std::vector<Rational>> rels;
  for (std::size_t r = 0; r < x.signature().size(); ++r) {
    const std::size_t arity = x.signature()[r].arity;
    const auto& vals = x.rel_values(r);
    std::vector<std::size_t> dom;
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
      if (vals[idx]) dom.push_back(idx);
    }
    std::vector<Rational> out(vals.size());
    if (!dom.empty()) {
      auto per = induced_du_all(n, x.dist_matrix(), x.signature(), r);
      std::vector<Tuple> dom_tuples;
      for (std::size_t idx : dom) dom_tuples.push_back(decode_tuple(idx, n, arity));
      for (std::size_t idx = 0; idx < vals.size(); ++idx) {
        if (vals[idx]) {
          out[idx] = *vals[idx];
          continue;
        }
        Tuple t = decode_tuple(idx, n, arity);
        Rational best = 0;
        for (std::size_t k = 0; k < dom.size(); ++k) {
          const Rational& v = *vals[dom[k]];
          if (v <= best) continue;
          ExtRational d = d_R(t, dom_tuples[k], per);
          if (d.is_infinite()) continue;
          Rational cand = v - d.value();
          if (cand > best) best = cand;
        }
        out[idx] = best;
      }
    }
    rels.push_back(std::move(out));
  }
  return FinStructure(x.signature_ptr(), x.points(), x.dist_matrix(), std::move(rels));
}

}  // namespace cstruct
