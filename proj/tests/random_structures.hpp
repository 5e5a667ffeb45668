#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cstruct/induced.hpp"
#include "cstruct/structure.hpp"
#include "test_support.hpp"

namespace testing_support {

inline std::vector<std::string> point_ids(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < n; ++k) ids.push_back(prefix + std::to_string(k));
  return ids;
}

// Shortest-path closure of random edge weights drawn from `weights`.
inline std::vector<Rational> random_metric(Rng& rng, std::size_t n, const std::vector<Rational>& weights) {
  std::vector<Rational> d(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) d[x * n + y] = d[y * n + x] = rng.pick(weights);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        Rational via = d[x * n + k] + d[k * n + y];
        if (via < d[x * n + y]) d[x * n + y] = via;
      }
    }
  }
  return d;
}

// Random partial structure: metric from `weights`, each relation defined on
// a random subset of tuples with values on the given grid. Not necessarily
// Lipschitz.
inline cstruct::PartialStructure random_partial(Rng& rng, const cstruct::SignaturePtr& sig, std::size_t n,
                                                const std::vector<Rational>& weights,
                                                const std::vector<Rational>& values, double density) {
  cstruct::PartialStructure p(sig, point_ids(n), random_metric(rng, n, weights));
  for (std::size_t r = 0; r < sig->size(); ++r) {
    for (auto& v : p.rel_values(r)) {
      if (rng.coin(density)) v = rng.pick(values);
    }
  }
  return p;
}

// Random valid partial structure by rejection, thinning the domain on failure.
inline cstruct::PartialStructure random_valid_partial(Rng& rng, const cstruct::SignaturePtr& sig, std::size_t n,
                                                      const std::vector<Rational>& weights,
                                                      const std::vector<Rational>& values, double density) {
  cstruct::PartialStructure p = random_partial(rng, sig, n, weights, values, density);
  while (auto v = cstruct::lipschitz_violation(p)) {
    p.rel_values(v->relation)[cstruct::encode_tuple(rng.coin() ? v->a : v->b, n)].reset();
  }
  return p;
}

inline cstruct::FinStructure random_valid_structure(Rng& rng, const cstruct::SignaturePtr& sig, std::size_t n,
                                                    const std::vector<Rational>& weights,
                                                    const std::vector<Rational>& values, double density = 0.3) {
  return cstruct::conservative_extension(random_valid_partial(rng, sig, n, weights, values, density));
}

}  // namespace testing_support
