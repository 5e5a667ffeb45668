#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "cstruct/structure.hpp"

namespace cstruct {

struct ValuePair {
  std::vector<Rational> delta;  // ascending, positive
  std::vector<Rational> v;      // ascending, in [0, 1], contains 0
  friend bool operator==(const ValuePair&, const ValuePair&) = default;
};

bool is_distance_value_set(const std::vector<Rational>& delta);

// Human-readable reasons why (delta, v) is not a good value pair; empty if it is.
std::vector<std::string> value_pair_violations(const ValuePair& vp, const Signature& sig);
inline bool is_good_value_pair(const ValuePair& vp, const Signature& sig) {
  return value_pair_violations(vp, sig).empty();
}

// Smallest distance value set containing `p` with supremum `sup`.
std::vector<Rational> close_distance_set(const std::vector<Rational>& p, const Rational& sup);

// Least V containing w and 0, closed under v -> v - u(delta) when positive.
ValuePair close_value_pair(const std::vector<Rational>& delta, const std::vector<Rational>& w, const Signature& sig);

ValuePair value_pair_for(const FinStructure& s);

bool is_valued(const FinStructure& s, const ValuePair& vp);

// All valid (delta, v)-valued one-point extensions of `a`; the new point is
// last. Distinct outputs are never identified by the identity-on-a map, so
// no further deduplication is needed. Throws BudgetExceeded past `budget`
// search nodes.
std::vector<FinStructure> enumerate_one_point_extensions(const FinStructure& a, const ValuePair& vp,
                                                         std::size_t budget = 1'000'000);

// Whether point y of s realizes the last point of `ext` over the points
// `base` of s (ext's other points correspond to base in order).
bool realizes(const FinStructure& s, const std::vector<std::size_t>& base, const FinStructure& ext, std::size_t y);

struct Task {
  std::vector<std::size_t> base;  // indices into the current structure
  FinStructure ext;               // one-point extension of the base substructure
};

struct TaskRecord {
  Task task;
  std::size_t point;  // realizing point of the current structure
  bool skipped;       // already realized before the step
};

enum class Realization {
  Canonical,   // max-distance strong amalgam for every task
  Saturating,  // prefers distances that realize unmet singleton tasks; skips realized tasks
};

struct LimitOptions {
  std::size_t size_cap = 1;
  Realization mode = Realization::Canonical;
  std::size_t catalog_budget = 1'000'000;
};

class LimitApprox {
 public:
  LimitApprox(SignaturePtr sig, ValuePair vp, LimitOptions opts = {});

  const FinStructure& current() const { return current_; }
  const std::deque<Task>& pending() const { return pending_; }
  const std::vector<TaskRecord>& task_log() const { return log_; }
  std::size_t round() const { return round_; }
  const ValuePair& value_pair() const { return vp_; }
  const LimitOptions& options() const { return opts_; }

  // Processes the oldest pending task. Returns false when nothing is pending.
  bool step();

 private:
  void enqueue_for(std::size_t new_point);
  std::vector<Rational> saturating_distances(const Task& t) const;
  FinStructure grow(const Task& t, const std::vector<Rational>& to_new) const;
  FinStructure grow_canonical(const Task& t) const;

  ValuePair vp_;
  LimitOptions opts_;
  FinStructure current_;
  std::deque<Task> pending_;
  std::vector<TaskRecord> log_;
  std::size_t round_ = 0;
};

LimitApprox limit_step(LimitApprox st);

struct ExtensionReport {
  std::size_t total = 0;
  std::size_t satisfied = 0;
  std::vector<Task> unmet;
  bool all_satisfied() const { return unmet.empty(); }
};

ExtensionReport check_extension_property(const FinStructure& s, const ValuePair& vp, std::size_t m,
                                         std::size_t budget = 1'000'000);

// All subsets of {0..n-1} of size <= m, by size then lexicographically.
std::vector<std::vector<std::size_t>> small_subsets(std::size_t n, std::size_t m);

}  // namespace cstruct
