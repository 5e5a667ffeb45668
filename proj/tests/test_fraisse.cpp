#include <doctest.h>

#include "cstruct/error.hpp"
#include "cstruct/fraisse.hpp"
#include "cstruct/moduli.hpp"
#include "random_structures.hpp"

using namespace cstruct;
using testing_support::Q;

namespace {

SignaturePtr half() { return make_signature({RelationSymbol{"R", 1, {Modulus::linear(ratio(1, 2))}}}); }

ValuePair small_pair() { return {{1, 2}, {0, Q("1/2"), 1}}; }

std::vector<Rational> rv(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(Q(x));
  return out;
}

// Oracle: every assignment of distances and new-tuple values, filtered by validate.
std::size_t brute_force_extensions(const FinStructure& a, const ValuePair& vp) {
  const Signature& sig = a.signature();
  const std::size_t n = a.size(), total = n + 1;
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t idx = 0; idx < tuple_count(total, sig[r].arity); ++idx) {
      Tuple t = decode_tuple(idx, total, sig[r].arity);
      if (std::find(t.begin(), t.end(), n) != t.end()) slots.emplace_back(r, idx);
    }
  }
  std::size_t combos = 1;
  for (std::size_t k = 0; k < n; ++k) combos *= vp.delta.size();
  for (std::size_t k = 0; k < slots.size(); ++k) combos *= vp.v.size();
  std::size_t count = 0;
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    std::vector<Rational> dist(total * total);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) dist[x * total + y] = a.dist(x, y);
    }
    for (std::size_t k = 0; k < n; ++k) {
      dist[k * total + n] = dist[n * total + k] = vp.delta[c % vp.delta.size()];
      c /= vp.delta.size();
    }
    std::vector<std::vector<Rational>> rels(sig.size());
    for (std::size_t r = 0; r < sig.size(); ++r) {
      rels[r].resize(tuple_count(total, sig[r].arity));
      for (std::size_t idx = 0; idx < rels[r].size(); ++idx) {
        Tuple t = decode_tuple(idx, total, sig[r].arity);
        if (std::find(t.begin(), t.end(), n) == t.end()) rels[r][idx] = a.rel(r, t);
      }
    }
    for (auto [r, idx] : slots) {
      rels[r][idx] = vp.v[c % vp.v.size()];
      c /= vp.v.size();
    }
    std::vector<std::string> ids = a.points();
    ids.push_back("new");
    if (is_valid(FinStructure(a.signature_ptr(), ids, dist, rels))) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("close_value_pair examples") {
  auto sig = half();
  CHECK(close_value_pair({1, 2}, {1}, *sig).v == rv({"0", "1/2", "1"}));
  CHECK(close_value_pair({1, 2}, {0}, *sig).v == rv({"0"}));
  auto steep = make_signature({RelationSymbol{"R", 1, {Modulus::linear(2)}}});
  CHECK(close_value_pair({1}, {1}, *steep).v == rv({"0", "1"}));
  CHECK_THROWS_AS(close_value_pair({1, 3}, {1}, *sig), PreconditionError);  // 1 + 1 = 2 missing
  CHECK_THROWS_AS(close_value_pair({1}, {1}, *sig), PreconditionError);     // u(1) < 1
  auto concave = ModulusBuilder().affine(1, 0, Q("1/2"), false).last_affine(Q("1/2"), Q("1/4")).build();
  auto bad = make_signature({RelationSymbol{"R", 1, {concave}}});
  CHECK_THROWS_AS(close_value_pair({2}, {1}, *bad), PreconditionError);
}

TEST_CASE("close_value_pair is minimal") {
  auto sig = half();
  std::vector<std::vector<Rational>> ws{rv({"1"}), rv({"3/4"}), rv({"1", "1/3"}), rv({"5/6", "2/5"})};
  for (const std::vector<Rational>& delta : {std::vector<Rational>{1, 2}, rv({"1/2", "1", "3/2", "2"})}) {
    for (const auto& w : ws) {
      ValuePair vp = close_value_pair(delta, w, *sig);
      CHECK(is_good_value_pair(vp, *sig));
      for (std::size_t k = 0; k < vp.v.size(); ++k) {
        if (vp.v[k] == 0 || std::find(w.begin(), w.end(), vp.v[k]) != w.end()) continue;
        ValuePair smaller = vp;
        smaller.v.erase(smaller.v.begin() + static_cast<long>(k));
        CHECK_FALSE(is_good_value_pair(smaller, *sig));
      }
    }
  }
}

TEST_CASE("distance value sets") {
  CHECK(close_distance_set({1}, 2) == std::vector<Rational>{1, 2});
  CHECK(close_distance_set({Q("2/3")}, 2) == rv({"2/3", "4/3", "2"}));
  CHECK(is_distance_value_set({1, 2}));
  CHECK_FALSE(is_distance_value_set({1, 3}));
  CHECK_FALSE(is_distance_value_set({}));
}

TEST_CASE("value_pair_for and is_valued") {
  auto sig = half();
  StructureBuilder b(sig, {"a", "b"});
  b.dist(0, 1, 1);
  FinStructure s = b.build();
  ValuePair vp = value_pair_for(s);
  CHECK(vp.delta == std::vector<Rational>{1, 2});
  CHECK(vp.v == rv({"0"}));
  CHECK(is_valued(s, vp));
  StructureBuilder far(sig, {"a", "b"});
  far.dist(0, 1, 3);
  CHECK_FALSE(is_valued(far.build(), vp));
  StructureBuilder odd(sig, {"a", "b"});
  odd.dist(0, 1, 1).rel(0, {0}, Q("1/3"));
  CHECK_FALSE(is_valued(odd.build(), vp));

  auto mixed = make_signature({RelationSymbol{"T", 1, {Modulus::linear(1)}},
                               RelationSymbol{"S", 2, {Modulus::linear(2), Modulus::linear(1)}}});
  testing_support::Rng rng(99);
  for (int round = 0; round < 40; ++round) {
    FinStructure r = testing_support::random_valid_structure(rng, mixed, static_cast<std::size_t>(rng.uniform(1, 4)),
                                                             rv({"1/4", "1/2", "1"}), rv({"0", "1/3", "3/4", "1"}));
    ValuePair p = value_pair_for(r);
    CHECK(is_good_value_pair(p, *mixed));
    CHECK(is_valued(r, p));
  }
}

TEST_CASE("enumerate_one_point_extensions") {
  auto sig = half();
  ValuePair vp = small_pair();
  auto none = enumerate_one_point_extensions(FinStructure::empty(sig), vp);
  REQUIRE(none.size() == 3);
  CHECK(none[0].rel(0, {0}) == 0);

  StructureBuilder one(sig, {"a"});
  auto exts = enumerate_one_point_extensions(one.build(), vp);
  // From R(a) = 0: distance 1 allows values 0, 1/2; distance 2 allows all three.
  CHECK(exts.size() == 5);
  CHECK(exts.size() == brute_force_extensions(one.build(), vp));
  for (const auto& e : exts) {
    CHECK(is_valid(e));
    CHECK(is_valued(e, vp));
  }
  CHECK(exts.front().dist(0, 1) == 1);
  CHECK(exts.back().dist(0, 1) == 2);

  auto binary = make_signature({RelationSymbol{"S", 2, {Modulus::linear(1), Modulus::linear(1)}}});
  ValuePair bp{{Q("1/2"), 1}, {0, Q("1/2"), 1}};
  testing_support::Rng rng(5);
  for (int round = 0; round < 10; ++round) {
    FinStructure a = testing_support::random_valid_structure(rng, binary, static_cast<std::size_t>(rng.uniform(0, 1)) + 1,
                                                             bp.delta, bp.v);
    if (!is_valued(a, bp)) continue;
    CHECK(enumerate_one_point_extensions(a, bp).size() == brute_force_extensions(a, bp));
  }
  CHECK_THROWS_AS(enumerate_one_point_extensions(one.build(), vp, 3), BudgetExceeded);
}

TEST_CASE("limit_step") {
  auto sig = half();
  ValuePair vp = small_pair();
  for (Realization mode : {Realization::Canonical, Realization::Saturating}) {
    LimitApprox st(sig, vp, LimitOptions{1, mode});
    FinStructure first_task = st.pending().front().ext;
    st = limit_step(st);
    CHECK(st.current().size() == 1);
    CHECK(st.current().rel(0, {0}) == first_task.rel(0, {0}));
    for (int k = 0; k < 30; ++k) {
      FinStructure before = st.current();
      std::size_t queued = st.pending().size();
      REQUIRE(st.step());
      const TaskRecord& rec = st.task_log().back();
      CHECK(is_valid(st.current()));
      CHECK(is_valued(st.current(), vp));
      CHECK(realizes(st.current(), rec.task.base, rec.task.ext, rec.point));
      CHECK(!find_embeddings(rec.task.ext, st.current(), 1).empty());
      std::vector<std::size_t> old(before.size());
      for (std::size_t x = 0; x < old.size(); ++x) old[x] = x;
      if (!old.empty()) CHECK(substructure(st.current(), old) == before);
      if (mode == Realization::Canonical) {
        CHECK_FALSE(rec.skipped);
        CHECK(st.pending().size() >= queued - 1);
      }
    }
  }
}

TEST_CASE("tasks are processed first in, first out") {
  LimitApprox st(half(), small_pair());
  std::vector<std::pair<std::vector<std::size_t>, FinStructure>> order;
  for (const auto& t : st.pending()) order.emplace_back(t.base, t.ext);
  for (int k = 0; k < 40; ++k) {
    std::size_t before = st.pending().size();
    REQUIRE(st.step());
    std::size_t added = st.pending().size() - (before - 1);
    for (std::size_t j = st.pending().size() - added; j < st.pending().size(); ++j) {
      order.emplace_back(st.pending()[j].base, st.pending()[j].ext);
    }
  }
  for (std::size_t k = 0; k < st.task_log().size(); ++k) {
    CHECK(st.task_log()[k].task.base == order[k].first);
    CHECK(st.task_log()[k].task.ext == order[k].second);
  }
}

TEST_CASE("check_extension_property") {
  auto sig = half();
  ValuePair vp = small_pair();
  StructureBuilder one(sig, {"a"});
  ExtensionReport single = check_extension_property(one.build(), vp, 1);
  CHECK_FALSE(single.all_satisfied());
  CHECK(single.total == 8);
  CHECK(single.satisfied == 1);
  CHECK(single.unmet.size() == 7);

  LimitApprox st(sig, vp, LimitOptions{1, Realization::Saturating});
  bool done = false;
  for (int k = 0; k < 200 && !done && st.step(); ++k) {
    done = check_extension_property(st.current(), vp, 1).all_satisfied();
  }
  CHECK(done);
}
