#include <random>

#include "doctest.h"
#include "ramsey/enumerations.hpp"
#include "test_support.hpp"

using namespace ramsey;

namespace {

TreeEnumeration random_enumeration(std::mt19937& rng, Stage start) {
  TreeEnumeration u;
  u.append({{}}, start);
  std::vector<Str> layer{{}};
  Stage s = start;
  const std::size_t depth = rng() % 5;
  for (std::size_t x = 1; x <= depth; ++x) {
    std::vector<Str> next;
    for (const auto& a : layer)
      for (Num v = a.empty() ? 0 : a.back() + 1; v < 12; ++v)
        if (rng() % 4 == 0) {
          Str b = a;
          b.push_back(v);
          next.push_back(b);
        }
    if (next.empty()) break;
    s += 1 + rng() % 3;
    u.append(next, s);
    layer = u.level(x);
  }
  return u;
}

// Extendible by scanning every level at or below the top for descendants.
bool extendible_scan(const TreeEnumeration& u, const Str& sigma, Stage s) {
  std::optional<std::size_t> top;
  for (std::size_t x = 0; x < u.size(); ++x)
    if (u.stage_of(x) <= s) top = x;
  if (!top) return false;
  for (const auto& a : u.level(*top))
    if (a.size() >= sigma.size() && Str(a.begin(), a.begin() + static_cast<long>(sigma.size())) == sigma)
      return true;
  return false;
}

}  // namespace

TEST_CASE("looks_extendible") {
  TreeEnumeration root;
  root.append({{}}, 1);
  CHECK(looks_extendible(root, {}, 1));
  CHECK_FALSE(looks_extendible(root, {}, 0));
  TreeEnumeration u;
  u.append({{}}, 1);
  u.append({{2}, {5}}, 2);
  u.append({{2, 3}}, 4);
  CHECK(looks_extendible(u, {5}, 3));
  CHECK_FALSE(looks_extendible(u, {5}, 4));
  CHECK(looks_extendible(u, {2}, 4));
  CHECK_FALSE(looks_extendible(u, {7}, 4));

  std::mt19937 rng(3);
  for (int it = 0; it < 300; ++it) {
    auto e = random_enumeration(rng, 1);
    REQUIRE_FALSE(e.validate());
    for (Stage s = 0; s < 16; ++s)
      for (std::size_t x = 0; x < e.size(); ++x)
        for (const auto& a : e.level(x)) {
          CHECK(looks_extendible(e, a, s) == extendible_scan(e, a, s));
          Str pre(a.begin(), a.begin() + static_cast<long>(a.size() / 2));
          CHECK(looks_extendible(e, pre, s) == extendible_scan(e, pre, s));
        }
  }
}

TEST_CASE("looks_infinite") {
  UniformSequence seq;
  seq.members.resize(2);
  seq.members[0].append({{}}, 1);
  seq.members[0].append({{4}}, 2);
  CHECK(looks_infinite(seq, 0, 2));
  seq.members[1].append({{}}, 5);
  CHECK(looks_infinite(seq, 0, 4));
  CHECK_FALSE(looks_infinite(seq, 0, 5));
  CHECK(looks_infinite(seq, 1, 5));
  CHECK(seq.active(4) == 0u);
  CHECK(seq.active(5) == 1u);
  CHECK_FALSE(seq.active(0));

  std::mt19937 rng(9);
  for (int it = 0; it < 200; ++it) {
    UniformSequence r;
    Stage start = 1 + rng() % 2;
    const std::size_t m = 1 + rng() % 4;
    for (std::size_t l = 0; l < m; ++l) {
      r.members.push_back(random_enumeration(rng, std::max<Stage>(start, l + 1)));
      start = r.members.back().stage_of(r.members.back().size() - 1) + 1 + rng() % 2;
    }
    REQUIRE_FALSE(r.validate());
    CHECK(r.sequential());
    for (Stage s = 0; s < 30; ++s)
      for (std::size_t l = 0; l < m; ++l) {
        bool later = false;
        for (std::size_t lp = l + 1; lp < m; ++lp) later = later || r.members[lp].stage_of(0) <= s;
        CHECK(looks_infinite(r, l, s) == (r.members[l].stage_of(0) <= s && !later));
      }
  }
}

TEST_CASE("validation rejects malformed enumerations") {
  TreeEnumeration bad;
  bad.append({{1}}, 1);
  CHECK(bad.validate());
  TreeEnumeration orphan;
  orphan.append({{}}, 1);
  orphan.append({{2}}, 2);
  orphan.append({{3, 4}}, 3);
  CHECK(orphan.validate());
  TreeEnumeration dec;
  dec.append({{}}, 1);
  dec.append({{3}}, 2);
  dec.append({{3, 3}}, 3);
  CHECK(dec.validate());
  UniformSequence early;
  early.members.resize(2);
  early.members[0].append({{}}, 1);
  early.members[1].append({{}}, 1);
  CHECK(early.validate());
}

TEST_CASE("one level: members enumerate universe segments") {
  SearchBudget b;
  b.maxTrees = 4;
  auto res = canonical_search({make_predicate("card_ge", {3})}, b, default_universe(15));
  REQUIRE(res.found);
  auto seq = from_canonical_trace(res.trace, 0);
  CHECK_FALSE(seq.validate());
  CHECK(seq.sequential());
  REQUIRE(seq.members.size() == 1);
  const auto& u = seq.members[0];
  CHECK(u.size() == 4);
  CHECK(u.level(3) == std::vector<Str>{{0, 1, 2}});
  CHECK(u.closed_at());
}

TEST_CASE("two levels: replay of the generated subtrees") {
  SearchBudget b;
  b.maxTrees = 8;
  const auto phi = make_predicate("card_ge", {2});
  auto res = canonical_search({phi, phi}, b, default_universe(15));
  REQUIRE(res.found);
  auto seq = from_canonical_trace(res.trace, 1);
  CHECK_FALSE(seq.validate());
  CHECK(seq.sequential());
  REQUIRE(seq.members.size() == res.forest.levels[1].size());
  // Replay: member l lists the nodes of T_{1,l} by length and then closes.
  for (std::size_t l = 0; l < seq.members.size(); ++l) {
    const auto& t = res.forest.levels[1][l];
    const auto& u = seq.members[l];
    REQUIRE(u.size() == t.height() + 1);
    for (std::size_t x = 0; x < u.size(); ++x) {
      std::vector<Str> expect;
      for (const auto& a : t.nodes)
        if (a.size() == x) expect.push_back(a);
      CHECK(u.level(x) == expect);
    }
    REQUIRE(u.closed_at());
    if (l + 1 < seq.members.size()) CHECK(*u.closed_at() < seq.members[l + 1].stage_of(0));
  }
  CHECK(seq.members[0].size() == 3);  // closes at depth 2

  auto seq0 = from_canonical_trace(res.trace, 0);
  CHECK_FALSE(seq0.validate());
  CHECK(seq0.members.size() == res.forest.levels[0].size());
}

TEST_CASE("stalled search leaves the last member looking infinite") {
  // "contains an even number": the all-odd path never closes.
  FinSetPredicate even("even", {}, [](const FinSet& f, Stage) {
    return std::any_of(f.begin(), f.end(), [](Num x) { return x % 2 == 0; });
  });
  SearchBudget b;
  FinSet universe;
  for (Num x = 1; x < 12; ++x) universe.push_back(x);
  auto res = canonical_search({even, even}, b, universe);
  REQUIRE_FALSE(res.found);
  auto seq = from_canonical_trace(res.trace, 1);
  CHECK_FALSE(seq.validate());
  REQUIRE(seq.members.size() == 1);
  CHECK_FALSE(seq.members[0].closed_at());
  for (Stage s = seq.members[0].stage_of(0); s < 200; ++s) CHECK(looks_infinite(seq, 0, s));
  // Paths through the open member are increasing: all strings are in Inc.
  for (std::size_t x = 0; x < seq.members[0].size(); ++x)
    for (const auto& a : seq.members[0].level(x)) CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("at most one member stays open") {
  std::mt19937 rng(12);
  for (int it = 0; it < 200; ++it) {
    std::vector<FinSetPredicate> phis;
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t j = 0; j < k; ++j) phis.push_back(oracle::random_predicate(rng));
    SearchBudget b;
    b.maxTrees = 6;
    auto res = canonical_search(phis, b, default_universe(10 + rng() % 6));
    for (std::size_t j = 0; j < k; ++j) {
      auto seq = from_canonical_trace(res.trace, j);
      CHECK_FALSE(seq.validate());
      CHECK(seq.sequential());
      for (std::size_t l = 0; l + 1 < seq.members.size(); ++l) CHECK(seq.members[l].closed_at());
    }
  }
}

TEST_CASE("trivial sequence and text round trip") {
  auto t = trivial_sequence(5);
  CHECK_FALSE(t.validate());
  CHECK(t.members[0].level(3) == std::vector<Str>{{0, 1, 2}});
  CHECK(t.members[0].stage_of(3) == 4);
  CHECK(extendible_terminals(t.members[0], 4) == std::vector<Str>{{0, 1, 2}});
  CHECK(parse_sequence(serialize_sequence(t)) == t);

  SearchBudget b;
  auto res = canonical_search({make_predicate("card_ge", {2}), make_predicate("card_ge", {2})}, b,
                              default_universe(15));
  auto seq = from_canonical_trace(res.trace, 1);
  CHECK(parse_sequence(serialize_sequence(seq)) == seq);
  CHECK_THROWS_AS(parse_sequence("0 ; 1 ; 3 ; <2>\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("0 ; 0 ; 0 ; <>\n"), ParseError);  // stage bound l < s
}
