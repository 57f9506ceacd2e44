#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ramsey/coloring.hpp"
#include "test_support.hpp"

using namespace ramsey;

namespace {

PairColoring random_pair(std::mt19937_64& rng, Num n, unsigned k) {
  PairColoring d(n, k);
  std::uniform_int_distribution<unsigned> c(0, k - 1);
  for (Num x = 0; x < n; ++x)
    for (Num y = x + 1; y <= n; ++y) d.set(x, y, c(rng));
  return d;
}

}  // namespace

TEST_CASE("hash_count values and recursion") {
  CHECK(hash_count(0) == 1);
  CHECK(hash_count(1) == 2);
  CHECK(hash_count(2) == 12);
  CHECK(hash_count(3) == 6912);
  for (unsigned k = 1; k <= 4; ++k) {
    std::uint64_t prod = 1;
    for (auto r : tuple_radices(k)) prod *= r;
    CHECK(prod == hash_count(k));
  }
  CHECK_THROWS_AS(hash_count(5), std::overflow_error);
}

TEST_CASE("tuple encoding") {
  std::vector<std::uint64_t> r{3, 2, 2};
  CHECK(encode_tuple({0, 0, 0}, r) == 0);
  CHECK(encode_tuple({2, 1, 1}, r) == 11);
  // index of the tuple in lexicographic enumeration
  std::uint64_t index = 0;
  for (std::uint64_t a = 0; a < 3; ++a)
    for (std::uint64_t b = 0; b < 2; ++b)
      for (std::uint64_t c = 0; c < 2; ++c) {
        CHECK(encode_tuple({a, b, c}, r) == index);
        CHECK(decode_tuple(index, r) == std::vector<std::uint64_t>{a, b, c});
        ++index;
      }
  CHECK(encode_tuple({1, 0, 1}, r) == 5);
  CHECK_THROWS_AS(encode_tuple({3, 0, 0}, r), std::out_of_range);
  auto r3 = tuple_radices(3);
  for (std::uint64_t code = 0; code < hash_count(3); code += 7)
    CHECK(encode_tuple(decode_tuple(code, r3), r3) == code);
}

TEST_CASE("digit family worked values") {
  UnaryColoring e{{3, 9, 0, 11}, 12};
  auto f = digit_family(e, 2);
  CHECK(f.width == 4);
  std::vector<unsigned> d3, d9, d0;
  for (std::size_t s = 0; s < 6; ++s) {
    d3.push_back(f.digit(s, 0));
    d9.push_back(f.digit(s, 1));
    d0.push_back(f.digit(s, 2));
  }
  CHECK(d3 == std::vector<unsigned>{0, 0, 1, 1, 0, 0});
  CHECK(d9 == std::vector<unsigned>{1, 0, 0, 1, 0, 0});
  CHECK(d0 == std::vector<unsigned>{0, 0, 0, 0, 0, 0});
  for (unsigned k = 1; k <= 3; ++k) {
    UnaryColoring z{{0}, static_cast<unsigned>(hash_count(k))};
    CHECK(digit_family(z, k).width ==
          static_cast<unsigned>(std::floor(std::log2(static_cast<double>(hash_count(k))))) + 1);
  }
}

TEST_CASE("guess_limit") {
  PairColoring d(12, 2);
  for (Num x = 0; x < 12; ++x)
    for (Num y = x + 1; y <= 12; ++y) d.set(x, y, 0);
  CHECK(guess_limit(d, 3, 10) == 0U);
  CHECK_FALSE(guess_limit(d, 5, 5).has_value());
  CHECK_FALSE(guess_limit(d, 5, 2).has_value());
  PairColoring flip(12, 2);
  for (Num y = 1; y <= 12; ++y) flip.set(0, y, y >= 7 ? 1 : 0);
  CHECK(guess_limit(flip, 0, 6) == 0U);
  CHECK(guess_limit(flip, 0, 10) == 1U);
  // staged: only pairs converged by stage s count
  PairColoring staged(10, 3);
  for (Num y = 1; y <= 10; ++y) staged.set(0, y, y % 3, 2 * y);
  std::mt19937_64 rng(1);
  for (Stage s = 0; s < 25; ++s) {
    std::optional<unsigned> ref;
    for (Num y = 1; y <= 10 && y <= s; ++y)
      if (2 * y <= s) ref = y % 3;
    CHECK(guess_limit(staged, 0, s) == ref);
  }
  CHECK_FALSE(staged.check_convergence().has_value());
  staged.clear(0, 4);
  CHECK(staged.check_convergence().has_value());
}

TEST_CASE("homogeneity checks agree with pair scan") {
  std::mt19937_64 rng(8);
  PairColoring constant(10, 2);
  for (Num x = 0; x < 10; ++x)
    for (Num y = x + 1; y <= 10; ++y) constant.set(x, y, 1);
  CHECK(is_homogeneous({3}, constant, 0));
  CHECK(is_homogeneous({1, 4, 9}, constant, 1));
  for (int it = 0; it < 300; ++it) {
    auto d = random_pair(rng, 9, 2);
    std::mt19937 r32(static_cast<unsigned>(it));
    auto h = oracle::random_set(r32, 0, 9, 0.35);
    for (unsigned c = 0; c < 2; ++c) {
      bool ref = true;
      for (Num a : h)
        for (Num b : h)
          if (a < b && *d.at(a, b) != c) ref = false;
      CHECK(is_homogeneous(h, d, c) == ref);
    }
  }
  UnaryColoring u{{0, 1, 0, 0, 1, 1}, 2};
  CHECK(is_almost_homogeneous({0, 1, 4, 5}, u, 4));
  CHECK_FALSE(is_almost_homogeneous({0, 1, 4, 5}, u, 0));
}

TEST_CASE("stability certificates and thinning") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 300; ++it) {
    const Num n = 6 + rng() % 10;
    const unsigned k = 2 + rng() % 2;
    std::vector<unsigned> lim(n);
    std::vector<Num> thr(n);
    for (Num x = 0; x < n; ++x) {
      lim[x] = rng() % k;
      thr[x] = x + 1 + rng() % (n - x);
    }
    auto d = stable_coloring(n, k, lim, thr, rng);
    auto cert = stability_cert(d);
    CHECK(check_cert(d, cert));
    for (Num x = 0; x < n; ++x) {
      CHECK(cert.limits[x].color == lim[x]);
      CHECK(cert.limits[x].threshold <= thr[x]);
    }
    for (unsigned j = 0; j < k; ++j) {
      FinSet l;
      for (Num x = 0; x < n; ++x)
        if (lim[x] == j) l.push_back(x);
      if (l.empty()) {
        CHECK_THROWS_AS(thin_to_homogeneous(l, d, cert, j), EmptyResult);
        continue;
      }
      CHECK(is_limit_homogeneous(l, cert, j));
      auto h = thin_to_homogeneous(l, d, cert, j);
      CHECK(is_homogeneous(h, d, j));
      CHECK(std::includes(l.begin(), l.end(), h.begin(), h.end()));
      CHECK_FALSE(h.empty());
    }
  }
  // thresholds all at x+1: every pair already sits at its limit
  PairColoring d(8, 2);
  for (Num x = 0; x < 8; ++x)
    for (Num y = x + 1; y <= 8; ++y) d.set(x, y, 1);
  auto cert = stability_cert(d);
  CHECK(thin_to_homogeneous({0, 2, 5, 7}, d, cert, 1) == FinSet{0, 2, 5, 7});
}

TEST_CASE("cohesive-upto") {
  std::vector<std::vector<unsigned>> fam{{1, 1, 0, 1, 0, 1}};
  CHECK(is_cohesive_upto({0, 1, 3}, fam, 1, 0));
  CHECK_FALSE(is_cohesive_upto({1, 2, 3, 4}, fam, 1, 0));
  CHECK(is_cohesive_upto({1, 2, 3, 4}, fam, 1, 5));
}

TEST_CASE("almost homogeneous for e gives cohesive for its digits (k=2, N=16)") {
  // every e on a small window and every set above the threshold
  std::mt19937_64 rng(3);
  for (int it = 0; it < 2000; ++it) {
    UnaryColoring e;
    e.m = 12;
    for (Num x = 0; x <= 16; ++x) e.values.push_back(rng() % 12);
    auto fam = digit_family(e, 2);
    std::mt19937 r32(static_cast<unsigned>(it));
    auto s = oracle::random_set(r32, 0, 16, 0.5);
    Num t = rng() % 17;
    if (is_almost_homogeneous(s, e, t)) CHECK(is_cohesive_upto(s, fam.columns, 8, t));
    // and conversely, matching digits on every column force equal colors
    if (is_cohesive_upto(s, fam.columns, fam.width, t)) CHECK(is_almost_homogeneous(s, e, t));
  }
}

TEST_CASE("coloring text round trip") {
  std::mt19937_64 rng(2);
  auto d = random_pair(rng, 7, 3);
  d.clear(2, 7);
  CHECK(parse_pair(serialize_pair(d)) == d);
  UnaryColoring u{{0, 3, 2, 11}, 12};
  CHECK(parse_unary(serialize_unary(u)) == u);
  CHECK_THROWS_AS(parse_pair("pair 2 2\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_unary("unary 2\n0 2\n"), ParseError);
  auto f = digit_family(UnaryColoring{{3, 9}, 12}, 2);
  CHECK(serialize_digits(f) == "01\n00\n10\n11\n");
}
