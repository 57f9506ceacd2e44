#include <limits>
#include <random>

#include "ctree_support.hpp"
#include "doctest.h"
#include "ramsey/forcing_c.hpp"
#include "test_support.hpp"

using namespace ramsey;

namespace {

constexpr Stage kAll = std::numeric_limits<Stage>::max();

CCondition cond(std::vector<std::string> cols, std::vector<std::optional<ColumnLock>> locks) {
  CCondition p;
  p.columns = std::move(cols);
  p.locks = std::move(locks);
  return p;
}

CCondition random_condition(std::mt19937& rng, std::size_t maxWidth, Num maxLen) {
  CCondition p;
  const std::size_t w = 1 + rng() % maxWidth;
  const Num len = rng() % (maxLen + 1);
  for (std::size_t n = 0; n < w; ++n) {
    std::optional<ColumnLock> lock;
    if (n > 0 && rng() % 2) lock = ColumnLock{static_cast<unsigned>(rng() % 2), static_cast<Num>(rng() % (len + 2))};
    std::string c;
    for (Num x = 0; x < len; ++x)
      c.push_back(lock && x >= lock->from ? static_cast<char>('0' + lock->bit) : static_cast<char>('0' + rng() % 2));
    p.columns.push_back(c);
    p.locks.push_back(lock);
  }
  return p;
}

// Written per position, without the library's helpers.
bool family_ok(const std::vector<std::string>& x, const CCondition& p) {
  if (x.size() < p.columns.size()) return false;
  for (std::size_t n = 0; n < p.columns.size(); ++n) {
    if (x[n].size() < p.columns[n].size()) return false;
    for (std::size_t i = 0; i < x[n].size(); ++i) {
      if (i < p.columns[n].size() && x[n][i] != p.columns[n][i]) return false;
      if (p.locks[n] && i >= p.locks[n]->from && x[n][i] != static_cast<char>('0' + p.locks[n]->bit)) return false;
    }
  }
  return true;
}

// Every family of the given width and length.
std::vector<std::vector<std::string>> all_families(std::size_t width, Num len) {
  std::vector<std::vector<std::string>> out;
  const std::size_t bits = width * len;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) {
    std::vector<std::string> f(width, std::string(len, '0'));
    for (std::size_t b = 0; b < bits; ++b)
      if (m >> b & 1) f[b / len][b % len] = '1';
    out.push_back(f);
  }
  return out;
}

// Phi(x, y) = j on every family (one past the read position) extending p.
bool forced_bruteforce(const CCondition& p, const ColumnPairFunctional& phi, Num x, Num y, unsigned j) {
  const auto* r = phi.rule(x, y);
  if (!r) return false;
  const std::size_t width = std::max(p.columns.size(), r->reads ? r->col + 1 : 0);
  const Num len = std::max<Num>(static_cast<Num>(p.columns.empty() ? 0 : p.columns[0].size()), r->reads ? r->pos + 1 : 0);
  for (const auto& f : all_families(width, len))
    if (family_ok(f, p) && phi.value(f, x, y) != j) return false;
  return true;
}

// Cheaper forcing check for larger conditions: the one bit read is either
// pinned by p or free.
bool forced_pinned(const CCondition& p, const ColumnPairFunctional& phi, Num x, Num y, unsigned j) {
  const auto* r = phi.rule(x, y);
  if (!r) return false;
  if (!r->reads) return r->c0 == j;
  std::vector<unsigned> can;
  for (unsigned b = 0; b < 2; ++b) {
    bool ok = true;
    if (r->col < p.columns.size()) {
      if (r->pos < p.columns[r->col].size()) ok = p.columns[r->col][r->pos] == static_cast<char>('0' + b);
      else if (p.locks[r->col] && r->pos >= p.locks[r->col]->from) ok = p.locks[r->col]->bit == b;
    }
    if (ok) can.push_back(b ? r->c1 : r->c0);
  }
  return std::all_of(can.begin(), can.end(), [&](unsigned c) { return c == j; });
}

// One rule in `readOdds` is constant.
ColumnPairFunctional random_phi(std::mt19937& rng, Num n, std::size_t cols, Num maxPos, unsigned readOdds = 3) {
  std::vector<PairRule> rules;
  for (Num y = 1; y < n; ++y)
    for (Num x = 0; x < y; ++x) {
      PairRule r;
      r.x = x;
      r.y = y;
      r.c0 = rng() % 2;
      if (rng() % readOdds) {
        r.reads = true;
        r.col = rng() % cols;
        r.pos = rng() % maxPos;
        r.c1 = rng() % 2;
      } else {
        r.c1 = r.c0;
      }
      rules.push_back(r);
    }
  return ColumnPairFunctional(rules);
}

TableFunctional singleton_table(const FinSet& points, Num w) {
  std::vector<TableEntry> rows;
  for (Num a : points) rows.push_back({std::uint64_t{1} << a, std::uint64_t{1} << a, w, 1, a + 1, std::max<Stage>(a + 1, w + 1)});
  return TableFunctional(rows);
}

TreeSpec spec_of(const oracle::CTreeInstance& in) {
  TreeSpec s;
  s.h = in.h;
  s.psi = &in.psi;
  s.k = in.k;
  s.reservoir = in.reservoir;
  s.maxDepth = in.maxDepth;
  return s;
}

}  // namespace

TEST_CASE("condition extension") {
  const auto p = cond({"0110", "1000"}, {std::nullopt, ColumnLock{0, 1}});
  REQUIRE_FALSE(p.validate());
  CHECK(c_extends(p, p));
  auto flip = p;
  flip.columns[1] = "1001";
  CHECK_FALSE(c_extends(flip, p));  // breaks the lock
  auto relock = p;
  relock.locks[0] = ColumnLock{1, 4};
  CHECK_FALSE(c_extends(relock, p));
  auto longer = cond({"01101", "10000", "1"}, {std::nullopt, ColumnLock{0, 1}, std::nullopt});
  CHECK(longer.validate());  // ragged
  longer.columns[2] = "11111";
  CHECK(c_extends(longer, p));
  CHECK_FALSE(c_extends(p, longer));

  std::mt19937 rng(21);
  for (int it = 0; it < 400; ++it) {
    CCondition q = random_condition(rng, 3, 5);
    REQUIRE_FALSE(q.validate());
    std::vector<CCondition> chain{q};
    for (int step = 0; step < 5; ++step) {
      std::vector<BitReq> reqs;
      for (int r = 0; r < 2; ++r) reqs.push_back({rng() % 4, static_cast<Num>(rng() % 9), static_cast<unsigned>(rng() % 2)});
      if (auto e = extend_with(chain.back(), reqs, rng() % 10)) {
        for (const auto& r : reqs) CHECK(e->columns[r.col][r.pos] == static_cast<char>('0' + r.bit));
        chain.push_back(*e);
      }
    }
    // Transitive: every later condition extends every earlier one.
    for (std::size_t a = 0; a < chain.size(); ++a)
      for (std::size_t b = a; b < chain.size(); ++b) {
        CHECK(c_extends(chain[b], chain[a]));
        const auto& pa = chain[a];
        const auto& pb = chain[b];
        for (std::size_t n = 0; n < pa.columns.size(); ++n) {
          CHECK(pb.columns[n].substr(0, pa.columns[n].size()) == pa.columns[n]);
          CHECK(pb.locks[n] == pa.locks[n]);
        }
      }
    if (chain.back().length() > 0) {
      auto bad = chain.back();
      const Num pos = rng() % bad.length();
      const std::size_t col = rng() % bad.width();
      bad.columns[col][pos] = bad.columns[col][pos] == '0' ? '1' : '0';
      CHECK_FALSE(c_extends(bad, chain.back()));
    }
  }
}

TEST_CASE("extend_with refuses conflicts") {
  const auto p = cond({"01", "11"}, {std::nullopt, ColumnLock{1, 0}});
  CHECK_FALSE(extend_with(p, {{0, 0, 1}}));
  CHECK_FALSE(extend_with(p, {{1, 5, 0}}));  // lock tail
  CHECK_FALSE(extend_with(p, {{2, 3, 0}, {2, 3, 1}}));
  auto q = extend_with(p, {{2, 3, 1}});
  REQUIRE(q);
  CHECK(q->columns == std::vector<std::string>{"0100", "1111", "0001"});
  CHECK_FALSE(q->locks[2]);
}

TEST_CASE("family_extends against a full scan") {
  CHECK(family_extends({"01", "00"}, cond({"01", "00"}, {std::nullopt, ColumnLock{0, 0}})));
  CHECK_FALSE(family_extends({"010", "001"}, cond({"01", "00"}, {std::nullopt, ColumnLock{0, 0}})));
  std::mt19937 rng(5);
  for (int it = 0; it < 150; ++it) {
    const auto p = random_condition(rng, 2, 2);
    for (std::size_t w = 1; w <= 2; ++w)
      for (Num len = 0; len <= 3; ++len)
        for (const auto& f : all_families(w, len)) CHECK(family_extends(f, p) == family_ok(f, p));
  }
}

TEST_CASE("forcing a pair color matches every completion") {
  std::mt19937 rng(8);
  for (int it = 0; it < 300; ++it) {
    const auto p = random_condition(rng, 2, 3);
    const auto phi = random_phi(rng, 5, 3, 4);
    for (Num y = 1; y < 5; ++y)
      for (Num x = 0; x < y; ++x)
        for (unsigned j = 0; j < 2; ++j) {
          const bool lib = forces_color(p, phi, x, y, j);
          CHECK(lib == forced_bruteforce(p, phi, x, y, j));
          CHECK(lib == forced_pinned(p, phi, x, y, j));
          // A successful request list yields a condition that forces it.
          if (auto r = color_requests(p, phi, x, y, j)) {
            auto q = extend_with(p, *r);
            REQUIRE(q);
            CHECK(forced_bruteforce(*q, phi, x, y, j));
          } else {
            // No extension forces it: some completion of every one-bit
            // extension shows the other color.
            const auto* rule = phi.rule(x, y);
            for (unsigned b = 0; b < 2 && rule->reads; ++b)
              if (auto q = extend_with(p, {{rule->col, rule->pos, b}})) CHECK_FALSE(forced_bruteforce(*q, phi, x, y, j));
          }
        }
  }
}

TEST_CASE("pair functional text round trip") {
  std::mt19937 rng(2);
  const auto phi = random_phi(rng, 6, 3, 5);
  CHECK(parse_pair_functional(serialize_pair_functional(phi)).rules() == phi.rules());
  CHECK(phi.total(6));
  CHECK_FALSE(phi.total(7));
  CHECK_THROWS_AS(parse_pair_functional("3 1 ; 0\n"), ParseError);
  CHECK_THROWS_AS(parse_pair_functional("0 1 ; 0\n0 1 ; 1\n"), ParseError);
  CHECK_THROWS_AS(parse_pair_functional("0 1 ; 2 3 ; 0\n"), ParseError);
}

TEST_CASE("labeling: no witnesses") {
  const TableFunctional none;
  TreeSpec s;
  s.psi = &none;
  s.reservoir = {3, 4, 5, 6, 7};
  s.maxDepth = 2;
  const auto t = build_witness_tree(s);
  CHECK(t.terminals.empty());
  CHECK_FALSE(t.well_founded());
  const auto lt = label_tree(t, s, 3);
  CHECK(lt.labels.size() == t.tree.size());
  for (const auto& [a, l] : lt.labels) CHECK_FALSE(l);
  // The first surviving branch is the leftmost one at the depth limit.
  CHECK(t.frontier.front() == Str{3, 4});
}

TEST_CASE("labeling: every point is a witness at k") {
  const FinSet pts{4, 5, 6, 7, 8};
  const auto psi = singleton_table(pts, 2);
  TreeSpec s;
  s.psi = &psi;
  s.k = 2;
  s.reservoir = pts;
  const auto t = build_witness_tree(s);
  REQUIRE(t.well_founded());
  CHECK(t.tree.size() == 6);
  for (std::size_t theta : {1, 3, 5, 6}) {
    const auto lt = label_tree(t, s, theta);
    for (Num a : pts) CHECK(lt.labels.at({a}) == 2u);
    CHECK(lt.labels.at({}) == (theta <= 5 ? std::optional<Num>(2) : std::nullopt));
    const auto t0 = extract_t0(lt, theta);
    CHECK(check_t0(lt, t0.tree, theta).empty() == (theta <= 5));
  }
  // Witnesses below k do not count.
  s.k = 3;
  const auto t3 = build_witness_tree(s);
  CHECK(t3.terminals.empty());
}

TEST_CASE("labeling: threshold above any branching") {
  std::mt19937 rng(4);
  for (int it = 0; it < 50; ++it) {
    const auto in = oracle::random_ctree_instance(rng, 3);
    const auto s = spec_of(in);
    const auto t = build_witness_tree(s);
    const auto lt = label_tree(t, s, 100);
    for (const auto& [a, l] : lt.labels)
      if (!lt.terminals.count(a)) CHECK_FALSE(l);
  }
}

TEST_CASE("witness tree against brute force") {
  std::mt19937 rng(17);
  for (int it = 0; it < 120; ++it) {
    auto in = oracle::random_ctree_instance(rng, 3);
    if (it % 2) in.maxDepth = 1 + rng() % 3;  // cut some trees short
    const auto s = spec_of(in);
    const auto t = build_witness_tree(s);
    std::vector<FinSet> levels(in.maxDepth, in.reservoir);
    std::vector<Str> nodes, terminals, frontier;
    for (const auto& a : oracle::product_strings(levels, in.maxDepth)) {
      bool ok = true;
      for (std::size_t k = 0; k < a.size() && ok; ++k)
        ok = !oracle::least_label(in, Str(a.begin(), a.begin() + static_cast<long>(k)));
      if (!ok) continue;
      nodes.push_back(a);
      if (oracle::least_label(in, a)) terminals.push_back(a);
      else if (a.size() == in.maxDepth || (!a.empty() && a.back() == in.reservoir.back())) frontier.push_back(a);
    }
    std::sort(nodes.begin(), nodes.end());
    std::sort(terminals.begin(), terminals.end());
    std::sort(frontier.begin(), frontier.end());
    CHECK(t.tree.nodes == nodes);
    CHECK(t.terminals == terminals);
    CHECK(t.frontier == frontier);
  }
}

TEST_CASE("random instances: labels total and T0 well shaped") {
  std::mt19937 rng(33);
  std::size_t cases[5] = {};
  for (int it = 0; it < 300; ++it) {
    const std::size_t theta = 2 + it % 3;
    const auto in = oracle::random_ctree_instance(rng, theta);
    const auto s = spec_of(in);
    const auto t = build_witness_tree(s);
    REQUIRE(t.well_founded());
    const auto lt = label_tree(t, s, theta);
    const auto t0 = extract_t0(lt, theta);
    CHECK(oracle::ctree_errors(in, lt, t0.tree, theta).empty());
    CHECK(check_t0(lt, t0.tree, theta).empty());
    // Per-node case replay from the labels.
    for (const auto& a : t0.tree.nodes) {
      const auto kase = t0.cases.at(a);
      ++cases[kase];
      if (lt.terminals.count(a)) {
        CHECK(kase == T0Result::Terminal);
        continue;
      }
      std::size_t fin = 0;
      for (const auto& b : lt.tree.children(a)) fin += lt.labels.at(b).has_value();
      const auto want = lt.labels.at(a) ? T0Result::SameLabel
                        : fin >= theta  ? T0Result::FiniteChildren
                                        : T0Result::InfiniteChildren;
      CHECK(kase == want);
      for (const auto& b : t0.tree.children(a)) {
        if (want == T0Result::SameLabel) CHECK(lt.labels.at(b) == lt.labels.at(a));
        if (want == T0Result::FiniteChildren) CHECK(lt.labels.at(b));
        if (want == T0Result::InfiniteChildren) CHECK_FALSE(lt.labels.at(b));
      }
    }
  }
  // Singleton witnesses at the top give every infinite node enough finitely
  // labeled children, so this family never follows infinite children.
  CHECK(cases[T0Result::Terminal] > 0);
  CHECK(cases[T0Result::SameLabel] > 0);
  CHECK(cases[T0Result::FiniteChildren] > 0);
  CHECK(cases[T0Result::Stuck] == 0);
}

TEST_CASE("T0 follows infinite children") {
  LabeledTree lt;
  lt.tree = FiniteTree::from_nodes({{1, 4}, {1, 5}, {2, 4}, {2, 5}, {3}});
  lt.terminals = {{1, 4}, {1, 5}, {2, 4}, {2, 5}, {3}};
  lt.labels = {{{}, std::nullopt}, {{1}, std::nullopt}, {{2}, std::nullopt}, {{3}, 5},
               {{1, 4}, 7},        {{1, 5}, 8},          {{2, 4}, 7},          {{2, 5}, 9}};
  const auto t0 = extract_t0(lt, 2);
  CHECK(t0.cases.at({}) == T0Result::InfiniteChildren);
  CHECK(t0.cases.at({1}) == T0Result::FiniteChildren);
  CHECK(t0.tree.nodes == std::vector<Str>{{}, {1}, {1, 4}, {1, 5}, {2}, {2, 4}, {2, 5}});
  CHECK(check_t0(lt, t0.tree, 2).empty());
  // With theta 3 nothing qualifies at the root.
  CHECK(extract_t0(lt, 3).cases.at({}) == T0Result::Stuck);
}

TEST_CASE("sparse trees are reported, not hidden") {
  const auto psi = singleton_table({6}, 0);
  TreeSpec s;
  s.psi = &psi;
  s.reservoir = {5, 6};
  const auto t = build_witness_tree(s);
  REQUIRE(t.well_founded());
  const auto lt = label_tree(t, s, 3);
  const auto t0 = extract_t0(lt, 3);
  CHECK(t0.cases.at({}) == T0Result::Stuck);
  CHECK_FALSE(check_t0(lt, t0.tree, 3).empty());
}

TEST_CASE("a tree that disagrees with the labeler") {
  const auto psi = singleton_table({6}, 0);
  TreeSpec s;
  s.psi = &psi;
  s.reservoir = {5, 6};
  BuiltTree t;
  t.tree = FiniteTree::from_nodes({{5}});
  t.terminals = {{5}};
  CHECK_THROWS_AS(label_tree(t, s, 3), UnlabelableTerminal);
}

// ---- ledger ----

namespace {

// Independent replay of the ledger invariants with forced_pinned.
std::vector<std::string> replay_ledger(const RequirementLedger& before, const RequirementLedger& after,
                                       const RequirementContext& ctx) {
  std::vector<std::string> bad;
  const auto& p = after.current();
  for (std::size_t n = 0; n < before.current().columns.size(); ++n) {
    const auto& a = before.current().columns[n];
    if (p.columns[n].substr(0, a.size()) != a || p.locks[n] != before.current().locks[n]) bad.push_back("chain");
  }
  for (Num y : after.reservoir())
    if (!std::binary_search(before.reservoir().begin(), before.reservoir().end(), y)) bad.push_back("reservoir");
  if (!std::equal(before.y.begin(), before.y.end(), after.y.begin())) bad.push_back("Y");
  for (const auto& [phi, hs] : after.h)
    for (unsigned j = 0; j < 2; ++j) {
      if (before.h.count(phi))
        for (Num x : before.h.at(phi)[j])
          if (!std::binary_search(hs[j].begin(), hs[j].end(), x)) bad.push_back("H shrank");
      for (Num x : hs[j])
        for (Num y : after.reservoir()) {
          if (y <= x) bad.push_back("H not below I");
          else if (!forced_pinned(p, ctx.phis[phi], x, y, j)) bad.push_back("not forced");
        }
    }
  return bad;
}

}  // namespace

TEST_CASE("P stage with nothing in Y does nothing") {
  RequirementContext ctx;
  auto l = make_ledger(8);
  auto rep = run_requirement_stage(l, {Dedication::P, 0, 0, 0}, ctx);
  CHECK(rep.branch == "P noop");
  CHECK(l.chain[1] == l.chain[0]);
  CHECK(l.reservoirs[1] == l.reservoirs[0]);
  CHECK(rep.violations.empty());
}

TEST_CASE("Q stage grows both H sets") {
  // phi(x, y) reads column 1 at x: bit b gives color b.
  std::vector<PairRule> rules;
  for (Num y = 1; y < 8; ++y)
    for (Num x = 0; x < y; ++x) rules.push_back({x, y, true, 1, x, 0, 1});
  RequirementContext ctx;
  ctx.phis = {ColumnPairFunctional(rules)};
  auto l = make_ledger(8);
  const auto before = l;
  auto rep = run_requirement_stage(l, {Dedication::Q}, ctx);
  CHECK(rep.branch == "Q grew");
  CHECK(rep.violations.empty());
  CHECK(l.h[0][0] == FinSet{0});
  CHECK(l.h[0][1] == FinSet{1});
  CHECK(l.reservoir() == FinSet{2, 3, 4, 5, 6, 7});
  for (Num y = 2; y < 8; ++y) {
    CHECK(forced_bruteforce(l.current(), ctx.phis[0], 0, y, 0));
    CHECK(forced_bruteforce(l.current(), ctx.phis[0], 1, y, 1));
  }
  CHECK(replay_ledger(before, l, ctx).empty());

  // All pairs colored 0: no point forces limit 1, so the reservoir joins Y.
  std::vector<PairRule> zero;
  for (Num y = 1; y < 8; ++y)
    for (Num x = 0; x < y; ++x) zero.push_back({x, y, false, 0, 0, 0, 0});
  ctx.phis = {ColumnPairFunctional(zero)};
  auto l2 = make_ledger(8);
  rep = run_requirement_stage(l2, {Dedication::Q}, ctx);
  CHECK(rep.branch == "Q added to Y");
  REQUIRE(l2.y.size() == 1);
  CHECK(l2.y[0].points == l2.reservoirs[0]);
  // A later P stage for that entry splits it with column 1.
  rep = run_requirement_stage(l2, {Dedication::P, 1, 0, 0}, ctx);
  CHECK(rep.branch == "P met");
  CHECK(l2.current().columns[1].find('1') != std::string::npos);
  rep = run_requirement_stage(l2, {Dedication::P, 0, 0, 0}, ctx);
  CHECK(rep.branch == "P noop");  // Y_0 is empty
}

TEST_CASE("R stage takes a surviving branch") {
  std::vector<PairRule> zero;
  for (Num y = 1; y < 10; ++y)
    for (Num x = 0; x < y; ++x) zero.push_back({x, y, false, 0, 0, 0, 0});
  RequirementContext ctx;
  ctx.phis = {ColumnPairFunctional(zero)};
  ctx.psis = {TableFunctional()};
  ctx.maxDepth = 4;
  auto l = make_ledger(10);
  auto rep = run_requirement_stage(l, {Dedication::R, 0, 0, 0, 0, 0, 0}, ctx);
  CHECK(rep.branch == "R path taken");
  // Branch oracle: the leftmost increasing string of maximal length.
  CHECK(l.reservoir() == FinSet{0, 1, 2, 3});
  CHECK(rep.violations.empty());
}

TEST_CASE("R stage grows H and writes the digit") {
  // Color 0 everywhere; psi outputs 1 at w = 4 on any set containing 6 or 7.
  std::vector<PairRule> zero;
  for (Num y = 1; y < 12; ++y)
    for (Num x = 0; x < y; ++x) zero.push_back({x, y, false, 0, 0, 0, 0});
  RequirementContext ctx;
  ctx.phis = {ColumnPairFunctional(zero)};
  ctx.psis = {singleton_table({6, 7, 8, 9, 10, 11}, 4)};
  ctx.theta = 2;
  ctx.maxDepth = 7;  // six low points fit below the cut
  auto l = make_ledger(12);
  const auto before = l;
  auto rep = run_requirement_stage(l, {Dedication::R, 0, 0, 0, 0, 0, 0}, ctx);
  CHECK(rep.branch == "R H grown");
  CHECK(rep.violations.empty());
  CHECK(replay_ledger(before, l, ctx).empty());
  CHECK(l.h[0][0] == FinSet{6});
  CHECK(l.reservoir() == FinSet{7, 8, 9, 10, 11});
  CHECK(l.current().columns[0][4] == '0');  // first visit: digit 0
  CHECK(ctx.psis[0].eval(l.h[0][0], 4, kAll).value == 1u);

  // Next visit: the only outputs sit below the new k = 5, so nothing
  // terminates and a branch survives.
  rep = run_requirement_stage(l, {Dedication::R, 0, 0, 0, 0, 0, 0}, ctx);
  CHECK(rep.branch == "R path taken");
  CHECK(rep.violations.empty());
}

TEST_CASE("random schedules keep the ledger invariants") {
  std::mt19937 rng(101);
  std::map<std::string, std::size_t> branches;
  for (int it = 0; it < 150; ++it) {
    const Num n = 8 + rng() % 4;
    RequirementContext ctx;
    ctx.theta = 2 + rng() % 2;
    ctx.maxDepth = 4;
    for (int f = 0; f < 2; ++f) ctx.phis.push_back(random_phi(rng, n, 3, n + 4, rng() % 2 ? 3 : 8));
    for (int f = 0; f < 2; ++f) {
      // Pair rows, plus singleton rows on the top points so trees close.
      std::vector<TableEntry> rows;
      auto row = [&](std::uint64_t bits, Num use) {
        const Num w = rng() % (2 * n + 8);
        rows.push_back({bits, bits, w, 1, use, std::max<Stage>(use, w + 1)});
      };
      for (int r = 0; r < 4; ++r) {
        const Num a = rng() % n, b = rng() % n;
        row((std::uint64_t{1} << a) | (std::uint64_t{1} << b), std::max(a, b) + 1);
      }
      if (rng() % 2)
        for (Num a = n - 4; a < n; ++a)
          for (int r = 0; r < 3; ++r) row(std::uint64_t{1} << a, a + 1);
      ctx.psis.push_back(TableFunctional(rows));
    }
    auto l = make_ledger(n);
    std::map<std::tuple<std::size_t, std::size_t, unsigned>, unsigned> visits;
    for (int st = 0; st < 10; ++st) {
      Dedication d;
      d.kind = static_cast<Dedication::Kind>(rng() % 3);
      d.t = rng() % (l.stage() + 1);
      d.n = rng() % 3;
      d.m = rng() % 3;
      d.phi = rng() % 2;
      d.psi = rng() % 2;
      d.j = rng() % 2;
      const auto before = l;
      const auto rep = run_requirement_stage(l, d, ctx);
      ++branches[rep.branch];
      CHECK(rep.violations.empty());
      CHECK(replay_ledger(before, l, ctx).empty());
      CHECK(l.chain.size() == before.chain.size() + 1);
      if (rep.branch == "R H grown") {
        // H ∪ F has an output 1 at some w >= k whose column 0 digit is the
        // visit parity.
        const unsigned i = visits[{d.phi, d.psi, d.j}] % 2;
        bool seen = false;
        for (Num w = before.current().length(); w < ctx.psis[d.psi].input_bound(); ++w)
          if (ctx.psis[d.psi].eval(l.h[d.phi][d.j], w, kAll).value == 1u && w < l.current().length() &&
              l.current().columns[0][w] == static_cast<char>('0' + i))
            seen = true;
        CHECK(seen);
      }
      if (d.kind == Dedication::R && rep.branch != "R path taken" && rep.branch != "R skipped")
        ++visits[{d.phi, d.psi, d.j}];
    }
  }
  for (const auto& b : {"P met", "P noop", "Q grew", "Q added to Y", "R H grown", "R path taken",
                        "R case1 added to Y", "R case2 added to Y"})
    CHECK(branches[b] > 0);
}
