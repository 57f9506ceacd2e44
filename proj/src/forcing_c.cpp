#include "ramsey/forcing_c.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ramsey {

namespace {

constexpr Stage kAllStages = std::numeric_limits<Stage>::max();

std::string set_text(const FinSet& s) { return format_str(s); }

}  // namespace

// ---- conditions ----

std::optional<unsigned> CCondition::fixed_bit(std::size_t col, Num pos) const {
  if (col >= columns.size()) return std::nullopt;
  if (pos < columns[col].size()) return static_cast<unsigned>(columns[col][pos] - '0');
  if (locks[col] && pos >= locks[col]->from) return locks[col]->bit;
  return std::nullopt;
}

std::optional<std::string> CCondition::validate() const {
  if (locks.size() != columns.size()) return "lock table size differs from column count";
  for (std::size_t n = 0; n < columns.size(); ++n) {
    const auto& c = columns[n];
    if (c.size() != columns[0].size()) return "column " + std::to_string(n) + " has a different length";
    if (c.find_first_not_of("01") != std::string::npos) return "column " + std::to_string(n) + " is not binary";
    if (locks[n]) {
      if (locks[n]->bit > 1) return "lock bit out of range";
      for (std::size_t x = locks[n]->from; x < c.size(); ++x)
        if (static_cast<unsigned>(c[x] - '0') != locks[n]->bit)
          return "column " + std::to_string(n) + " breaks its lock at " + std::to_string(x);
    }
  }
  return std::nullopt;
}

CCondition initial_condition() {
  CCondition p;
  p.columns.emplace_back();
  p.locks.emplace_back();
  return p;
}

bool c_extends(const CCondition& q, const CCondition& p) {
  if (q.validate() || p.validate()) return false;
  if (q.width() < p.width()) return false;
  if (p.width() > 0 && q.length() < p.length()) return false;
  for (std::size_t n = 0; n < p.width(); ++n) {
    if (q.columns[n].compare(0, p.columns[n].size(), p.columns[n]) != 0) return false;
    if (q.locks[n] != p.locks[n]) return false;
  }
  return true;
}

bool family_extends(const std::vector<std::string>& x, const CCondition& p) {
  if (x.size() < p.width()) return false;
  for (std::size_t n = 0; n < p.width(); ++n) {
    const auto& col = x[n];
    if (col.size() < p.columns[n].size()) return false;
    if (col.compare(0, p.columns[n].size(), p.columns[n]) != 0) return false;
    if (p.locks[n])
      for (std::size_t i = p.locks[n]->from; i < col.size(); ++i)
        if (static_cast<unsigned>(col[i] - '0') != p.locks[n]->bit) return false;
  }
  return true;
}

std::optional<CCondition> extend_with(const CCondition& p, const std::vector<BitReq>& reqs, Num minLength) {
  std::map<std::pair<std::size_t, Num>, unsigned> want;
  std::size_t width = p.width();
  Num len = std::max(p.length(), minLength);
  for (const auto& r : reqs) {
    auto [it, fresh] = want.emplace(std::make_pair(r.col, r.pos), r.bit);
    if (!fresh && it->second != r.bit) return std::nullopt;
    if (auto b = p.fixed_bit(r.col, r.pos); b && *b != r.bit) return std::nullopt;
    width = std::max(width, r.col + 1);
    len = std::max(len, r.pos + 1);
  }
  CCondition q = p;
  q.columns.resize(width);
  q.locks.resize(width);
  for (std::size_t n = 0; n < width; ++n) {
    auto& c = q.columns[n];
    for (Num x = static_cast<Num>(c.size()); x < len; ++x)
      c.push_back(q.locks[n] && x >= q.locks[n]->from ? static_cast<char>('0' + q.locks[n]->bit) : '0');
  }
  for (const auto& [at, bit] : want) q.columns[at.first][at.second] = static_cast<char>('0' + bit);
  return q;
}

// ---- pair functionals ----

ColumnPairFunctional::ColumnPairFunctional(std::vector<PairRule> rules) : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    auto& r = rules_[i];
    if (!r.reads) r.c1 = r.c0;
    if (r.x >= r.y) throw InvalidTable("pair rule needs x < y");
    if (r.c0 > 1 || r.c1 > 1) throw InvalidTable("pair colors are 0 or 1");
    if (!index_.emplace(std::make_pair(r.x, r.y), i).second)
      throw InvalidTable("two rules for the pair " + std::to_string(r.x) + " " + std::to_string(r.y));
  }
}

const PairRule* ColumnPairFunctional::rule(Num x, Num y) const {
  auto it = index_.find({x, y});
  return it == index_.end() ? nullptr : &rules_[it->second];
}

std::optional<unsigned> ColumnPairFunctional::value(const std::vector<std::string>& family, Num x, Num y) const {
  const auto* r = rule(x, y);
  if (!r) return std::nullopt;
  if (!r->reads) return r->c0;
  if (r->col >= family.size() || r->pos >= family[r->col].size()) return std::nullopt;
  return family[r->col][r->pos] == '1' ? r->c1 : r->c0;
}

bool ColumnPairFunctional::total(Num n) const {
  for (Num y = 1; y < n; ++y)
    for (Num x = 0; x < y; ++x)
      if (!rule(x, y)) return false;
  return true;
}

std::string serialize_pair_functional(const ColumnPairFunctional& f) {
  std::string out;
  for (const auto& r : f.rules()) {
    out += std::to_string(r.x) + " " + std::to_string(r.y) + " ; ";
    if (r.reads)
      out += std::to_string(r.col) + " " + std::to_string(r.pos) + " ; " + std::to_string(r.c0) + " " +
             std::to_string(r.c1);
    else
      out += std::to_string(r.c0);
    out += "\n";
  }
  return out;
}

namespace {

std::vector<Num> numbers(const std::string& field, const std::string& line) {
  std::vector<Num> out;
  std::stringstream ss(field);
  std::string tok;
  while (ss >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("expected numbers in '" + line + "'");
    out.push_back(static_cast<Num>(std::stoul(tok)));
  }
  return out;
}

}  // namespace

ColumnPairFunctional parse_pair_functional(const std::string& text) {
  std::vector<PairRule> rules;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string part;
    while (std::getline(ls, part, ';')) f.push_back(part);
    PairRule r;
    auto xy = numbers(f[0], line);
    if (xy.size() != 2) throw ParseError("rule needs 'x y' first: " + line);
    r.x = xy[0];
    r.y = xy[1];
    if (f.size() == 2) {
      auto c = numbers(f[1], line);
      if (c.size() != 1) throw ParseError("constant rule needs one color: " + line);
      r.c0 = r.c1 = c[0];
    } else if (f.size() == 3) {
      auto at = numbers(f[1], line);
      auto c = numbers(f[2], line);
      if (at.size() != 2 || c.size() != 2) throw ParseError("bit rule needs 'col pos ; c0 c1': " + line);
      r.reads = true;
      r.col = at[0];
      r.pos = at[1];
      r.c0 = c[0];
      r.c1 = c[1];
    } else {
      throw ParseError("rule needs 2 or 3 fields: " + line);
    }
    rules.push_back(r);
  }
  try {
    return ColumnPairFunctional(std::move(rules));
  } catch (const InvalidTable& e) {
    throw ParseError(e.what());
  }
}

std::optional<std::vector<BitReq>> color_requests(const CCondition& p, const ColumnPairFunctional& phi, Num x,
                                                  Num y, unsigned j) {
  const auto* r = phi.rule(x, y);
  if (!r) return std::nullopt;
  if (!r->reads) return r->c0 == j ? std::optional(std::vector<BitReq>{}) : std::nullopt;
  if (auto b = p.fixed_bit(r->col, r->pos))
    return (*b ? r->c1 : r->c0) == j ? std::optional(std::vector<BitReq>{}) : std::nullopt;
  if (r->c0 == j && r->c1 == j) return std::vector<BitReq>{};
  if (r->c0 == j) return std::vector<BitReq>{{r->col, r->pos, 0}};
  if (r->c1 == j) return std::vector<BitReq>{{r->col, r->pos, 1}};
  return std::nullopt;
}

bool forces_color(const CCondition& p, const ColumnPairFunctional& phi, Num x, Num y, unsigned j) {
  auto r = color_requests(p, phi, x, y, j);
  return r && r->empty();
}

FinSet tail_of(const FinSet& reservoir, Num x) {
  return FinSet(std::upper_bound(reservoir.begin(), reservoir.end(), x), reservoir.end());
}

std::optional<std::vector<BitReq>> limit_requests(const CCondition& p, const ColumnPairFunctional& phi,
                                                  const FinSet& reservoir, Num x, unsigned j,
                                                  std::size_t theta) {
  const FinSet tail = tail_of(reservoir, x);
  if (tail.size() < theta) return std::nullopt;
  std::vector<BitReq> all;
  for (Num y : tail) {
    auto r = color_requests(p, phi, x, y, j);
    if (!r) return std::nullopt;
    all.insert(all.end(), r->begin(), r->end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].col == all[i - 1].col && all[i].pos == all[i - 1].pos) return std::nullopt;
  return all;
}

// ---- trees ----

std::optional<NodeWitness> node_witness(const Str& alpha, const TreeSpec& spec) {
  const FinSet r = ran(alpha);
  const std::uint64_t subsets = std::uint64_t{1} << r.size();
  for (Num w = spec.k; w < spec.psi->input_bound(); ++w)
    // Masks over a fixed sorted set run in colex order.
    for (std::uint64_t m = 0; m < subsets; ++m) {
      FinSet f;
      for (std::size_t i = 0; i < r.size(); ++i)
        if (m >> i & 1) f.push_back(r[i]);
      auto ev = spec.psi->eval(set_union(spec.h, f), w, kAllStages);
      if (ev.value == 1u) return NodeWitness{f, w, *ev.use};
    }
  return std::nullopt;
}

BuiltTree build_witness_tree(const TreeSpec& spec) {
  BuiltTree out;
  std::vector<Str> nodes;
  std::vector<Str> stack{{}};
  while (!stack.empty()) {
    Str a = std::move(stack.back());
    stack.pop_back();
    nodes.push_back(a);
    if (nodes.size() > spec.maxNodes)
      throw BudgetExhausted("witness tree passed " + std::to_string(spec.maxNodes) + " nodes");
    if (node_witness(a, spec)) {
      out.terminals.push_back(a);
      continue;
    }
    const FinSet next = a.empty() ? spec.reservoir : tail_of(spec.reservoir, a.back());
    if (a.size() >= spec.maxDepth || next.empty()) {
      out.frontier.push_back(a);
      continue;
    }
    for (auto it = next.rbegin(); it != next.rend(); ++it) {
      Str b = a;
      b.push_back(*it);
      stack.push_back(std::move(b));
    }
  }
  std::sort(out.terminals.begin(), out.terminals.end());
  std::sort(out.frontier.begin(), out.frontier.end());
  out.tree = FiniteTree::from_nodes(std::move(nodes));
  return out;
}

LabeledTree label_tree(const BuiltTree& t, const TreeSpec& spec, std::size_t theta) {
  LabeledTree lt;
  lt.tree = t.tree;
  lt.terminals.insert(t.terminals.begin(), t.terminals.end());
  std::map<Str, std::vector<Str>> kids;
  for (const auto& a : t.tree.nodes)
    if (!a.empty()) kids[Str(a.begin(), a.end() - 1)].push_back(a);
  // Children sort after parents, so a reverse sweep labels bottom-up.
  for (auto it = t.tree.nodes.rbegin(); it != t.tree.nodes.rend(); ++it) {
    const Str& a = *it;
    if (lt.terminals.count(a)) {
      auto w = node_witness(a, spec);
      if (!w) throw UnlabelableTerminal("terminal " + format_str(a) + " has no witness");
      lt.labels[a] = w->w;
      continue;
    }
    std::map<Num, std::size_t> count;
    for (const auto& b : kids[a])
      if (auto l = lt.labels.at(b)) ++count[*l];
    std::optional<Num> label;
    for (const auto& [w, c] : count)
      if (c >= theta) {
        label = w;
        break;
      }
    lt.labels[a] = label;
  }
  return lt;
}

T0Result extract_t0(const LabeledTree& lt, std::size_t theta) {
  T0Result out;
  std::vector<Str> nodes;
  std::vector<Str> queue{{}};
  while (!queue.empty()) {
    Str a = std::move(queue.back());
    queue.pop_back();
    nodes.push_back(a);
    if (lt.terminals.count(a)) {
      out.cases[a] = T0Result::Terminal;
      continue;
    }
    const auto label = lt.labels.at(a);
    std::vector<Str> fin, inf, same;
    for (const auto& b : lt.tree.children(a)) {
      const auto lb = lt.labels.at(b);
      (lb ? fin : inf).push_back(b);
      if (label && lb == label) same.push_back(b);
    }
    const std::vector<Str>* pick = nullptr;
    if (label) {
      out.cases[a] = T0Result::SameLabel;
      pick = &same;
    } else if (fin.size() >= theta) {
      out.cases[a] = T0Result::FiniteChildren;
      pick = &fin;
    } else if (inf.size() >= theta) {
      out.cases[a] = T0Result::InfiniteChildren;
      pick = &inf;
    } else {
      out.cases[a] = T0Result::Stuck;
      continue;
    }
    for (const auto& b : *pick) queue.push_back(b);
  }
  out.tree = FiniteTree::from_nodes(std::move(nodes));
  return out;
}

std::vector<std::string> check_t0(const LabeledTree& lt, const FiniteTree& t0, std::size_t theta) {
  std::vector<std::string> bad;
  for (const auto& a : t0.nodes) {
    if (!lt.tree.contains(a)) bad.push_back(format_str(a) + " is not in T");
    const auto kids = t0.children(a);
    if (kids.empty()) {
      if (!lt.terminals.count(a)) bad.push_back(format_str(a) + " ends T0 but is not terminal in T");
    } else if (lt.terminals.count(a)) {
      bad.push_back(format_str(a) + " is terminal in T but has children in T0");
    } else if (kids.size() < theta) {
      bad.push_back(format_str(a) + " has " + std::to_string(kids.size()) + " children in T0");
    }
  }
  return bad;
}

// ---- dense specs ----

std::vector<CDenseSpec> default_dense_family(const YEntry& entry, std::size_t count) {
  std::vector<CDenseSpec> out;
  for (std::size_t e = 0; e < count; ++e) {
    CDenseSpec s;
    if (entry.kind == YEntry::Pairs) {
      s.name = "pairs digit " + std::to_string(entry.digit) + " w>=" + std::to_string(e);
      s.test = [entry, e](const CCondition& q) {
        for (const auto& [x, w] : entry.pairs)
          if (w >= e && q.width() > 0 && w < q.length() && q.columns[0][w] - '0' == static_cast<int>(entry.digit))
            return true;
        return false;
      };
      s.extend = [entry, e](const CCondition& q) -> std::optional<CCondition> {
        for (const auto& [x, w] : entry.pairs)
          if (w >= e && w >= q.length())
            if (auto r = extend_with(q, {{0, w, entry.digit}})) return r;
        return std::nullopt;
      };
    } else {
      const std::size_t col = e + 1;
      s.name = "column " + std::to_string(col) + " splits " + set_text(entry.points);
      s.test = [entry, col](const CCondition& q) {
        if (col >= q.width()) return false;
        bool zero = false, one = false;
        for (Num x : entry.points)
          if (x < q.length()) (q.columns[col][x] == '1' ? one : zero) = true;
        return zero && one;
      };
      s.extend = [entry, col](const CCondition& q) -> std::optional<CCondition> {
        if (col < q.width() && q.locks[col]) return std::nullopt;
        FinSet fresh;
        for (Num x : entry.points)
          if (x >= q.length()) fresh.push_back(x);
        if (fresh.size() < 2) return std::nullopt;
        return extend_with(q, {{col, fresh[0], 0}, {col, fresh[1], 1}});
      };
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---- ledger ----

RequirementLedger make_ledger(Num universe, CCondition p0) {
  RequirementLedger l;
  l.universe = universe;
  l.chain.push_back(std::move(p0));
  FinSet all;
  for (Num x = 0; x < universe; ++x) all.push_back(x);
  l.reservoirs.push_back(all);
  l.ySizes.push_back(0);
  return l;
}

std::vector<std::string> check_ledger(const RequirementLedger& ledger, const RequirementContext& ctx) {
  std::vector<std::string> bad;
  const auto& p = ledger.current();
  if (auto e = p.validate()) bad.push_back("condition: " + *e);
  const FinSet& res = ledger.reservoir();
  for (const auto& [phi, hs] : ledger.h)
    for (unsigned j = 0; j < 2; ++j) {
      const FinSet& h = hs[j];
      if (h.empty()) continue;
      if (!res.empty() && h.back() >= res.front())
        bad.push_back("H[" + std::to_string(phi) + "][" + std::to_string(j) + "] is not below I");
      if (phi >= ctx.phis.size()) {
        bad.push_back("H for unknown functional " + std::to_string(phi));
        continue;
      }
      for (Num x : h)
        for (Num y : res)
          if (y > x && !forces_color(p, ctx.phis[phi], x, y, j))
            bad.push_back("p does not force color " + std::to_string(j) + " on (" + std::to_string(x) + "," +
                          std::to_string(y) + ") for functional " + std::to_string(phi));
    }
  return bad;
}

namespace {

struct Outcome {
  std::string branch, certificate;
};

Outcome stage_p(RequirementLedger& l, const Dedication& d, const RequirementContext& ctx, CCondition& next) {
  if (d.t >= l.ySizes.size() || d.n >= l.ySizes[d.t]) return {"P noop", "no entry " + std::to_string(d.n) + " in Y_" + std::to_string(d.t)};
  const YEntry& entry = l.y[d.n];
  const auto specs = ctx.denseFamily ? ctx.denseFamily(entry) : default_dense_family(entry, ctx.denseCount);
  if (d.m >= specs.size()) return {"P noop", "no dense set " + std::to_string(d.m)};
  const auto& s = specs[d.m];
  if (s.test(next)) return {"P met", s.name + " (already)"};
  auto q = s.extend(next);
  if (q && c_extends(*q, next) && s.test(*q)) {
    next = *q;
    return {"P met", s.name};
  }
  return {"P unmet", s.name};
}

Outcome stage_q(RequirementLedger& l, const Dedication& d, const RequirementContext& ctx, CCondition& next,
                FinSet& res) {
  const auto& phi = ctx.phis.at(d.phi);
  if (!phi.total(l.universe)) return {"Q skipped", "functional " + std::to_string(d.phi) + " is not total"};
  std::array<std::vector<std::pair<Num, std::vector<BitReq>>>, 2> cand;
  for (unsigned j = 0; j < 2; ++j)
    for (Num x : res)
      if (auto r = limit_requests(next, phi, res, x, j, ctx.theta)) cand[j].emplace_back(x, *r);
  for (unsigned j = 0; j < 2; ++j)
    if (cand[j].empty()) {
      l.y.push_back({YEntry::Points, res, {}, 0});
      return {"Q added to Y", "no point forces limit " + std::to_string(j) + "; Y += " + set_text(res)};
    }
  for (const auto& [x0, r0] : cand[0])
    for (const auto& [x1, r1] : cand[1]) {
      if (x0 == x1) continue;
      std::vector<BitReq> both = r0;
      both.insert(both.end(), r1.begin(), r1.end());
      auto q = extend_with(next, both);
      if (!q) continue;
      next = *q;
      auto& h = l.h[d.phi];
      h[0] = set_union(h[0], {x0});
      h[1] = set_union(h[1], {x1});
      res = tail_of(res, std::max(x0, x1));
      return {"Q grew", "x0=" + std::to_string(x0) + " x1=" + std::to_string(x1) + " length=" +
                            std::to_string(next.length())};
    }
  return {"Q no joint extension", "limits forcible only separately"};
}

Outcome stage_r(RequirementLedger& l, const Dedication& d, const RequirementContext& ctx, CCondition& next,
                FinSet& res) {
  const auto& phi = ctx.phis.at(d.phi);
  if (!phi.total(l.universe)) return {"R skipped", "functional " + std::to_string(d.phi) + " is not total"};
  TreeSpec spec;
  spec.h = l.h[d.phi][d.j];
  spec.psi = &ctx.psis.at(d.psi);
  spec.k = next.length();
  spec.reservoir = res;
  spec.maxDepth = ctx.maxDepth;
  spec.maxNodes = ctx.maxNodes;
  const BuiltTree t = build_witness_tree(spec);
  if (!t.well_founded()) {
    const Str& path = t.frontier.front();
    res = ran(path);
    return {"R path taken", "branch " + format_str(path)};
  }
  const unsigned i = l.rVisits[{d.phi, d.psi, d.j}]++ % 2;
  const LabeledTree lt = label_tree(t, spec, ctx.theta);
  const T0Result t0 = extract_t0(lt, ctx.theta);

  CCondition q = next;
  Str alpha;
  if (auto w = lt.labels.at(alpha)) {
    auto r = extend_with(q, {{0, *w, i}});
    if (!r) return {"R blocked", "column 0 cannot take digit at " + std::to_string(*w)};
    q = *r;
  }
  while (!lt.terminals.count(alpha)) {
    const auto kase = t0.cases.at(alpha);
    const auto kids = t0.tree.children(alpha);
    const std::size_t n = alpha.size();
    bool moved = false;
    if (kase == T0Result::FiniteChildren) {
      YEntry pairs{YEntry::Pairs, {}, {}, i};
      for (const auto& b : kids) {
        const Num w = *lt.labels.at(b);
        if (w >= q.length()) pairs.pairs.emplace_back(b[n], w);
      }
      for (std::size_t c = 0; c < kids.size() && !moved; ++c) {
        const Num x = kids[c][n], w = *lt.labels.at(kids[c]);
        if (w < q.length()) continue;
        auto r = limit_requests(q, phi, res, x, d.j, ctx.theta);
        if (!r) continue;
        r->push_back({0, w, i});
        if (auto e = extend_with(q, *r)) {
          q = *e;
          alpha = kids[c];
          moved = true;
        }
      }
      if (!moved) {
        l.y.push_back(pairs);
        return {"R case1 added to Y", std::to_string(pairs.pairs.size()) + " pairs at " + format_str(alpha) +
                                          " digit " + std::to_string(i)};
      }
    } else {
      FinSet pts;
      for (const auto& b : kids) pts.push_back(b[n]);
      for (std::size_t c = 0; c < kids.size() && !moved; ++c) {
        auto r = limit_requests(q, phi, res, kids[c][n], d.j, ctx.theta);
        if (!r) continue;
        if (auto e = extend_with(q, *r)) {
          q = *e;
          alpha = kids[c];
          moved = true;
        }
      }
      if (!moved) {
        l.y.push_back({YEntry::Points, to_set(pts), {}, 0});
        return {"R case2 added to Y", "Y += " + set_text(to_set(pts)) + " at " + format_str(alpha)};
      }
    }
  }
  const auto w = node_witness(alpha, spec);
  if (!w) throw UnlabelableTerminal("walk ended at " + format_str(alpha) + " without a witness");
  next = q;
  auto& h = l.h[d.phi][d.j];
  h = set_union(h, w->f);
  const Num floor = std::max(w->use, w->f.empty() ? 0 : w->f.back() + 1);
  res = floor == 0 ? res : tail_of(res, floor - 1);
  std::string cert = "F=" + set_text(w->f) + " w=" + std::to_string(w->w) + " use=" + std::to_string(w->use) +
                     " k=" + std::to_string(spec.k) + " digit=" + std::to_string(i);
  const auto bit = next.fixed_bit(0, w->w);
  if (bit != i) cert += " (column 0 digit mismatch)";
  return {"R H grown", cert};
}

}  // namespace

ActionReport run_requirement_stage(RequirementLedger& ledger, const Dedication& d, const RequirementContext& ctx) {
  const RequirementLedger before = ledger;
  ActionReport rep;
  rep.stage = ledger.stage();
  rep.dedication = d;
  CCondition next = ledger.current();
  FinSet res = ledger.reservoir();
  Outcome o;
  switch (d.kind) {
    case Dedication::P: o = stage_p(ledger, d, ctx, next); break;
    case Dedication::Q: o = stage_q(ledger, d, ctx, next, res); break;
    case Dedication::R: o = stage_r(ledger, d, ctx, next, res); break;
  }
  rep.branch = o.branch;
  rep.certificate = o.certificate;
  ledger.chain.push_back(next);
  ledger.reservoirs.push_back(res);
  ledger.ySizes.push_back(ledger.y.size());
  ledger.dedications.push_back(d);

  auto& v = rep.violations;
  if (!c_extends(ledger.current(), before.current())) v.push_back("p_{s+1} does not extend p_s");
  if (!is_subset(ledger.reservoir(), before.reservoir())) v.push_back("reservoir grew");
  if (ledger.y.size() < before.y.size() || !std::equal(before.y.begin(), before.y.end(), ledger.y.begin()))
    v.push_back("Y lost an entry");
  for (const auto& [phi, hs] : before.h)
    for (unsigned j = 0; j < 2; ++j)
      if (!is_subset(hs[j], ledger.h[phi][j])) v.push_back("H shrank");
  auto more = check_ledger(ledger, ctx);
  v.insert(v.end(), more.begin(), more.end());
  return rep;
}

std::string serialize_condition(const CCondition& p) {
  std::string out;
  for (std::size_t n = 0; n < p.width(); ++n) {
    if (n) out += " | ";
    out += p.columns[n].empty() ? "-" : p.columns[n];
    out += p.locks[n] ? " <" + std::to_string(p.locks[n]->bit) + "," + std::to_string(p.locks[n]->from) + ">"
                      : " u";
  }
  return out;
}

std::string format_ledger(const RequirementLedger& l) {
  std::string out;
  out += "stage " + std::to_string(l.stage()) + "\n";
  out += "  p: " + serialize_condition(l.current()) + "\n";
  out += "  I: " + set_text(l.reservoir()) + "\n";
  for (const auto& [phi, hs] : l.h)
    out += "  H[" + std::to_string(phi) + "]: " + set_text(hs[0]) + " " + set_text(hs[1]) + "\n";
  for (std::size_t i = 0; i < l.y.size(); ++i) {
    const auto& e = l.y[i];
    out += "  Y[" + std::to_string(i) + "]: ";
    if (e.kind == YEntry::Points) {
      out += "points " + set_text(e.points);
    } else {
      out += "pairs digit " + std::to_string(e.digit);
      for (const auto& [x, w] : e.pairs) out += " (" + std::to_string(x) + "," + std::to_string(w) + ")";
    }
    out += "\n";
  }
  return out;
}

}  // namespace ramsey
