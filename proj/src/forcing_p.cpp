#include "ramsey/forcing_p.hpp"

#include <algorithm>
#include <sstream>

namespace ramsey {

std::size_t PCondition::pair_index(Num x, Num y) {
  if (x >= y) throw std::out_of_range("pair needs x < y");
  return static_cast<std::size_t>(y) * (y - 1) / 2 + x;
}

PCondition PCondition::extended(Num n2, const std::function<unsigned(Num, Num)>& color,
                                const std::function<Lock(Num)>& lock) const {
  if (n2 < n_) throw std::invalid_argument("extension cannot shrink n");
  PCondition q = *this;
  for (Num y = n_; y < n2; ++y)
    for (Num x = 0; x < y; ++x) {
      const unsigned v = color(x, y);
      if (v > 1) throw std::out_of_range("conditions color with 0 and 1");
      q.cells_.push_back(static_cast<std::uint8_t>(v));
    }
  for (Num x = n_; x < n2; ++x) q.locks_.push_back(lock(x));
  q.n_ = n2;
  return q;
}

std::optional<std::string> PCondition::check_locks() const {
  if (locks_.size() != n_ || cells_.size() != static_cast<std::size_t>(n_) * (n_ ? n_ - 1 : 0) / 2)
    return "storage does not match n";
  for (Num x = 0; x < n_; ++x) {
    const Lock& l = locks_[x];
    if (l.color > 1) return "lock color above 1 at x=" + std::to_string(x);
    for (Num y = std::max(l.threshold, x + 1); y < n_; ++y)
      if (c(x, y) != l.color)
        return "lock at x=" + std::to_string(x) + " broken at y=" + std::to_string(y);
  }
  return std::nullopt;
}

bool p_extends(const PCondition& q, const PCondition& p) {
  if (q.n() < p.n() || q.check_locks()) return false;
  for (Num x = 0; x < p.n(); ++x) {
    if (!(q.lock(x) == p.lock(x))) return false;
    for (Num y = x + 1; y < p.n(); ++y)
      if (q.c(x, y) != p.c(x, y)) return false;
  }
  return true;
}

bool respects(const PairColoring& d, const PCondition& p) {
  if (!d.total() || d.bound() + 1 < p.n()) return false;
  for (Num x = 0; x < p.n(); ++x) {
    for (Num y = x + 1; y < p.n(); ++y)
      if (d.at(x, y) != p.c(x, y)) return false;
    const Lock& l = p.lock(x);
    for (Num y = std::max(l.threshold, x + 1); y <= d.bound(); ++y)
      if (d.at(x, y) != l.color) return false;
  }
  return true;
}

FinSetPredicate two_values_predicate(const TableFunctional& psi, Num floor) {
  Num support = 0;
  for (const auto& e : psi.entries()) support = std::max(support, e.use);
  return FinSetPredicate(
      "two_values", {floor},
      [psi, floor](const FinSet& f, Stage s) {
        const std::uint64_t m = oracle_mask(f);
        int hits = 0;
        for (Num x = floor; x < psi.input_bound(); ++x) {
          auto e = psi.eval_mask(m, x, s);
          if (e.value && *e.value == 1 && ++hits == 2) return true;
        }
        return false;
      },
      "psi sends two numbers >= floor to 1")
      .with_support(support);
}

namespace {

FinSet stage_universe(Num floor, Num top) {
  FinSet u;
  for (Num x = floor + 1; x < top; ++x) u.push_back(x);
  return u;
}

// Largest stage among the 1-valued computations at inputs >= floor, over
// every phi-subset of every terminal's range.
Num witness_bound(const Forest& f, const TableFunctional& psi, const FinSetPredicate& phi,
                  Num floor, Stage stage) {
  Num u = 0;
  for (const auto& level : f.levels)
    for (const auto& t : level)
      for (const auto& a : t.terminals()) {
        FinSet r = ran(a);
        if (phi.support())  // larger elements never change a computation
          r.erase(std::lower_bound(r.begin(), r.end(), *phi.support()), r.end());
        if (r.size() > kMaxScanPool) throw BudgetExhausted("terminal range too large to scan");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r.size()); ++mask) {
          FinSet sub;
          for (std::size_t i = 0; i < r.size(); ++i)
            if (mask >> i & 1U) sub.push_back(r[i]);
          if (!phi.holds(sub, stage)) continue;
          const std::uint64_t m = oracle_mask(sub);
          for (Num x = floor; x < psi.input_bound(); ++x) {
            auto e = psi.eval_mask(m, x, stage);
            if (e.value && *e.value == 1) u = std::max<Num>(u, static_cast<Num>(*e.stage));
          }
        }
      }
  return u;
}

}  // namespace

NuredOutcome nured_stage(const PCondition& p, const TableFunctional& psi, unsigned k,
                         const NuredBudget& budget) {
  if (auto bad = p.check_locks()) throw std::invalid_argument("invalid condition: " + *bad);
  if (k == 0) throw std::invalid_argument("need at least one color");
  const Num floor = p.n();
  const FinSetPredicate phi = two_values_predicate(psi, floor);
  const FinSet universe = stage_universe(floor, budget.top);
  if (universe.empty()) return Case1{static_cast<std::int64_t>(floor)};

  SearchBudget sb;
  sb.maxStage = budget.maxStage;
  sb.maxTrees = budget.probeTrees;
  auto probe = finseq_probe(phi, sb, universe);
  if (auto* t = std::get_if<TailEmpty>(&probe)) return Case1{t->z};
  if (auto* e = std::get_if<Exhausted>(&probe)) throw BudgetExhausted(e->reason);

  sb.maxTrees = budget.maxTrees;
  auto res = canonical_search(std::vector<FinSetPredicate>(k, phi), sb, universe);
  if (!res.found) {
    const OpenGrowth* best = nullptr;
    for (const auto& g : res.open)
      if (g.depth > 0 && !g.openFrontier.empty() && (!best || g.depth > best->depth)) best = &g;
    if (!best) throw BudgetExhausted(res.reason);
    return Case2{best->level, best->partial, best->openFrontier.front(), best->depth};
  }

  const Num u = witness_bound(res.forest, psi, phi, floor, budget.maxStage);
  PCondition next = p.extended(
      u,
      [&](Num x, Num) { return x < floor ? p.lock(x).color : 0U; },
      [&](Num) { return Lock{1, u}; });
  return Case3{std::move(next), std::move(res.forest), u};
}

PCondition finalize(const PCondition& p, Num n2) {
  if (n2 <= p.n()) return p;
  return p.extended(
      n2,
      [&](Num x, Num y) {
        if (x < p.n() && y >= p.lock(x).threshold) return p.lock(x).color;
        return 0U;
      },
      [](Num x) { return Lock{0, x + 1}; });
}

NuredRun nured_run(const TableFunctional& psi, unsigned k, const NuredBudget& budget) {
  NuredRun run;
  PCondition p;
  for (;;) {
    try {
      auto out = nured_stage(p, psi, k, budget);
      run.stages.push_back({p, out});
      if (auto* c3 = std::get_if<Case3>(&out)) {
        p = c3->next;
        continue;
      }
    } catch (const BudgetExhausted& e) {
      run.exhausted = true;
      run.note = e.what();
    }
    break;
  }
  run.final = finalize(p, budget.top + 1);
  return run;
}

DiagonalResult diagonal_check(const Case3& stage, Num floor, const StabilityCert& cert,
                              const TableFunctional& psi, Stage maxStage) {
  DiagonalResult r;
  auto fail = [&](std::string why) {
    r.failure = std::move(why);
    return r;
  };
  const unsigned k = static_cast<unsigned>(stage.forest.k);
  for (Num x : stage.forest.range())
    if (x >= cert.limits.size()) return fail("forest element without a limit color");

  r.witness = combcore_witness(stage.forest, [&](Num x) { return cert.limit(x); });
  r.color = static_cast<unsigned>(r.witness.level);
  const FinSetPredicate phi = two_values_predicate(psi, floor);
  auto f = least_witness(phi, ran(r.witness.terminal), maxStage);
  if (!f) return fail("terminal range holds no witness");
  r.f = *f;

  const std::uint64_t fm = oracle_mask(r.f);
  std::vector<Num> hits;
  Num use = 0;
  for (Num x = floor; x < psi.input_bound() && hits.size() < 2; ++x) {
    auto e = psi.eval_mask(fm, x, maxStage);
    if (e.value && *e.value == 1) {
      hits.push_back(x);
      use = std::max(use, *e.use);
    }
  }
  if (hits.size() < 2) return fail("witness does not produce two values");
  r.x0 = hits[0];
  r.x1 = hits[1];

  r.l = r.f;
  const Num above = r.f.empty() ? use : std::max<Num>(use, r.f.back() + 1);
  for (Num x = above; x < cert.limits.size(); ++x)
    if (cert.limit(x) == r.color) r.l.push_back(x);

  if (r.color >= k) return fail("witness level outside the colors");
  if (!is_limit_homogeneous(r.l, cert, r.color)) return fail("L is not limit-homogeneous");
  const std::uint64_t lm = oracle_mask(r.l);
  for (Num x : {r.x0, r.x1}) {
    auto e = psi.eval_mask(lm, x, maxStage);
    if (!e.value || *e.value != 1) return fail("psi on L loses x=" + std::to_string(x));
  }
  if (r.x1 >= stage.next.n()) return fail("pair lies beyond the condition");
  if (stage.next.c(r.x0, r.x1) != 0) return fail("pair is not colored 0");
  if (stage.next.lock(r.x0).color != 1) return fail("x0 is not locked to 1");
  return r;
}

bool MathiasTuple::valid() const {
  if (!std::is_sorted(reservoir.begin(), reservoir.end())) return false;
  for (const auto& s : f) {
    if (!std::is_sorted(s.begin(), s.end())) return false;
    if (!s.empty() && !reservoir.empty() && s.back() >= reservoir.front()) return false;
  }
  return true;
}

bool mathias_extends(const MathiasTuple& b, const MathiasTuple& a) {
  if (!b.valid() || !a.valid() || b.f.size() != a.f.size()) return false;
  if (!is_subset(b.reservoir, a.reservoir)) return false;
  for (std::size_t j = 0; j < a.f.size(); ++j)
    if (!is_subset(a.f[j], b.f[j]) || !is_subset(b.f[j], set_union(a.f[j], a.reservoir)))
      return false;
  return true;
}

std::uint64_t for_each_extension(const PCondition& p, Num extra,
                                 const std::function<bool(const PCondition&)>& fn) {
  std::uint64_t count = 0;
  bool go = true;
  for (Num n2 = p.n(); n2 <= p.n() + extra && go; ++n2) {
    // Free pairs: new pairs not forced by an old lock.
    std::vector<std::pair<Num, Num>> free;
    for (Num y = p.n(); y < n2; ++y)
      for (Num x = 0; x < y; ++x)
        if (x >= p.n() || y < p.lock(x).threshold) free.emplace_back(x, y);
    const std::size_t fresh = n2 - p.n();
    std::vector<Num> choices;  // per new point: 2 colors times thresholds x+1..n2
    for (Num x = p.n(); x < n2; ++x) choices.push_back(2 * (n2 - x));
    if (free.size() > 30) throw std::length_error("too many free pairs to enumerate");

    for (std::uint64_t cm = 0; cm < (std::uint64_t{1} << free.size()) && go; ++cm) {
      std::vector<Num> pick(fresh, 0);
      for (;;) {
        auto colorOf = [&](Num x, Num y) -> unsigned {
          if (x < p.n() && y >= p.lock(x).threshold) return p.lock(x).color;
          auto it = std::find(free.begin(), free.end(), std::make_pair(x, y));
          return static_cast<unsigned>(cm >> (it - free.begin()) & 1U);
        };
        auto lockOf = [&](Num x) {
          const Num i = pick[x - p.n()];
          return Lock{i % 2, x + 1 + i / 2};
        };
        PCondition q = p.extended(n2, colorOf, lockOf);
        if (!q.check_locks()) {
          ++count;
          if (!fn(q)) {
            go = false;
            break;
          }
        }
        std::size_t i = 0;
        while (i < fresh && ++pick[i] == choices[i]) pick[i++] = 0;
        if (i == fresh) break;
      }
    }
  }
  return count;
}

MeetOutcome meet_or_avoid(const PCondition& p, const DenseSpec& w, const ExtensionBudget& budget) {
  if (w.extend) {
    if (auto q = w.extend(p)) {
      if (!p_extends(*q, p) || !w.test(*q))
        throw std::logic_error("dense spec extension does not extend or fails its test");
      return Met{*q};
    }
  }
  std::optional<PCondition> found;
  std::uint64_t scanned = 0;
  try {
    scanned = for_each_extension(p, budget.extraPoints, [&](const PCondition& q) {
      if (w.test(q)) {
        found = q;
        return false;
      }
      return true;
    });
  } catch (const std::length_error& e) {
    return Unknown{e.what()};
  }
  if (found) return Met{*found};
  if (scanned > budget.maxScan) return Unknown{"scan exceeded its cap"};
  return AvoidedCert{scanned};
}

std::string serialize_condition(const PCondition& p) {
  std::ostringstream os;
  os << "condition " << p.n() << "\n";
  for (Num x = 0; x < p.n(); ++x) {
    os << x << " lock " << p.lock(x).color << "@" << p.lock(x).threshold << " :";
    for (Num y = x + 1; y < p.n(); ++y) os << ' ' << p.c(x, y);
    os << "\n";
  }
  return os.str();
}

}  // namespace ramsey
