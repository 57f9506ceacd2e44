#include "ramsey/coh.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "ramsey/forest.hpp"

namespace ramsey {

FinSet HEntry::all() const {
  FinSet out;
  for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<unsigned> CohConfig::targets() const {
  std::vector<unsigned> out;
  for (unsigned x : C)
    if (std::find(C0.begin(), C0.end(), x) == C0.end()) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> CohConfig::validate() const {
  if (k == 0) return "k must be positive";
  for (unsigned x : C0)
    if (std::find(C.begin(), C.end(), x) == C.end()) return "C0 is not a subset of C";
  if (targets().size() != k) return "|C - C0| differs from k";
  for (Num x = 0; x <= d.bound(); ++x)
    for (Num y = x + 1; y <= d.bound(); ++y)
      if (auto v = d.at(x, y); v && std::find(C.begin(), C.end(), *v) == C.end())
        return "d takes a color outside C";
  if (auto e = seq.validate()) return "sequence: " + *e;
  return std::nullopt;
}

std::size_t CohRun::nested() const { return children.empty() ? 0 : 1 + children.front().nested(); }

namespace {

bool is_prefix(const Str& a, const Str& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

FinSet range_of(const Str& s) {
  FinSet r(s.begin(), s.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

FinSet merge(const FinSet& a, const FinSet& b) {
  FinSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Defined prefixes of sigma (not necessarily proper), shortest first.
std::vector<Str> chain_of(const std::map<Str, HEntry>& h, const Str& sigma) {
  std::vector<Str> out;
  for (std::size_t len = 0; len <= sigma.size(); ++len) {
    Str p(sigma.begin(), sigma.begin() + static_cast<long>(len));
    if (h.count(p)) out.push_back(std::move(p));
  }
  return out;
}

Num psi_support(const TableFunctional& psi) {
  Num s = 0;
  for (const auto& e : psi.entries()) s = std::max(s, e.use);
  return s;
}

std::optional<FWitness> psi_clause(const FinSet& oracle, const FSearch& q) {
  const std::uint64_t mask = oracle_mask(oracle);
  const Num lo = q.floor.value_or(0);
  const Stage hi = std::min<Stage>({q.t, q.psi->input_bound(), q.c->size()});
  for (Num x = lo; x < hi; ++x) {
    auto ev = q.psi->eval_mask(mask, x, q.t);
    if (ev.value == 1U && *ev.use < q.t && (*q.c)[x] == q.parity) return FWitness{{}, x, *ev.use};
  }
  return std::nullopt;
}

bool single_ok(Num x, const FSearch& q) {
  if ((q.floor && x <= *q.floor) || x >= q.t || x > q.d->bound()) return false;
  if (q.guessing && guess_limit(*q.d, x, q.t) != q.color) return false;
  for (Num a : q.base)
    if (a < x && q.d->at(a, x, q.t) != q.color) return false;
  return true;
}

}  // namespace

std::optional<FWitness> f_holds(const FinSet& f, const FSearch& q) {
  if (f.empty()) return std::nullopt;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!single_ok(f[i], q)) return std::nullopt;
    for (std::size_t j = 0; j < i; ++j)
      if (q.d->at(f[j], f[i], q.t) != q.color) return std::nullopt;
  }
  auto w = psi_clause(merge(q.base, f), q);
  if (w) w->f = f;
  return w;
}

// Colex order compares maxima first, so candidates are tried by ascending
// max m. Psi only reads F below its support S; for m >= S any elements of F
// in [S, m) can be dropped without losing homogeneity or the Psi clause, so
// the rest of F is drawn from candidates below S only.
std::optional<FWitness> least_f(const FinSet& pool, const FSearch& q) {
  const Num support = psi_support(*q.psi);
  FinSet g;
  for (Num x : pool)
    if (single_ok(x, q)) g.push_back(x);
  for (Num m : g) {
    FinSet cand;
    for (Num a : g)
      if (a < m && a < support && q.d->at(a, m, q.t) == q.color) cand.push_back(a);
    if (cand.size() > 20) throw std::length_error("least_f: too many candidates below the support");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
      FinSet f;
      for (std::size_t i = 0; i < cand.size(); ++i)
        if (mask >> i & 1U) f.push_back(cand[i]);
      bool homog = true;
      for (std::size_t i = 0; i < f.size() && homog; ++i)
        for (std::size_t j = 0; j < i && homog; ++j) homog = q.d->at(f[j], f[i], q.t) == q.color;
      if (!homog) continue;
      f.push_back(m);
      if (auto w = psi_clause(merge(q.base, f), q)) {
        w->f = std::move(f);
        return w;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_coh_state(const CohState& st, const UniformSequence& seq,
                                           Stage t, unsigned k) {
  if (!st.activeL) {
    if (!st.H.empty()) return "sets defined with no active enumeration";
    return std::nullopt;
  }
  const auto& u = seq.members.at(*st.activeL);
  for (const auto& [sigma, e] : st.H) {
    const std::string at = " at " + format_str(sigma);
    if (!looks_extendible(u, sigma, t)) return "defined string is not below an extendible terminal" + at;
    if (e.sets.size() != k) return "wrong number of sets" + at;
    const FinSet all = e.all();
    const FinSet ran = range_of(sigma);
    if (!std::includes(ran.begin(), ran.end(), all.begin(), all.end())) return "H outside ran(sigma)" + at;
    if (!all.empty() && all.back() > e.u) return "u below max H" + at;
    if (k > 1 && std::count_if(e.sets.begin(), e.sets.end(), [](const FinSet& s) { return !s.empty(); }) != 1)
      return "not exactly one nonempty set" + at;
    for (const auto& [tau, f] : st.H) {
      if (tau.size() >= sigma.size() || !is_prefix(tau, sigma)) continue;
      if (f.u >= e.u) return "u not increasing along" + at;
      if (!all.empty() && all.front() <= f.u) return "H not above an earlier u" + at;
      const FinSet prev = f.all();
      if (!all.empty() && !prev.empty() && all.front() <= prev.back()) return "comparability fails" + at;
    }
  }
  const auto terms = extendible_terminals(u, t);
  std::optional<std::vector<std::size_t>> lens;
  for (const auto& s : terms) {
    std::vector<std::size_t> l;
    for (const auto& p : chain_of(st.H, s)) l.push_back(p.size());
    if (!lens) lens = l;
    else if (*lens != l) return "defined segments differ in length below " + format_str(s);
  }
  if (lens && lens->size() != st.n) return "n out of date";
  return std::nullopt;
}

namespace {

struct SearchView {
  bool searched = false;  // false when H is defined at the terminal
  CanonicalResult res;
  std::vector<std::size_t> counts;  // finished trees per level
};

/// Builds one derived sequence for target index j of a k > 1 run.
class HatBuilder {
 public:
  HatBuilder(std::size_t j, unsigned k) : j_(j), k_(k) {}

  void step(Stage t, std::size_t top, const std::vector<Str>& terms,
            const std::map<Str, SearchView>& views, bool stateChanged) {
    if (terms.empty()) return;
    auto counts = [&](const Str& s) { return views.at(s).counts; };
    const bool allTerminated = std::all_of(terms.begin(), terms.end(),
                                           [&](const Str& s) { return !views.at(s).searched; });
    if (!started_ || stateChanged || allTerminated) {
      restart(t, top, terms, views);
      return;
    }
    bool allNew = true;
    for (const auto& s : terms) allNew = allNew && counts(s)[j_] > base(s)[j_];
    if (allNew) {
      restart(t, top, terms, views);
      return;
    }
    if (lastTop_ && top <= *lastTop_) return;
    auto& cur = seq_.members.back();
    const std::size_t x0 = cur.size();
    if (j_ == 0) {
      for (const auto& s : terms) {
        if (!views.at(s).searched || counts(s)[0] != base(s)[0] || s.empty()) continue;
        if (x0 == 1) {
          cur.append({Str{s.back()}}, t);
        } else {
          if (s.size() != lastSigma_.size() + 1 || !is_prefix(lastSigma_, s)) continue;
          std::vector<Str> next;
          for (auto a : cur.level(x0 - 1)) {
            a.push_back(s.back());
            next.push_back(std::move(a));
          }
          cur.append(std::move(next), t);
        }
        lastSigma_ = s;
        lastTop_ = top;
        return;
      }
      return;
    }
    for (const auto& s : terms)
      if (!views.at(s).searched || counts(s)[j_ - 1] < base(s)[j_ - 1] + x0) return;
    for (const auto& s : terms) {
      if (counts(s)[j_] != base(s)[j_]) continue;
      const auto& lvl = views.at(s).res.forest.levels.at(j_ - 1);
      const FinSet ran = ramsey::ran(lvl.at(base(s)[j_ - 1] + x0 - 1));
      std::vector<Str> next;
      if (x0 == 1) {
        for (Num x : ran) next.push_back(Str{x});
      } else {
        for (const auto& a : cur.level(x0 - 1))
          for (Num x : ran)
            if (x > a.back()) {
              Str b = a;
              b.push_back(x);
              next.push_back(std::move(b));
            }
      }
      if (next.empty()) return;
      cur.append(std::move(next), t);
      lastTop_ = top;
      return;
    }
  }

  UniformSequence take() { return std::move(seq_); }

 private:
  std::size_t j_;
  unsigned k_;
  UniformSequence seq_;
  bool started_ = false;
  std::map<Str, std::vector<std::size_t>> baseline_;
  std::optional<std::size_t> lastTop_;
  Str lastSigma_;

  std::vector<std::size_t> base(const Str& s) const {
    const std::vector<std::size_t>* best = nullptr;
    std::size_t bestLen = 0;
    for (const auto& [p, c] : baseline_)
      if (is_prefix(p, s) && (!best || p.size() >= bestLen)) {
        best = &c;
        bestLen = p.size();
      }
    return best ? *best : std::vector<std::size_t>(k_, 0);
  }

  void restart(Stage t, std::size_t top, const std::vector<Str>& terms,
               const std::map<Str, SearchView>& views) {
    if (!started_ || seq_.members.back().size() > 1) {
      if (started_) seq_.members.back().close(t);
      seq_.members.emplace_back();
      seq_.members.back().append({Str{}}, t);
      started_ = true;
    }
    baseline_.clear();
    for (const auto& s : terms) baseline_[s] = views.at(s).counts;
    lastTop_ = top;
    lastSigma_.clear();
  }
};

class Machine {
 public:
  Machine(const CohConfig& cfg, Stage limit) : cfg_(cfg), limit_(limit), targets_(cfg.targets()) {
    if (auto e = cfg.validate()) throw std::invalid_argument("coh config: " + *e);
    st_.cPrefix.m = cfg.k + 1;
    for (std::size_t j = 0; j < (cfg.k > 1 ? cfg.k : 0); ++j) hats_.emplace_back(j, cfg.k);
  }

  CohRun run() {
    for (Stage t = 0; t < limit_; ++t) stage(t);
    CohRun out;
    out.k = cfg_.k;
    out.c = st_.cPrefix;
    out.finalState = st_;
    out.events = std::move(events_);
    out.violations = std::move(violations_);
    for (auto& h : hats_) out.hat.push_back(h.take());
    return out;
  }

 private:
  const CohConfig& cfg_;
  Stage limit_;
  std::vector<unsigned> targets_;
  CohState st_;
  std::vector<CohEvent> events_;
  std::vector<std::string> violations_;
  std::vector<HatBuilder> hats_;

  unsigned k() const { return cfg_.k; }

  SearchView idle() const {
    SearchView v;
    v.counts.assign(k(), 0);
    return v;
  }

  void undefine(const Str& s, Stage t, int cond) {
    auto it = st_.H.find(s);
    if (it == st_.H.end()) return;
    events_.push_back({t, CohEvent::Undefine, cond, s, it->second.sets, it->second.u, {}, {}, 0});
    st_.H.erase(it);
  }

  FSearch query(const Str& sigma, std::size_t j, Stage t, bool guessing) const {
    FSearch q;
    q.d = &cfg_.d;
    q.psi = &cfg_.psi;
    q.c = &st_.cPrefix.values;
    q.color = targets_[j];
    q.t = t;
    q.guessing = guessing;
    const auto chain = chain_of(st_.H, sigma);
    q.parity = static_cast<unsigned>(chain.size() % (k() + 1));
    for (const auto& p : chain) {
      const auto& e = st_.H.at(p);
      q.base = merge(q.base, e.sets[j]);
      q.floor = std::max<Num>(q.floor.value_or(0), static_cast<Num>(e.u));
    }
    return q;
  }

  FinSet universe(const Str& sigma, const FSearch& q) const {
    FinSet u;
    for (Num x : range_of(sigma))
      if ((!q.floor || x > *q.floor) && x < q.t && x <= cfg_.d.bound()) u.push_back(x);
    return u;
  }

  SearchView search(const Str& sigma, Stage t) const {
    SearchView v;
    v.searched = true;
    std::vector<FinSetPredicate> phis;
    for (std::size_t j = 0; j < k(); ++j) {
      FSearch q = query(sigma, j, t, false);
      phis.emplace_back("phi_sigma", std::vector<std::int64_t>{static_cast<std::int64_t>(j)},
                        [q](const FinSet& f, Stage) { return f_holds(f, q).has_value(); });
    }
    const FinSet uni = universe(sigma, query(sigma, 0, t, false));
    if (!uni.empty()) {
      SearchBudget b;
      b.maxStage = t;
      b.maxTrees = cfg_.maxTrees;
      v.res = canonical_search(phis, b, uni);
    }
    v.counts.assign(k(), 0);
    for (std::size_t j = 0; j < k() && j < v.res.forest.levels.size(); ++j)
      v.counts[j] = v.res.forest.levels[j].size();
    return v;
  }

  /// Least (j, F) over terminals of level-j trees, F guessing its color.
  std::optional<std::pair<std::size_t, FWitness>> pick(const Str& sigma, const SearchView& v,
                                                       Stage t) const {
    if (!v.res.found) return std::nullopt;
    for (std::size_t j = 0; j < k(); ++j) {
      const FSearch q = query(sigma, j, t, true);
      std::optional<FWitness> best;
      for (const auto& tree : v.res.forest.levels[j])
        for (const auto& a : tree.terminals())
          if (auto w = least_f(range_of(a), q); w && (!best || colex_less(w->f, best->f))) best = w;
      if (best) return std::make_pair(j, *best);
    }
    return std::nullopt;
  }

  void stage(Stage t) {
    const auto l = cfg_.seq.active(t);
    const TreeEnumeration* u = l ? &cfg_.seq.members[*l] : nullptr;
    auto terms = u ? extendible_terminals(*u, t) : std::vector<Str>{};
    const std::size_t eventsBefore = events_.size();

    st_.cPrefix.values.push_back(static_cast<unsigned>(st_.n % (k() + 1)));

    if (l != st_.activeL) {
      while (!st_.H.empty()) undefine(st_.H.begin()->first, t, 4);
      st_.activeL = l;
    }
    if (u) {
      std::vector<Str> gone;
      for (const auto& [s, e] : st_.H)
        if (!looks_extendible(*u, s, t)) gone.push_back(s);
      for (const auto& s : gone) undefine(s, t, 2);

      std::optional<std::size_t> least;
      for (const auto& [s, e] : st_.H) {
        bool bad = false;
        for (std::size_t j = 0; j < k() && !bad; ++j)
          for (Num x : e.sets[j]) bad = bad || guess_limit(cfg_.d, x, t) != targets_[j];
        if (bad) {
          const std::size_t m = chain_of(st_.H, s).size() - 1;
          least = least ? std::min(*least, m) : m;
        }
      }
      if (least) {
        std::vector<Str> drop;
        for (const auto& [s, e] : st_.H)
          if (chain_of(st_.H, s).size() - 1 >= *least) drop.push_back(s);
        for (const auto& s : drop) undefine(s, t, 3);
      }
    }

    std::map<Str, SearchView> views;
    if (k() > 1)
      for (const auto& s : terms) views[s] = st_.H.count(s) ? idle() : search(s, t);

    const bool allOpen = !terms.empty() && std::none_of(terms.begin(), terms.end(),
                                                        [&](const Str& s) { return st_.H.count(s) > 0; });
    if (allOpen) {
      std::vector<std::pair<std::size_t, FWitness>> picks;
      for (const auto& s : terms) {
        std::optional<std::pair<std::size_t, FWitness>> p;
        if (k() == 1) {
          const FSearch q = query(s, 0, t, true);
          if (auto w = least_f(universe(s, q), q)) p = std::make_pair(std::size_t{0}, *w);
        } else {
          p = pick(s, views.at(s), t);
        }
        if (!p) break;
        picks.push_back(std::move(*p));
      }
      if (picks.size() == terms.size())
        for (std::size_t i = 0; i < terms.size(); ++i) {
          HEntry e;
          e.sets.assign(k(), {});
          e.sets[picks[i].first] = picks[i].second.f;
          e.u = t;
          events_.push_back({t, CohEvent::Define, 1, terms[i], e.sets, t, picks[i].second.x,
                             picks[i].second.use, picks[i].first});
          st_.H[terms[i]] = std::move(e);
        }
    }

    st_.n = terms.empty() ? 0 : chain_of(st_.H, terms.front()).size();
    if (auto v = check_coh_state(st_, cfg_.seq, t, k()))
      violations_.push_back("stage " + std::to_string(t) + ": " + *v);

    if (k() > 1) {
      const bool changed = events_.size() != eventsBefore;
      if (changed)
        for (const auto& s : terms)
          if (st_.H.count(s)) views[s] = idle();
      const std::size_t top = u && u->top(t) ? *u->top(t) : 0;
      for (auto& h : hats_) h.step(t, top, terms, views, changed);
    }
  }
};

UnaryColoring trivial_unary(Stage n) {
  UnaryColoring c;
  c.m = 1;
  c.values.assign(n, 0);
  return c;
}

}  // namespace

CohRun coh_k1_run(const CohConfig& cfg, Stage stageLimit) {
  if (cfg.k != 1) throw std::invalid_argument("coh_k1_run needs k = 1");
  CohRun r = Machine(cfg, stageLimit).run();
  r.cj = {trivial_unary(stageLimit)};
  return r;
}

CohRun coh_general_run(const CohConfig& cfg, Stage stageLimit, unsigned depth) {
  if (depth == 0) throw RecursionBudget("recursion depth exhausted at k = " + std::to_string(cfg.k));
  if (cfg.k == 1) return coh_k1_run(cfg, stageLimit);
  CohRun r = Machine(cfg, stageLimit).run();
  const auto targets = cfg.targets();
  const auto radices = tuple_radices(cfg.k - 1);
  for (std::size_t j = 0; j < cfg.k; ++j) {
    CohConfig sub = cfg;
    sub.k = cfg.k - 1;
    sub.C0.push_back(targets[j]);
    sub.seq = r.hat[j];
    CohRun child = coh_general_run(sub, stageLimit, depth - 1);
    UnaryColoring cj;
    cj.m = static_cast<unsigned>(hash_count(cfg.k - 1));
    for (Stage x = 0; x < stageLimit; ++x) {
      std::vector<std::uint64_t> v{child.c(x)};
      for (const auto& g : child.cj) v.push_back(g(x));
      cj.values.push_back(static_cast<unsigned>(encode_tuple(v, radices)));
    }
    r.cj.push_back(std::move(cj));
    r.children.push_back(std::move(child));
  }
  return r;
}

EResult build_e(unsigned k, const PairColoring& d, const TableFunctional& psi, const EBudget& budget) {
  CohConfig cfg;
  cfg.k = k;
  for (unsigned i = 0; i < k; ++i) cfg.C.push_back(i);
  cfg.d = d;
  cfg.seq = trivial_sequence(budget.stageLimit);
  cfg.psi = psi;
  cfg.maxTrees = budget.maxTrees;
  EResult out;
  out.run = coh_general_run(cfg, budget.stageLimit, k);
  const auto radices = tuple_radices(k);
  out.e.m = static_cast<unsigned>(hash_count(k));
  for (Stage x = 0; x < budget.stageLimit; ++x) {
    std::vector<std::uint64_t> v{out.run.c(x)};
    for (const auto& g : out.run.cj) v.push_back(g(x));
    out.e.values.push_back(static_cast<unsigned>(encode_tuple(v, radices)));
  }
  return out;
}

namespace {

// First homogeneous extension of `h` by `need` more points from cand.
bool extend_homogeneous(FinSet& h, const FinSet& cand, std::size_t from, std::size_t need,
                        const PairColoring& d, unsigned color) {
  if (need == 0) return true;
  for (std::size_t i = from; i < cand.size(); ++i) {
    const Num y = cand[i];
    if (!std::all_of(h.begin(), h.end(), [&](Num x) { return d.at(x, y) == color; })) continue;
    h.push_back(y);
    if (extend_homogeneous(h, cand, i + 1, need - 1, d, color)) return true;
    h.pop_back();
  }
  return false;
}

}  // namespace

VerifyResult coh_diagonal_verify(const UnaryColoring& e, const PairColoring& d,
                                 const StabilityCert& cert, const TableFunctional& psi,
                                 const VerifyOptions& opt) {
  if (!check_cert(d, cert)) throw std::invalid_argument("coh_diagonal_verify: certificate does not match d");
  const Num n = d.bound();
  const Num support = std::min<Num>(psi_support(psi), n + 1);
  if (support > 20) throw std::length_error("coh_diagonal_verify: support too large");
  constexpr Stage kAll = std::numeric_limits<Stage>::max();
  FinSet upper;
  for (Num y = support; y <= n; ++y) upper.push_back(y);
  std::ostringstream trace;
  std::size_t largest = 0;
  trace << "theta " << opt.theta << " threshold " << opt.threshold << "\n";
  for (unsigned color = 0; color < d.colors(); ++color)
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << support); ++mask) {
      FinSet h;
      for (Num i = 0; i < support; ++i)
        if (mask >> i & 1U) h.push_back(i);
      if (!is_homogeneous(h, d, color)) continue;
      const std::size_t need = opt.theta > h.size() ? opt.theta - h.size() : 0;
      if (!extend_homogeneous(h, upper, 0, need, d, color)) continue;
      FinSet out;
      for (Num x : defined_set(psi, h, psi.input_bound(), kAll))
        if (x >= opt.threshold) out.push_back(x);
      if (out.size() < 2) return VerifyPass{VerifyPass::Small, h, color, out};
      std::set<unsigned> seen;
      for (Num x : out) {
        if (x >= e.size()) throw std::out_of_range("coh_diagonal_verify: e too short for Psi outputs");
        seen.insert(e(x));
      }
      if (seen.size() >= 2) return VerifyPass{VerifyPass::Split, h, color, out};
      largest = std::max(largest, out.size());
      trace << "color " << color << " H " << format_str(h) << " outputs " << format_str(out) << " e-color "
            << *seen.begin() << "\n";
    }
  trace << "e " << serialize_unary(e) << "\n" << serialize_pair(d) << serialize_table(psi);
  return VerifyFail{trace.str(), largest};
}

std::optional<PigeonholePair> residue_pigeonhole(const std::vector<std::size_t>& levels, unsigned k,
                                                 std::size_t theta) {
  std::vector<std::optional<std::size_t>> ji(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    std::map<std::size_t, std::size_t> count;
    for (std::size_t n = i; n < levels.size(); n += k + 1) ++count[levels[n]];
    for (const auto& [j, c] : count)
      if (c >= theta) {
        ji[i] = j;
        break;
      }
  }
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t i2 = i + 1; i2 <= k; ++i2)
      if (ji[i] && ji[i] == ji[i2]) return PigeonholePair{i, i2, *ji[i]};
  return std::nullopt;
}

std::string format_events(const std::vector<CohEvent>& events) {
  std::ostringstream out;
  for (const auto& ev : events) {
    static const char* names[] = {"define", "undefine"};
    out << "t=" << ev.stage << " " << names[ev.kind] << " cond" << ev.condition << " " << format_str(ev.sigma)
        << " H=";
    for (std::size_t j = 0; j < ev.sets.size(); ++j) out << (j ? "," : "") << format_str(ev.sets[j]);
    out << " u=" << ev.u;
    if (ev.witnessX) out << " x=" << *ev.witnessX << " use=" << *ev.witnessUse;
    out << "\n";
  }
  return out.str();
}

}  // namespace ramsey
