#include "ramsey/commands.hpp"

#include <sstream>
#include <variant>

#include "ramsey/coh.hpp"
#include "ramsey/enumerations.hpp"
#include "ramsey/forcing_p.hpp"
#include "ramsey/forest.hpp"

namespace ramsey {

namespace {

Json coh_state_json(const CohState& st) {
  Json h = Json::object();
  for (const auto& [sigma, entry] : st.H) {
    Json sets = Json::array();
    for (const auto& s : entry.sets) sets.push_back(format_str(s));
    h[format_str(sigma)] = {{"sets", sets}, {"u", entry.u}};
  }
  return {{"n", st.n}, {"H", h}, {"prefix", serialize_unary(st.cPrefix)}};
}

}  // namespace

Report simulate_nured(const TableFunctional& psi, unsigned k, const std::optional<PairColoring>& d,
                      const RunConfig& cfg) {
  if (auto e = cfg.validate()) throw std::invalid_argument(*e);
  Report rep;
  rep.command = "simulate nured";
  rep.config = cfg.to_json();
  NuredBudget b;
  b.top = cfg.universeBound;
  b.maxStage = cfg.stageLimit;
  const auto run = nured_run(psi, k, b);
  std::optional<StabilityCert> cert;
  if (d) {
    if (d->bound() < b.top || !d->total()) throw std::invalid_argument("coloring must be total on [0, universe]");
    cert = stability_cert(*d);
  }
  Json stages = Json::array();
  std::ostringstream text;
  std::size_t case3 = 0;
  for (std::size_t i = 0; i < run.stages.size(); ++i) {
    const auto& st = run.stages[i];
    Json s{{"stage", i}, {"floor", st.before.n()}};
    text << "stage " << i << " at n = " << st.before.n() << ": ";
    if (auto* c1 = std::get_if<Case1>(&st.outcome)) {
      s["case"] = 1;
      s["z"] = c1->z;
      text << "case 1, no phi-set above " << c1->z << "\n";
    } else if (auto* c2 = std::get_if<Case2>(&st.outcome)) {
      s["case"] = 2;
      s["level"] = c2->level;
      s["path"] = format_str(c2->path);
      s["depth"] = c2->depth;
      text << "case 2, open subtree at level " << c2->level << " along " << format_str(c2->path) << "\n";
    } else {
      const auto& c3 = std::get<Case3>(st.outcome);
      ++case3;
      s["case"] = 3;
      s["u"] = c3.u;
      s["next"] = c3.next.n();
      s["forest"] = serialize_forest(c3.forest);
      text << "case 3, forest on " << c3.forest.range().size() << " points, u = " << c3.u << ", n -> "
           << c3.next.n() << "\n";
      if (cert) {
        auto res = diagonal_check(c3, st.before.n(), *cert, psi, b.maxStage);
        Json dj{{"ok", res.ok()}, {"x0", res.x0}, {"x1", res.x1}, {"color", res.color}, {"L", format_str(res.l)}};
        if (!res.ok()) {
          dj["failure"] = res.failure;
          rep.fail();
        }
        s["diagonal"] = dj;
        text << "  diagonal: " << (res.ok() ? "pair (" + std::to_string(res.x0) + ", " + std::to_string(res.x1) + ")"
                                            : "failed: " + res.failure)
             << "\n";
      }
    }
    stages.push_back(std::move(s));
  }
  rep.summary = {{"k", k}, {"stages", run.stages.size()}, {"case3Stages", case3},
                 {"finalN", run.final.n()}, {"exhausted", run.exhausted}};
  rep.details["stages"] = stages;
  rep.details["final"] = serialize_condition(run.final);
  rep.details["text"] = text.str();
  if (run.exhausted) {
    rep.fail();
    rep.summary["note"] = run.note;
  }
  if (auto e = run.final.check_locks()) rep.violate("final locks: " + *e);
  PCondition prev;
  for (const auto& st : run.stages) {
    if (!p_extends(st.before, prev)) rep.violate("conditions not monotone");
    prev = st.before;
  }
  return rep;
}

Report simulate_coh(const TableFunctional& psi, const PairColoring& d, unsigned k, Stage stages,
                    const RunConfig& cfg) {
  if (auto e = cfg.validate()) throw std::invalid_argument(*e);
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k == 1 && d.colors() != 2) throw std::invalid_argument("k = 1 needs a 2-coloring");
  if (k > 1 && d.colors() != k) throw std::invalid_argument("k > 1 needs a k-coloring");
  Report rep;
  rep.command = "simulate coh";
  rep.config = cfg.to_json();
  CohRun run;
  UnaryColoring e;
  if (k == 1) {
    CohConfig c;
    c.k = 1;
    c.C = {0, 1};
    c.C0 = {1};
    c.d = d;
    c.seq = trivial_sequence(d.bound() + 1);
    c.psi = psi;
    run = coh_k1_run(c, stages);
    e = run.c;
  } else {
    if (cfg.depth < k) throw std::invalid_argument("recursion depth below k");
    auto er = build_e(k, d, psi, {stages, 8});
    run = std::move(er.run);
    e = er.e;
  }
  const auto cert = stability_cert(d);
  auto v = coh_diagonal_verify(e, d, cert, psi, {cfg.theta, 0});
  rep.summary = {{"k", k}, {"stages", stages}, {"events", run.events.size()}, {"children", run.children.size()}};
  if (auto* p = std::get_if<VerifyPass>(&v)) {
    rep.summary["verify"] = p->kind == VerifyPass::Small ? "pass (small image)" : "pass (split image)";
    rep.details["verify"] = {{"H", format_str(p->h)}, {"color", p->color}, {"outputs", format_str(p->outputs)}};
  } else {
    rep.summary["verify"] = "fail";
    rep.details["verify"] = {{"trace", std::get<VerifyFail>(v).trace}};
    rep.fail();
  }
  rep.details["coloring"] = serialize_unary(e);
  rep.details["text"] = format_events(run.events) + serialize_unary(e);
  std::vector<const CohRun*> todo{&run};
  while (!todo.empty()) {
    const CohRun* r = todo.back();
    todo.pop_back();
    for (const auto& msg : r->violations) rep.violate(msg);
    for (const auto& c : r->children) todo.push_back(&c);
  }
  if (rep.verdict == Verdict::Violation) rep.details["state"] = coh_state_json(run.finalState);
  return rep;
}

std::vector<Dedication> default_schedule(std::size_t stages, std::size_t phis, std::size_t psis,
                                         std::size_t denseCount) {
  std::vector<Dedication> out;
  for (std::size_t s = 0; s < stages; ++s) {
    const std::size_t i = s / 3;
    Dedication d;
    if (s % 3 == 0) {
      d.kind = Dedication::Q;
      d.phi = phis ? i % phis : 0;
    } else if (s % 3 == 1) {
      d.kind = Dedication::R;
      const std::size_t combos = std::max<std::size_t>(1, phis * psis * 2);
      const std::size_t c = i % combos;
      d.j = static_cast<unsigned>(c % 2);
      d.psi = psis ? (c / 2) % psis : 0;
      d.phi = phis && psis ? c / (2 * psis) : 0;
    } else {
      // (t, n) pairs are resolved against the ledger when the stage runs.
      d.kind = Dedication::P;
      d.m = denseCount ? i % denseCount : 0;
      d.n = denseCount ? i / denseCount : i;
    }
    out.push_back(d);
  }
  return out;
}

Report simulate_nscred(const std::vector<ColumnPairFunctional>& phis, const std::vector<TableFunctional>& psis,
                       std::size_t stages, const RunConfig& cfg) {
  if (auto e = cfg.validate()) throw std::invalid_argument(*e);
  Report rep;
  rep.command = "simulate nscred";
  rep.config = cfg.to_json();
  RequirementContext ctx;
  ctx.phis = phis;
  ctx.psis = psis;
  ctx.theta = cfg.theta;
  auto ledger = make_ledger(cfg.universeBound);
  Json log = Json::array();
  std::map<std::string, std::size_t> branches;
  std::ostringstream text;
  for (auto d : default_schedule(stages, phis.size(), psis.size(), ctx.denseCount)) {
    if (d.kind == Dedication::P) {
      // Walk the entries of Y in order of (t, n) as the ledger now stands.
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t t = 0; t < ledger.ySizes.size(); ++t)
        for (std::size_t n = 0; n < ledger.ySizes[t]; ++n) slots.emplace_back(t, n);
      if (!slots.empty()) std::tie(d.t, d.n) = slots[d.n % slots.size()];
      else d.t = d.n = 0;
    }
    ActionReport a;
    try {
      a = run_requirement_stage(ledger, d, ctx);
    } catch (const BudgetExhausted& e) {
      rep.fail();
      rep.summary["stoppedBy"] = std::string("tree budget: ") + e.what();
      break;
    }
    ++branches[a.branch];
    text << "stage " << a.stage << ": " << a.branch;
    if (!a.certificate.empty()) text << " [" << a.certificate << "]";
    text << "\n";
    static const char* kinds[] = {"P", "Q", "R"};
    log.push_back({{"stage", a.stage}, {"dedication", kinds[d.kind]}, {"t", d.t}, {"n", d.n}, {"m", d.m},
                   {"phi", d.phi}, {"psi", d.psi}, {"j", d.j}, {"branch", a.branch},
                   {"certificate", a.certificate}, {"violations", a.violations},
                   {"ledger", format_ledger(ledger)}});
    for (const auto& v : a.violations) rep.violate("stage " + std::to_string(a.stage) + ": " + v);
    if (!a.violations.empty()) {
      rep.details["state"] = format_ledger(ledger);
      break;
    }
  }
  Json b = Json::object();
  for (const auto& [k, n] : branches) b[k] = n;
  rep.summary["stages"] = log.size();
  rep.summary["theta"] = ctx.theta;
  rep.summary["branches"] = b;
  rep.summary["ySize"] = ledger.y.size();
  rep.details["stages"] = log;
  rep.details["text"] = text.str();
  return rep;
}

Report check_reduction(const FiniteProblem& q, const FiniteProblem& p, const TableFunctional& phi,
                       const TableFunctional& psi, Mode mode) {
  Report rep;
  rep.command = "check reduction";
  for (const auto* pr : {&q, &p})
    if (auto e = pr->validate()) throw std::invalid_argument(pr->name + ": " + *e);
  rep.summary = {{"q", q.spec}, {"p", p.spec}, {"mode", mode_name(mode)}};
  if (mode == Mode::U || mode == Mode::SU) {
    auto r = check_uniform(q, p, {phi, psi, mode});
    if (std::holds_alternative<Holds>(r)) {
      rep.summary["result"] = "holds";
    } else {
      const auto& c = std::get<Counterexample>(r);
      rep.summary["result"] = "counterexample";
      Json cj{{"x", format_str(c.x)}, {"reason", c.reason}};
      if (c.xhat) cj["xhat"] = format_str(*c.xhat);
      if (c.yhat) cj["yhat"] = format_str(*c.yhat);
      rep.details["counterexample"] = cj;
      rep.fail();
    }
    return rep;
  }
  auto r = check_computable(q, p, mode == Mode::SC, {{phi}, {psi}});
  if (std::holds_alternative<ComputableHolds>(r)) {
    rep.summary["result"] = "holds";
  } else {
    const auto& f = std::get<RefutedAtScale>(r);
    rep.summary["result"] = "refuted at scale";
    rep.details["refutation"] = {{"x", format_str(f.x)}, {"searched", f.searched}, {"reason", f.reason}};
    rep.fail();
  }
  return rep;
}

Report check_dataset(const ReductionDataset& d) {
  Report rep;
  rep.command = "check reduction";
  const auto o = evaluate_dataset(d);
  rep.summary = {{"dataset", o.dataset}, {"su", o.su}, {"sc", o.sc}, {"u", o.u}, {"c", o.c}};
  rep.details["notes"] = o.notes;
  auto diag = relation_diagram({o});
  std::ostringstream text;
  for (const auto& l : diag.lines) text << l << "\n";
  rep.details["text"] = text.str();
  for (const auto& v : diag.violations) rep.violate(v);
  return rep;
}

Report emit_digits(const UnaryColoring& e, unsigned k) {
  Report rep;
  rep.command = "emit digits";
  const auto fam = digit_family(e, k);
  Json points = Json::array();
  std::ostringstream text;
  for (Num x = 0; x < e.size(); ++x) {
    std::string digits;
    for (std::size_t s = 0; s < fam.width; ++s) digits += static_cast<char>('0' + fam.digit(s, x));
    points.push_back({{"x", x}, {"e", e(x)}, {"digits", digits}});
    text << x << " " << e(x) << " " << digits << "\n";
  }
  rep.summary = {{"k", k}, {"width", fam.width}, {"points", e.size()}};
  rep.details["points"] = points;
  rep.details["columns"] = serialize_digits(fam);
  rep.details["text"] = text.str();
  return rep;
}

std::vector<std::string> split_blocks(const std::string& text) {
  std::vector<std::string> out(1);
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line == "---") out.emplace_back();
    else out.back() += line + "\n";
  }
  return out;
}

}  // namespace ramsey
