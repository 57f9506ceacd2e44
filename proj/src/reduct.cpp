#include "ramsey/reduct.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace ramsey {

namespace {

constexpr Stage kAllStages = std::numeric_limits<Stage>::max();

bool within(const FinSet& s, Num width) { return s.empty() || s.back() < width; }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> words(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

Num number(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a number, got '" + s + "'");
  return static_cast<Num>(std::stoul(s));
}

FinSet parse_set(const std::string& s) { return to_set(parse_str(s)); }

// Row copying oracle bit `from` to output y.
void copy_rows(std::vector<TableEntry>& rows, Num y, Num from) {
  const std::uint64_t m = std::uint64_t{1} << from;
  const Stage st = std::max<Stage>(from + 1, y + 1);
  rows.push_back({m, 0, y, 0, from + 1, st});
  rows.push_back({m, m, y, 1, from + 1, st});
}

}  // namespace

bool FiniteProblem::is_instance(const FinSet& x) const {
  if (isInstance) return isInstance(x);
  return std::find(instances.begin(), instances.end(), x) != instances.end();
}

std::optional<std::string> FiniteProblem::validate() const {
  if (instanceWidth > 32 || solutionWidth > 32) return "widths above 32 do not fit an oracle join";
  if (!solutionsOf) return "no solution map";
  for (const auto& x : instances) {
    if (!within(x, instanceWidth)) return "instance " + format_str(x) + " exceeds the instance width";
    if (!is_instance(x)) return "instance " + format_str(x) + " rejected by its own test";
    const auto sols = solutionsOf(x);
    if (sols.empty()) return "instance " + format_str(x) + " has no solution";
    for (const auto& s : sols)
      if (!within(s, solutionWidth)) return "solution " + format_str(s) + " exceeds the solution width";
  }
  return std::nullopt;
}

FiniteProblem listed_problem(std::string name, Num instanceWidth, Num solutionWidth,
                             std::vector<std::pair<FinSet, std::vector<FinSet>>> table) {
  FiniteProblem p;
  p.name = std::move(name);
  p.instanceWidth = instanceWidth;
  p.solutionWidth = solutionWidth;
  auto map = std::make_shared<std::map<FinSet, std::vector<FinSet>>>();
  for (auto& [x, sols] : table) {
    p.instances.push_back(x);
    std::sort(sols.begin(), sols.end());
    (*map)[x] = sols;
  }
  p.solutionsOf = [map](const FinSet& x) {
    auto it = map->find(x);
    return it == map->end() ? std::vector<FinSet>{} : it->second;
  };
  p.isInstance = [map](const FinSet& x) { return map->count(x) > 0; };
  p.spec = "listed " + std::to_string(instanceWidth) + " " + std::to_string(solutionWidth) + " (" +
           std::to_string(p.instances.size()) + " instances)";
  return p;
}

Num color_bits(unsigned k) {
  Num b = 0;
  while ((1u << b) < k) ++b;
  return b;
}

FinSet encode_coloring(const std::vector<unsigned>& c, unsigned k) {
  const Num b = color_bits(k);
  FinSet out;
  for (Num x = 0; x < c.size(); ++x)
    for (Num i = 0; i < b; ++i)
      if (c[x] >> i & 1) out.push_back(x * b + i);
  return out;
}

std::vector<unsigned> decode_coloring(const FinSet& x, unsigned k, Num n) {
  const Num b = color_bits(k);
  std::vector<unsigned> c(n, 0);
  for (Num bit : x)
    if (b > 0 && bit < n * b) c[bit / b] |= 1u << (bit % b);
  return c;
}

FiniteProblem rt1_problem(unsigned k, Num n, Num minSize) {
  if (k == 0 || n == 0) throw std::invalid_argument("rt1 needs k >= 1 and n >= 1");
  FiniteProblem p;
  p.name = "RT1_" + std::to_string(k) + "(n=" + std::to_string(n) + ")";
  p.instanceWidth = n * color_bits(k);
  p.solutionWidth = n;
  std::vector<unsigned> c(n, 0);
  for (;;) {
    p.instances.push_back(encode_coloring(c, k));
    Num x = 0;
    while (x < n && ++c[x] == k) c[x++] = 0;
    if (x == n) break;
  }
  p.isInstance = [k, n, w = p.instanceWidth](const FinSet& x) {
    if (!within(x, w)) return false;
    const auto c = decode_coloring(x, k, n);
    return std::all_of(c.begin(), c.end(), [k](unsigned v) { return v < k; });
  };
  p.solutionsOf = [k, n, minSize](const FinSet& x) {
    const auto c = decode_coloring(x, k, n);
    std::vector<FinSet> out;
    for (unsigned color = 0; color < k; ++color) {
      FinSet cls;
      for (Num y = 0; y < n; ++y)
        if (c[y] == color) cls.push_back(y);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << cls.size()); ++m) {
        FinSet s;
        for (std::size_t i = 0; i < cls.size(); ++i)
          if (m >> i & 1) s.push_back(cls[i]);
        if (s.size() >= minSize && !s.empty()) out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  p.spec = "rt1 " + std::to_string(k) + " " + std::to_string(n) + " " + std::to_string(minSize);
  return p;
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::U: return "u";
    case Mode::SU: return "su";
    case Mode::C: return "c";
    case Mode::SC: return "sc";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "u") return Mode::U;
  if (s == "su") return Mode::SU;
  if (s == "c") return Mode::C;
  if (s == "sc") return Mode::SC;
  throw ParseError("unknown reduction mode '" + s + "'");
}

std::optional<FinSet> apply_set(const TableFunctional& f, const FinSet& oracle, Num width) {
  FinSet out;
  for (Num y = 0; y < width; ++y) {
    auto ev = f.eval(oracle, y, kAllStages);
    if (!ev.value) return std::nullopt;
    if (*ev.value == 1) out.push_back(y);
  }
  return out;
}

UniformResult check_uniform(const FiniteProblem& q, const FiniteProblem& p, const ReductionCandidate& cand) {
  if (cand.mode != Mode::U && cand.mode != Mode::SU) throw std::invalid_argument("check_uniform takes u or su");
  const bool strong = cand.mode == Mode::SU;
  for (const auto& x : q.instances) {
    auto xhat = apply_set(cand.phi, x, p.instanceWidth);
    if (!xhat) return Counterexample{x, std::nullopt, std::nullopt, "Phi diverges"};
    if (!p.is_instance(*xhat)) return Counterexample{x, xhat, std::nullopt, "Phi^X is not an instance of P"};
    const auto good = q.solutionsOf(x);
    for (const auto& yhat : p.solutionsOf(*xhat)) {
      auto out = apply_set(cand.psi, strong ? yhat : join(x, yhat), q.solutionWidth);
      if (!out) return Counterexample{x, xhat, yhat, "Psi diverges"};
      if (!std::binary_search(good.begin(), good.end(), *out))
        return Counterexample{x, xhat, yhat, "Psi gives " + format_str(*out) + ", not a solution to X"};
    }
  }
  return Holds{};
}

ComputableResult check_computable(const FiniteProblem& q, const FiniteProblem& p, bool strong,
                                  const CandidateSpace& space) {
  ComputableHolds ok;
  const std::size_t searched = space.phis.size() * space.psis.size();
  for (const auto& x : q.instances) {
    const auto good = q.solutionsOf(x);
    std::optional<InstanceWitness> found;
    for (std::size_t fi = 0; fi < space.phis.size() && !found; ++fi) {
      auto xhat = apply_set(space.phis[fi], x, p.instanceWidth);
      if (!xhat || !p.is_instance(*xhat)) continue;
      InstanceWitness w{x, fi, {}};
      bool all = true;
      for (const auto& yhat : p.solutionsOf(*xhat)) {
        std::optional<std::size_t> hit;
        for (std::size_t si = 0; si < space.psis.size() && !hit; ++si) {
          auto out = apply_set(space.psis[si], strong ? yhat : join(x, yhat), q.solutionWidth);
          if (out && std::binary_search(good.begin(), good.end(), *out)) hit = si;
        }
        if (!hit) {
          all = false;
          break;
        }
        w.psiFor.emplace_back(yhat, *hit);
      }
      if (all) found = std::move(w);
    }
    if (!found) return RefutedAtScale{x, searched, "no witness pair for instance " + format_str(x)};
    ok.witnesses.push_back(std::move(*found));
  }
  return ok;
}

TableFunctional lift_to_join(const TableFunctional& psi) {
  std::vector<TableEntry> rows;
  for (auto e : psi.entries()) {
    if (e.use > 32) throw std::invalid_argument("psi use above 32 cannot be lifted");
    std::uint64_t dom = 0, bits = 0;
    for (Num i = 0; i < 32; ++i) {
      if (e.domain >> i & 1) dom |= std::uint64_t{1} << (2 * i + 1);
      if (e.bits >> i & 1) bits |= std::uint64_t{1} << (2 * i + 1);
    }
    e.domain = dom;
    e.bits = bits;
    e.use *= 2;
    e.stage = std::max<Stage>(e.stage, e.use);
    rows.push_back(e);
  }
  return TableFunctional(rows, psi.id());
}

NotionOutcomes evaluate_dataset(const ReductionDataset& d) {
  NotionOutcomes o;
  o.dataset = d.name;
  CandidateSpace strongSpace, joinSpace;
  for (const auto& c : d.candidates) {
    strongSpace.phis.push_back(c.phi);
    joinSpace.phis.push_back(c.phi);
    const TableFunctional joined = c.strong ? lift_to_join(c.psi) : c.psi;
    if (c.strong) {
      strongSpace.psis.push_back(c.psi);
      auto r = check_uniform(d.q, d.p, {c.phi, c.psi, Mode::SU});
      if (std::holds_alternative<Holds>(r)) o.su = true;
      else o.notes.push_back("su " + c.name + ": " + std::get<Counterexample>(r).reason + " at X=" +
                             format_str(std::get<Counterexample>(r).x));
    }
    joinSpace.psis.push_back(joined);
    auto r = check_uniform(d.q, d.p, {c.phi, joined, Mode::U});
    if (std::holds_alternative<Holds>(r)) o.u = true;
    else o.notes.push_back("u " + c.name + ": " + std::get<Counterexample>(r).reason + " at X=" +
                           format_str(std::get<Counterexample>(r).x));
  }
  auto sc = check_computable(d.q, d.p, true, strongSpace);
  o.sc = std::holds_alternative<ComputableHolds>(sc);
  if (!o.sc) o.notes.push_back("sc: " + std::get<RefutedAtScale>(sc).reason);
  auto c = check_computable(d.q, d.p, false, joinSpace);
  o.c = std::holds_alternative<ComputableHolds>(c);
  if (!o.c) o.notes.push_back("c: " + std::get<RefutedAtScale>(c).reason);
  return o;
}

DiagramReport relation_diagram(const std::vector<NotionOutcomes>& results) {
  DiagramReport rep;
  auto word = [](bool h) { return h ? std::string("Holds") : std::string("no"); };
  for (const auto& r : results) {
    rep.lines.push_back(r.dataset + ": su=" + word(r.su) + " sc=" + word(r.sc) + " u=" + word(r.u) +
                        " c=" + word(r.c));
    auto arrow = [&](bool strong, bool weak, const char* name) {
      if (strong && !weak) rep.violations.push_back(r.dataset + ": " + name);
    };
    arrow(r.su, r.sc, "su without sc");
    arrow(r.su, r.u, "su without u");
    arrow(r.sc, r.c, "sc without c");
    arrow(r.u, r.c, "u without c");
  }
  return rep;
}

// ---- text formats ----

namespace {

struct Lines {
  std::vector<std::string> v;
  std::size_t i = 0;
  explicit Lines(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      line = trim(line);
      if (!line.empty()) v.push_back(line);
    }
  }
  bool done() const { return i >= v.size(); }
  const std::string& peek() const { return v.at(i); }
  std::string next() {
    if (done()) throw ParseError("unexpected end of input");
    return v[i++];
  }
};

FiniteProblem read_problem(Lines& in) {
  const auto head = words(in.next());
  if (head.size() < 3 || head[0] != "problem") throw ParseError("expected 'problem NAME KIND ...'");
  if (head[2] == "rt1") {
    if (head.size() != 6) throw ParseError("rt1 problem needs K N MIN");
    auto p = rt1_problem(number(head[3]), number(head[4]), number(head[5]));
    p.name = head[1];
    return p;
  }
  if (head[2] != "listed" || head.size() != 5) throw ParseError("problem kind must be 'rt1' or 'listed IW SW'");
  std::vector<std::pair<FinSet, std::vector<FinSet>>> table;
  for (;;) {
    const std::string line = in.next();
    if (line == "end") break;
    const auto colon = line.find(':');
    if (line.rfind("instance", 0) != 0 || colon == std::string::npos)
      throw ParseError("expected 'instance <..> : <..> ...': " + line);
    FinSet x = parse_set(trim(line.substr(8, colon - 8)));
    std::vector<FinSet> sols;
    for (const auto& w : words(line.substr(colon + 1))) sols.push_back(parse_set(w));
    table.emplace_back(std::move(x), std::move(sols));
  }
  auto p = listed_problem(head[1], number(head[3]), number(head[4]), std::move(table));
  if (auto e = p.validate()) throw ParseError("problem " + head[1] + ": " + *e);
  return p;
}

TableFunctional read_table(Lines& in) {
  std::string text;
  while (!in.done() && in.peek() != "psi" && in.peek() != "end") text += in.next() + "\n";
  return parse_table(text);
}

}  // namespace

FiniteProblem parse_problem(const std::string& text) {
  Lines in(text);
  auto p = read_problem(in);
  if (!in.done()) throw ParseError("trailing text after problem: " + in.peek());
  return p;
}

ReductionDataset parse_dataset(const std::string& text) {
  Lines in(text);
  ReductionDataset d;
  const auto head = words(in.next());
  if (head.size() != 2 || head[0] != "dataset") throw ParseError("expected 'dataset NAME'");
  d.name = head[1];
  d.q = read_problem(in);
  d.p = read_problem(in);
  while (!in.done()) {
    const auto c = words(in.next());
    if (c.size() != 3 || c[0] != "candidate" || (c[2] != "strong" && c[2] != "join"))
      throw ParseError("expected 'candidate NAME strong|join'");
    NamedCandidate nc;
    nc.name = c[1];
    nc.strong = c[2] == "strong";
    if (in.next() != "phi") throw ParseError("candidate " + nc.name + ": expected 'phi'");
    nc.phi = read_table(in);
    if (in.next() != "psi") throw ParseError("candidate " + nc.name + ": expected 'psi'");
    nc.psi = read_table(in);
    if (in.next() != "end") throw ParseError("candidate " + nc.name + ": expected 'end'");
    d.candidates.push_back(std::move(nc));
  }
  return d;
}

ReductionDataset rt1_inclusion(unsigned j, unsigned k, Num n, Num minSize) {
  ReductionDataset d;
  d.name = "rt1_" + std::to_string(j) + "_into_" + std::to_string(k);
  d.q = rt1_problem(j, n, minSize);
  d.p = rt1_problem(k, n, minSize);
  const Num bj = color_bits(j), bk = color_bits(k);
  std::vector<TableEntry> phi, psi;
  for (Num x = 0; x < n; ++x)
    for (Num i = 0; i < bk; ++i) {
      const Num y = x * bk + i;
      if (i < bj) copy_rows(phi, y, x * bj + i);
      else phi.push_back({0, 0, y, 0, 0, y + 1});
    }
  for (Num y = 0; y < n; ++y) copy_rows(psi, y, y);
  d.candidates.push_back({"inclusion", TableFunctional(phi), TableFunctional(psi), true});
  return d;
}

}  // namespace ramsey
