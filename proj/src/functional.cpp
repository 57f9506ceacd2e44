#include "ramsey/functional.hpp"

#include <algorithm>
#include <sstream>

namespace ramsey {

bool compatible(const TableEntry& a, const TableEntry& b) {
  const std::uint64_t common = a.domain & b.domain;
  return a.x == b.x && (a.bits & common) == (b.bits & common);
}

std::uint64_t oracle_mask(const FinSet& a) {
  std::uint64_t m = 0;
  for (Num x : a)
    if (x < 64) m |= std::uint64_t{1} << x;
  return m;
}

namespace {

void check_entry(const TableEntry& e) {
  if (e.use > 64) throw InvalidTable("use above 64");
  const std::uint64_t below = e.use == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << e.use) - 1;
  if (e.domain & ~below) throw InvalidTable("constraint reaches past the use");
  if (e.bits & ~e.domain) throw InvalidTable("constraint bits outside its domain");
  if (e.out > 1) throw InvalidTable("output must be 0 or 1");
  if (e.stage < e.use || e.stage <= e.x) throw InvalidTable("stage must be >= use and > x");
}

}  // namespace

TableFunctional::TableFunctional(std::vector<TableEntry> entries, std::uint64_t id)
    : entries_(std::move(entries)), id_(id) {
  for (const auto& e : entries_) check_entry(e);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      if (compatible(entries_[i], entries_[j]) && entries_[i].out != entries_[j].out)
        throw InconsistentTable("entries disagree on compatible oracles at input " +
                                std::to_string(entries_[i].x));
  index();
}

TableFunctional TableFunctional::unchecked(std::vector<TableEntry> entries, std::uint64_t id) {
  TableFunctional t;
  t.entries_ = std::move(entries);
  t.id_ = id;
  for (const auto& e : t.entries_) check_entry(e);
  t.index();
  return t;
}

void TableFunctional::index() {
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  byX_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Num x = entries_[i].x;
    if (byX_.size() <= x) byX_.resize(x + 1);
    byX_[x].push_back(i);
  }
}

Evaluation TableFunctional::eval_mask(std::uint64_t oracle, Num x, Stage stage) const {
  Evaluation out;
  if (x >= byX_.size()) return out;
  for (std::size_t i : byX_[x]) {
    const auto& e = entries_[i];
    if (e.stage > stage || !e.matches(oracle)) continue;
    if (!out.value) {
      out.value = e.out;
      out.use = e.use;
      out.stage = e.stage;
    } else if (*out.value != e.out) {
      throw InconsistentTable("matching entries disagree at input " + std::to_string(x));
    }
  }
  return out;
}

Evaluation TableFunctional::eval(const FinSet& a, Num x, Stage stage) const {
  return eval_mask(oracle_mask(a), x, stage);
}

FinSet defined_set(const TableFunctional& psi, const FinSet& a, Num bound, Stage stage) {
  FinSet out;
  const std::uint64_t m = oracle_mask(a);
  for (Num x = 0; x < bound; ++x) {
    auto e = psi.eval_mask(m, x, stage);
    if (e.value && *e.value == 1) out.push_back(x);
  }
  return out;
}

bool use_extension_stability(const TableFunctional& psi, const FinSet& f,
                             const FinSet& h, Num x, Stage stage) {
  auto ef = psi.eval(f, x, stage);
  if (!ef.converges()) throw std::invalid_argument("computation on F diverges");
  const Num u = *ef.use;
  const std::uint64_t below = u >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << u) - 1;
  const bool agree = (oracle_mask(f) & below) == (oracle_mask(h) & below);
  if (agree) {
    auto eh = psi.eval(h, x, stage);
    if (eh.value != ef.value)
      throw InconsistentTable("value changed although the oracle agrees below the use");
  }
  return agree;
}

FinSet join(const FinSet& a, const FinSet& b) {
  std::vector<Num> out;
  for (Num x : a) out.push_back(2 * x);
  for (Num x : b) out.push_back(2 * x + 1);
  return to_set(std::move(out));
}

std::string serialize_table(const TableFunctional& t) {
  std::string s;
  for (const auto& e : t.entries()) {
    std::string bits, dom;
    for (Num i = 0; i < 64; ++i)
      if (e.domain >> i & 1U) {
        bits += (e.bits >> i & 1U) ? '1' : '0';
        if (!dom.empty()) dom += ',';
        dom += std::to_string(i);
      }
    if (bits.empty()) bits = dom = "-";
    s += bits + " @ " + dom + " ; " + std::to_string(e.x) + " ; " + std::to_string(e.out) +
         " ; " + std::to_string(e.use) + " ; " + std::to_string(e.stage) + "\n";
  }
  return s;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& s) {
  std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a number, got '" + s + "'");
  return std::stoull(t);
}

}  // namespace

TableFunctional parse_table(const std::string& text, std::uint64_t id) {
  std::vector<TableEntry> entries;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ';')) fields.push_back(trim(f));
    if (fields.size() != 5) throw ParseError("table line needs 5 fields: " + line);
    auto at = fields[0].find('@');
    if (at == std::string::npos) throw ParseError("constraint needs '@': " + line);
    std::string bits = trim(fields[0].substr(0, at));
    std::string dom = trim(fields[0].substr(at + 1));
    TableEntry e;
    if (bits != "-" || dom != "-") {
      std::vector<Num> positions;
      std::stringstream ds(dom);
      std::string p;
      while (std::getline(ds, p, ',')) positions.push_back(static_cast<Num>(parse_uint(p)));
      if (positions.size() != bits.size()) throw ParseError("bits/domain length mismatch: " + line);
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (positions[i] >= 64) throw ParseError("constraint position above 63");
        if (bits[i] != '0' && bits[i] != '1') throw ParseError("bad bit in: " + line);
        e.domain |= std::uint64_t{1} << positions[i];
        if (bits[i] == '1') e.bits |= std::uint64_t{1} << positions[i];
      }
    }
    e.x = static_cast<Num>(parse_uint(fields[1]));
    e.out = static_cast<unsigned>(parse_uint(fields[2]));
    e.use = static_cast<Num>(parse_uint(fields[3]));
    e.stage = parse_uint(fields[4]);
    entries.push_back(e);
  }
  try {
    return TableFunctional(std::move(entries), id);
  } catch (const InvalidTable& e) {
    throw ParseError(std::string("invalid table: ") + e.what());
  }
}

std::vector<TableEntry> space_entries(const TableSpace& space) {
  std::vector<TableEntry> out;
  for (Num x = 0; x < space.inputBound; ++x)
    for (Num u = 0; u <= space.maxUse; ++u) {
      const std::uint64_t full = (std::uint64_t{1} << u) - 1;
      for (std::uint64_t dom = 0; dom <= full; ++dom) {
        if ((dom & ~full) != 0) continue;
        if (space.fullDomain && dom != full) continue;
        // bits range over the submasks of dom
        for (std::uint64_t bits = dom;; bits = (bits - 1) & dom) {
          for (unsigned o = space.outputsOne ? 1U : 0U; o <= 1; ++o) {
            const Stage lo = std::max<Stage>(u, x + 1);
            const Stage hi = space.minimalStage ? lo : std::max(lo, space.maxStage);
            for (Stage s = lo; s <= hi; ++s) out.push_back({dom, bits, x, o, u, s});
          }
          if (bits == 0) break;
        }
      }
    }
  return out;
}

std::uint64_t for_each_table(const TableSpace& space,
                             const std::function<bool(const TableFunctional&)>& fn) {
  const auto cand = space_entries(space);
  const std::size_t m = cand.size();
  std::uint64_t id = 0;
  std::vector<std::size_t> pick;
  bool go = true;
  // Depth-first over increasing index combinations, pruning on conflicts.
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!go) return;
    std::vector<TableEntry> rows;
    for (auto i : pick) rows.push_back(cand[i]);
    go = fn(TableFunctional(std::move(rows), id++));
    if (pick.size() == space.maxEntries) return;
    for (std::size_t i = from; i < m && go; ++i) {
      bool ok = true;
      for (auto p : pick)
        if (compatible(cand[p], cand[i]) && cand[p].out != cand[i].out) ok = false;
      if (!ok) continue;
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return id;
}

}  // namespace ramsey
