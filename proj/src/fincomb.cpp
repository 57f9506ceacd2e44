#include "ramsey/fincomb.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ramsey {

bool colex_less(const FinSet& a, const FinSet& b) {
  auto i = a.rbegin(), j = b.rbegin();
  for (; i != a.rend() && j != b.rend(); ++i, ++j)
    if (*i != *j) return *i < *j;
  return i == a.rend() && j != b.rend();
}

FinSet set_union(const FinSet& a, const FinSet& b) {
  FinSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const FinSet& a, const FinSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

FinSet to_set(std::vector<Num> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

FinSetPredicate::FinSetPredicate(std::string name,
                                 std::vector<std::int64_t> params, Fn fn,
                                 std::string description, bool upwardClosed)
    : name_(std::move(name)),
      params_(std::move(params)),
      fn_(std::move(fn)),
      description_(std::move(description)),
      upwardClosed_(upwardClosed) {}

std::string FinSetPredicate::ref() const {
  std::string s = name_ + "(";
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(params_[i]);
  }
  return s + ")";
}

namespace {

struct RegistryEntry {
  std::size_t arity;
  bool upward;
  std::string description;
  std::function<FinSetPredicate::Fn(const std::vector<std::int64_t>&)> build;
};

const std::map<std::string, RegistryEntry>& registry() {
  using P = std::vector<std::int64_t>;
  using Fn = FinSetPredicate::Fn;
  static const std::map<std::string, RegistryEntry> r = {
      {"never", {0, true, "never holds", [](const P&) -> Fn {
                   return [](const FinSet&, Stage) { return false; };
                 }}},
      {"always", {0, true, "holds for every set", [](const P&) -> Fn {
                    return [](const FinSet&, Stage) { return true; };
                  }}},
      {"card_ge", {1, true, "|F| >= n", [](const P& p) -> Fn {
                     auto n = static_cast<std::size_t>(p[0]);
                     return [n](const FinSet& f, Stage) { return f.size() >= n; };
                   }}},
      {"contains", {1, true, "x in F", [](const P& p) -> Fn {
                      auto x = static_cast<Num>(p[0]);
                      return [x](const FinSet& f, Stage) {
                        return std::binary_search(f.begin(), f.end(), x);
                      };
                    }}},
      {"max_ge", {1, true, "F nonempty and max F >= x", [](const P& p) -> Fn {
                    auto x = static_cast<Num>(p[0]);
                    return [x](const FinSet& f, Stage) {
                      return !f.empty() && f.back() >= x;
                    };
                  }}},
      {"residue_card_ge",
       {3, true, "at least n elements congruent to r mod m", [](const P& p) -> Fn {
          auto m = static_cast<Num>(std::max<std::int64_t>(p[0], 1));
          auto r = static_cast<Num>(p[1]);
          auto n = static_cast<std::size_t>(p[2]);
          return [m, r, n](const FinSet& f, Stage) {
            std::size_t c = 0;
            for (Num x : f) c += (x % m == r % m);
            return c >= n;
          };
        }}},
      {"sum_mod", {2, false, "F nonempty and sum F = r mod m", [](const P& p) -> Fn {
                     auto m = static_cast<std::uint64_t>(std::max<std::int64_t>(p[0], 1));
                     auto r = static_cast<std::uint64_t>(p[1]);
                     return [m, r](const FinSet& f, Stage) {
                       if (f.empty()) return false;
                       std::uint64_t s = 0;
                       for (Num x : f) s += x;
                       return s % m == r % m;
                     };
                   }}},
      {"gap_ge", {1, true, "two elements of F differ by at least g", [](const P& p) -> Fn {
                    auto g = static_cast<Num>(p[0]);
                    return [g](const FinSet& f, Stage) {
                      return f.size() >= 2 && f.back() - f.front() >= g;
                    };
                  }}},
      {"lagged_card_ge",
       {2, false, "|F| >= n, confirmed from stage max F + lag on", [](const P& p) -> Fn {
          auto n = static_cast<std::size_t>(p[0]);
          auto lag = static_cast<Stage>(p[1]);
          return [n, lag](const FinSet& f, Stage s) {
            Stage top = f.empty() ? 0 : f.back();
            return f.size() >= n && s >= top + lag;
          };
        }}},
      {"interval_card_ge",
       {3, true, "at least n elements in [lo, hi]", [](const P& p) -> Fn {
          auto lo = static_cast<Num>(p[0]);
          auto hi = static_cast<Num>(p[1]);
          auto n = static_cast<std::size_t>(p[2]);
          return [lo, hi, n](const FinSet& f, Stage) {
            std::size_t c = 0;
            for (Num x : f) c += (x >= lo && x <= hi);
            return c >= n;
          };
        }}},
  };
  return r;
}

}  // namespace

FinSetPredicate make_predicate(const std::string& name,
                               const std::vector<std::int64_t>& params) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw ParseError("unknown predicate: " + name);
  if (params.size() != it->second.arity)
    throw ParseError("predicate " + name + " expects " +
                     std::to_string(it->second.arity) + " parameters");
  for (auto v : params)
    if (v < 0) throw ParseError("predicate parameters must be non-negative");
  return FinSetPredicate(name, params, it->second.build(params),
                         it->second.description, it->second.upward);
}

FinSetPredicate parse_predicate(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  auto open = t.find('(');
  if (open == std::string::npos) return make_predicate(t, {});
  if (t.back() != ')') throw ParseError("malformed predicate: " + text);
  std::string name = t.substr(0, open);
  std::string body = t.substr(open + 1, t.size() - open - 2);
  std::vector<std::int64_t> params;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ParseError("empty parameter in: " + text);
    try {
      std::size_t pos = 0;
      params.push_back(std::stoll(item, &pos));
      if (pos != item.size()) throw ParseError("bad parameter: " + item);
    } catch (const std::logic_error&) {
      throw ParseError("bad parameter: " + item);
    }
  }
  return make_predicate(name, params);
}

std::vector<std::string> predicate_registry_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

namespace {
// Visits subsets of pool in colex order (binary counting over positions),
// optionally only those containing position `fixed`.
template <class Visit>
bool scan_subsets(const FinSet& pool, std::optional<std::size_t> fixed, Visit&& visit) {
  if (pool.size() > 40) throw std::length_error("witness pool too large");
  const std::uint64_t end = std::uint64_t{1} << pool.size();
  const std::uint64_t need = fixed ? std::uint64_t{1} << *fixed : 0;
  FinSet f;
  f.reserve(pool.size());
  for (std::uint64_t m = need; m < end; m = ((m + 1) | need)) {
    f.clear();
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (m >> i & 1U) f.push_back(pool[i]);
    if (visit(f)) return true;
  }
  return false;
}
}  // namespace

namespace {

// Pool elements the predicate can see. A witness restricted to the support
// is still a witness and no larger in colex order.
FinSet visible(const FinSetPredicate& pred, const FinSet& pool) {
  if (!pred.support()) return pool;
  return FinSet(pool.begin(), std::lower_bound(pool.begin(), pool.end(), *pred.support()));
}

}  // namespace

std::optional<FinSet> least_witness(const FinSetPredicate& pred,
                                    const FinSet& fullPool, Stage stage) {
  const FinSet pool = visible(pred, fullPool);
  std::optional<FinSet> out;
  if (pred.upward_closed() && !pred.holds(pool, stage)) return out;
  scan_subsets(pool, std::nullopt, [&](const FinSet& f) {
    if (!pred.holds(f, stage)) return false;
    out = f;
    return true;
  });
  return out;
}

bool some_subset_holds(const FinSetPredicate& pred, const FinSet& fullPool,
                       Stage stage) {
  const FinSet pool = visible(pred, fullPool);
  if (pred.upward_closed()) return pred.holds(pool, stage);
  return scan_subsets(pool, std::nullopt,
                      [&](const FinSet& f) { return pred.holds(f, stage); });
}

bool some_subset_with(const FinSetPredicate& pred, const FinSet& pool, Num must,
                      Stage stage) {
  auto it = std::lower_bound(pool.begin(), pool.end(), must);
  if (it == pool.end() || *it != must) throw std::invalid_argument("must not in pool");
  if (pred.upward_closed()) return pred.holds(pool, stage);
  if (pred.support() && must >= *pred.support()) return some_subset_holds(pred, pool, stage);
  return scan_subsets(pool, static_cast<std::size_t>(it - pool.begin()),
                      [&](const FinSet& f) { return pred.holds(f, stage); });
}

FiniteTree FiniteTree::root_only() {
  FiniteTree t;
  t.nodes.push_back({});
  return t;
}

FiniteTree FiniteTree::chain(const FinSet& f) {
  FiniteTree t;
  for (std::size_t i = 0; i <= f.size(); ++i)
    t.nodes.emplace_back(f.begin(), f.begin() + static_cast<long>(i));
  return t;
}

FiniteTree FiniteTree::from_nodes(std::vector<Str> nodes) {
  std::vector<Str> all;
  for (auto& n : nodes)
    for (std::size_t i = 0; i <= n.size(); ++i)
      all.emplace_back(n.begin(), n.begin() + static_cast<long>(i));
  all.push_back({});
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  FiniteTree t;
  t.nodes = std::move(all);
  return t;
}

bool FiniteTree::contains(const Str& a) const {
  return std::binary_search(nodes.begin(), nodes.end(), a);
}

namespace {
bool is_prefix(const Str& p, const Str& a) {
  return p.size() <= a.size() && std::equal(p.begin(), p.end(), a.begin());
}
}  // namespace

std::vector<Str> FiniteTree::children(const Str& a) const {
  std::vector<Str> out;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), a);
  for (; it != nodes.end() && is_prefix(a, *it); ++it)
    if (it->size() == a.size() + 1) out.push_back(*it);
  return out;
}

std::vector<Str> FiniteTree::terminals() const {
  std::vector<Str> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (i + 1 == nodes.size() || !is_prefix(nodes[i], nodes[i + 1]))
      out.push_back(nodes[i]);
  return out;
}

std::size_t FiniteTree::height() const {
  std::size_t h = 0;
  for (const auto& n : nodes) h = std::max(h, n.size());
  return h;
}

std::optional<std::string> validate_tree(const FiniteTree& t) {
  if (t.nodes.empty() || !t.nodes.front().empty()) return "root missing";
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    if (!(t.nodes[i - 1] < t.nodes[i])) return "nodes not sorted/unique";
  for (const auto& n : t.nodes) {
    for (std::size_t i = 1; i < n.size(); ++i)
      if (n[i - 1] >= n[i]) return "not increasing: " + format_str(n);
    if (!t.universe.empty())
      for (Num x : n)
        if (!std::binary_search(t.universe.begin(), t.universe.end(), x))
          return "outside universe: " + format_str(n);
    if (!n.empty() && !t.contains(Str(n.begin(), n.end() - 1)))
      return "not prefix-closed at " + format_str(n);
    if (t.widthBound && t.children(n).size() > t.widthBound)
      return "width exceeded at " + format_str(n);
  }
  return std::nullopt;
}

FinSet ran(const Str& a) { return to_set(a); }

FinSet ran(const FiniteTree& t) {
  std::vector<Num> all;
  for (const auto& n : t.nodes) all.insert(all.end(), n.begin(), n.end());
  return to_set(std::move(all));
}

PhiCheck is_phi_tree(const FiniteTree& t, const FinSetPredicate& phi,
                     Stage stage) {
  PhiCheck out;
  for (const auto& a : t.terminals()) {
    auto w = least_witness(phi, ran(a), stage);
    if (!w) {
      out.failing = a;
      out.witnesses.clear();
      return out;
    }
    out.witnesses.emplace(a, *w);
  }
  out.ok = true;
  return out;
}

bool tree_less(const FiniteTree& a, const FiniteTree& b) {
  FinSet ra = ran(a), rb = ran(b);
  if (ra.empty() || rb.empty()) return true;
  return ra.back() < rb.front();
}

bool PhiSequence::ordered() const {
  for (std::size_t i = 1; i < trees.size(); ++i)
    if (!tree_less(trees[i - 1], trees[i])) return false;
  return true;
}

FiniteTree generated_subtree(const std::vector<FiniteTree>& seq,
                             const FinSetPredicate& psi, Stage stage,
                             std::size_t depthLimit) {
  depthLimit = std::min(depthLimit, seq.size());
  std::vector<FinSet> ranges;
  FiniteTree out;
  for (const auto& t : seq) {
    ranges.push_back(ran(t));
    out.widthBound = std::max(out.widthBound, ranges.back().size());
  }
  if (!seq.empty()) out.universe = seq.front().universe;
  std::vector<Str> frontier{{}};
  std::vector<Str> all{{}};
  for (std::size_t d = 0; d < depthLimit && !frontier.empty(); ++d) {
    std::vector<Str> next;
    for (const auto& a : frontier) {
      if (some_subset_holds(psi, ran(a), stage)) continue;
      for (Num x : ranges[d]) {
        if (!a.empty() && x <= a.back()) continue;
        Str b = a;
        b.push_back(x);
        next.push_back(std::move(b));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  out.nodes = std::move(all);
  return out;
}

std::string format_str(const Str& a) {
  std::string s = "<";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ">";
}

Str parse_str(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.size() < 2 || t.front() != '<' || t.back() != '>')
    throw ParseError("malformed string: " + text);
  Str out;
  std::stringstream ss(t.substr(1, t.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw ParseError("bad entry: " + item);
      out.push_back(static_cast<Num>(v));
    } catch (const std::logic_error&) {
      throw ParseError("bad entry: " + item);
    }
  }
  return out;
}

std::string serialize_tree(const FiniteTree& t) {
  std::string s;
  for (const auto& n : t.nodes) s += format_str(n) + "\n";
  return s;
}

FiniteTree parse_tree(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  FiniteTree t;
  while (std::getline(ss, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    t.nodes.push_back(parse_str(line));
  }
  std::sort(t.nodes.begin(), t.nodes.end());
  t.nodes.erase(std::unique(t.nodes.begin(), t.nodes.end()), t.nodes.end());
  if (auto err = validate_tree(t)) throw ParseError("invalid tree: " + *err);
  return t;
}

}  // namespace ramsey
