#include "ramsey/forest.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace ramsey {

FinSet default_universe(Num bound) {
  FinSet u(bound + 1);
  std::iota(u.begin(), u.end(), Num{0});
  return u;
}

FinSet Forest::range() const {
  FinSet r;
  for (const auto& lvl : levels)
    for (const auto& t : lvl) r = set_union(r, ran(t));
  return r;
}

FinseqOutcome finseq_probe(const FinSetPredicate& phi,
                           const SearchBudget& budget, const FinSet& universe) {
  const FinSet u = universe.empty() ? default_universe(budget.universeBound) : universe;
  SequenceFound found;
  if (phi.holds({}, budget.maxStage)) {
    for (std::size_t i = 0; i < budget.maxTrees; ++i) {
      found.seq.trees.push_back(FiniteTree::root_only());
      found.chosen.push_back({});
    }
    return found;
  }
  std::int64_t z = u.empty() ? -1 : static_cast<std::int64_t>(u.front()) - 1;
  auto pos = u.begin();
  while (found.seq.trees.size() < budget.maxTrees) {
    FinSet pool(pos, u.end());
    if (pool.size() > kMaxScanPool)
      return Exhausted{"pool above " + std::to_string(z) + " too large to scan"};
    auto f = least_witness(phi, pool, budget.maxStage);
    if (!f) return TailEmpty{z};
    auto t = FiniteTree::chain(*f);
    t.universe = u;
    t.widthBound = 1;
    found.seq.trees.push_back(std::move(t));
    found.chosen.push_back(*f);
    z = f->back();
    pos = std::upper_bound(u.begin(), u.end(), f->back());
  }
  return found;
}

namespace {

// A generated subtree grown one level at a time. Leaves whose range already
// holds a witness are closed and get no children.
class Growth {
 public:
  Growth(const FinSetPredicate& psi, Stage stage) : psi_(psi), stage_(stage) {
    nodes_.push_back({});
    frontier_.push_back({});
    mark();
  }

  std::size_t depth() const { return depth_; }
  bool stuck() const { return depth_ > 0 && frontier_.empty(); }
  bool done() const {
    return !stuck() && std::all_of(closed_.begin(), closed_.end(), [](bool b) { return b; });
  }

  const std::vector<Str>& extend(const FinSet& nextRange) {
    std::vector<Str> next;
    for (std::size_t i = 0; i < frontier_.size(); ++i) {
      if (closed_[i]) continue;
      const Str& a = frontier_[i];
      for (Num x : nextRange) {
        if (!a.empty() && x <= a.back()) continue;
        Str b = a;
        b.push_back(x);
        next.push_back(std::move(b));
      }
    }
    frontier_ = std::move(next);
    nodes_.insert(nodes_.end(), frontier_.begin(), frontier_.end());
    ++depth_;
    mark();
    return frontier_;
  }

  std::vector<Str> open_frontier() const {
    std::vector<Str> out;
    for (std::size_t i = 0; i < frontier_.size(); ++i)
      if (!closed_[i]) out.push_back(frontier_[i]);
    return out;
  }

  FiniteTree tree(const FinSet& universe, std::size_t width) const {
    FiniteTree t;
    t.nodes = nodes_;
    std::sort(t.nodes.begin(), t.nodes.end());
    t.universe = universe;
    t.widthBound = width;
    return t;
  }

 private:
  // A frontier node's parent was open, so only subsets using its last entry
  // can be new witnesses.
  void mark() {
    closed_.clear();
    for (const auto& a : frontier_)
      closed_.push_back(a.empty() ? psi_.holds({}, stage_)
                                  : some_subset_with(psi_, ran(a), a.back(), stage_));
  }

  const FinSetPredicate& psi_;
  Stage stage_;
  std::size_t depth_ = 0;
  std::vector<Str> nodes_, frontier_;
  std::vector<bool> closed_;
};

}  // namespace

PsiOutcome build_psi_sequence(const PhiSequence& phiseq,
                              const FinSetPredicate& psi, Stage stage,
                              std::size_t count) {
  PhiSequence out;
  std::size_t s = 0;
  const FinSet universe = phiseq.trees.empty() ? FinSet{} : phiseq.trees.front().universe;
  for (std::size_t n = 0; n < count; ++n) {
    Growth g(psi, stage);
    std::size_t width = 0;
    while (!g.done()) {
      if (g.stuck() || s + g.depth() >= phiseq.trees.size()) return Stuck{n};
      FinSet r = ran(phiseq.trees[s + g.depth()]);
      width = std::max(width, r.size());
      g.extend(r);
    }
    s += g.depth();
    out.trees.push_back(g.tree(universe, width));
  }
  return out;
}

namespace {

class CanonicalSearch {
 public:
  CanonicalSearch(const std::vector<FinSetPredicate>& phis, const SearchBudget& b,
                  FinSet universe)
      : phis_(phis), budget_(b), universe_(std::move(universe)) {
    res_.forest.k = phis.size();
    res_.forest.levels.resize(phis.size());
  }

  CanonicalResult run() {
    if (phis_.empty()) {
      res_.reason = "no predicates";
      return std::move(res_);
    }
    res_.found = next_tree(phis_.size() - 1);
    return std::move(res_);
  }

 private:
  void emit(TraceEvent::Kind kind, std::size_t j, std::size_t n, std::size_t depth,
            std::vector<Str> nodes) {
    res_.trace.push_back({kind, j, n, depth, ++step_, std::move(nodes)});
  }

  bool fail(std::string why) {
    if (res_.reason.empty()) {
      res_.reason = std::move(why);
      for (const auto& [j, n, g] : active_)
        res_.open.push_back({j, n, g->depth(), g->tree(universe_, 0), g->open_frontier()});
    }
    return false;
  }

  bool next_tree(std::size_t j) {
    auto& lvl = res_.forest.levels[j];
    const std::size_t n = lvl.size();
    if (n >= budget_.maxTrees)
      return fail("tree budget reached at level " + std::to_string(j));
    emit(TraceEvent::LevelExtended, j, n, 0, {{}});
    return j == 0 ? next_segment(n) : next_generated(j, n);
  }

  bool next_segment(std::size_t n) {
    const auto& phi = phis_[0];
    FiniteTree t;
    if (phi.holds({}, budget_.maxStage)) {
      t = FiniteTree::root_only();
    } else {
      FinSet seg;
      while (true) {
        if (cursor_ + seg.size() >= universe_.size())
          return fail("universe exhausted at level 0");
        if (seg.size() >= kMaxScanPool) return fail("level 0 segment too long");
        seg.push_back(universe_[cursor_ + seg.size()]);
        emit(TraceEvent::LevelExtended, 0, n, seg.size(), {seg});
        if (some_subset_with(phi, seg, seg.back(), budget_.maxStage)) break;
      }
      cursor_ += seg.size();
      t = FiniteTree::chain(seg);
    }
    t.universe = universe_;
    t.widthBound = 1;
    emit(TraceEvent::TreeFound, 0, n, t.height(), {});
    res_.forest.levels[0].push_back(std::move(t));
    return true;
  }

  bool next_generated(std::size_t j, std::size_t n) {
    Growth g(phis_[j], budget_.maxStage);
    active_.push_back({j, n, &g});
    struct Pop {
      std::vector<std::tuple<std::size_t, std::size_t, Growth*>>& v;
      ~Pop() { v.pop_back(); }
    } pop{active_};
    std::size_t width = 0;
    while (!g.done()) {
      if (g.stuck())
        return fail("generated subtree at level " + std::to_string(j) + " cannot grow");
      if (!next_tree(j - 1)) return false;
      FinSet r = ran(res_.forest.levels[j - 1].back());
      width = std::max(width, r.size());
      auto added = g.extend(r);
      emit(TraceEvent::LevelExtended, j, n, g.depth(), added);
    }
    auto t = g.tree(universe_, width);
    emit(TraceEvent::TreeFound, j, n, t.height(), {});
    res_.forest.levels[j].push_back(std::move(t));
    return true;
  }

  const std::vector<FinSetPredicate>& phis_;
  SearchBudget budget_;
  FinSet universe_;
  std::size_t cursor_ = 0;
  std::uint64_t step_ = 0;
  std::vector<std::tuple<std::size_t, std::size_t, Growth*>> active_;  // growths in progress
  CanonicalResult res_;
};

}  // namespace

CanonicalResult canonical_search(const std::vector<FinSetPredicate>& phis,
                                 const SearchBudget& budget, const FinSet& universe) {
  return CanonicalSearch(phis, budget,
                         universe.empty() ? default_universe(budget.universeBound) : universe)
      .run();
}

std::optional<std::string> check_forest(const Forest& f,
                                        const std::vector<FinSetPredicate>& phis,
                                        Stage stage, const FinSet& universe) {
  const std::size_t k = f.k;
  if (k == 0 || phis.size() != k || f.levels.size() != k) return "level count mismatch";
  if (f.levels[k - 1].size() != 1) return "top level must hold exactly one tree";
  for (std::size_t j = 0; j < k; ++j) {
    const auto& lvl = f.levels[j];
    for (std::size_t n = 0; n < lvl.size(); ++n) {
      FiniteTree t = lvl[n];
      t.universe = universe;
      t.widthBound = 0;
      if (auto e = validate_tree(t)) return "T(" + std::to_string(j) + "," + std::to_string(n) + "): " + *e;
      if (!is_phi_tree(t, phis[j], stage).ok)
        return "T(" + std::to_string(j) + "," + std::to_string(n) + ") is not a phi-tree";
      if (n > 0 && !tree_less(lvl[n - 1], lvl[n]))
        return "level " + std::to_string(j) + " out of order at " + std::to_string(n);
    }
  }
  for (std::size_t j = 0; j + 1 < k; ++j) {
    std::size_t s = 0;
    for (std::size_t n = 0; n < f.levels[j + 1].size(); ++n) {
      const auto& up = f.levels[j + 1][n];
      const std::size_t h = up.height();
      if (s + h > f.levels[j].size()) return "level " + std::to_string(j) + " too short";
      std::vector<FiniteTree> seg(f.levels[j].begin() + static_cast<long>(s),
                                  f.levels[j].begin() + static_cast<long>(s + h));
      if (generated_subtree(seg, phis[j + 1], stage, h).nodes != up.nodes)
        return "T(" + std::to_string(j + 1) + "," + std::to_string(n) +
               ") is not the generated subtree of its segment";
      s += h;
    }
    if (s != f.levels[j].size())
      return "level " + std::to_string(j) + " count differs from s_j + 1";
  }
  return std::nullopt;
}

CoreWitness combcore_witness(const Forest& f, const std::function<unsigned(Num)>& color) {
  for (std::size_t j = 0; j < f.levels.size(); ++j)
    for (std::size_t n = 0; n < f.levels[j].size(); ++n)
      for (const auto& a : f.levels[j][n].terminals())
        if (std::all_of(a.begin(), a.end(), [&](Num x) { return color(x) == j; }))
          return {j, n, a};
  throw NoWitness("no level-homogeneous terminal; forest invariant violated");
}

CombcoreIndex::CombcoreIndex(const Forest& f) : range_(f.range()) {
  if (range_.size() > 64) throw std::length_error("forest range exceeds 64 elements");
  for (std::size_t j = 0; j < f.levels.size(); ++j)
    for (std::size_t n = 0; n < f.levels[j].size(); ++n)
      for (auto& a : f.levels[j][n].terminals()) {
        std::uint64_t mask = 0;
        for (Num x : a)
          mask |= std::uint64_t{1} << (std::lower_bound(range_.begin(), range_.end(), x) - range_.begin());
        terms_.push_back({j, n, mask, std::move(a)});
      }
}

std::optional<CoreWitness> CombcoreIndex::find(const std::vector<unsigned>& colorByPos) const {
  std::uint64_t byColor[64] = {};
  for (std::size_t i = 0; i < colorByPos.size(); ++i)
    if (colorByPos[i] < 64) byColor[colorByPos[i]] |= std::uint64_t{1} << i;
  for (const auto& t : terms_)
    if (t.level < 64 && (t.mask & ~byColor[t.level]) == 0) return CoreWitness{t.level, t.tree, t.node};
  return std::nullopt;
}

std::string serialize_forest(const Forest& f) {
  std::string s;
  for (std::size_t j = 0; j < f.levels.size(); ++j)
    for (std::size_t n = 0; n < f.levels[j].size(); ++n)
      s += "tree " + std::to_string(j) + " " + std::to_string(n) + "\n" + serialize_tree(f.levels[j][n]);
  return s;
}

Forest parse_forest(const std::string& text) {
  Forest f;
  std::stringstream ss(text);
  std::string line, block;
  long cj = -1, cn = -1;
  auto flush = [&]() {
    if (cj < 0) return;
    auto j = static_cast<std::size_t>(cj), n = static_cast<std::size_t>(cn);
    if (f.levels.size() <= j) f.levels.resize(j + 1);
    if (f.levels[j].size() != n) throw ParseError("forest trees out of order");
    f.levels[j].push_back(parse_tree(block));
    block.clear();
  };
  while (std::getline(ss, line)) {
    if (line.rfind("tree ", 0) == 0) {
      flush();
      std::stringstream hs(line.substr(5));
      if (!(hs >> cj >> cn) || cj < 0 || cn < 0) throw ParseError("bad header: " + line);
    } else {
      if (cj < 0 && line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#')
        throw ParseError("node before first tree header");
      block += line + "\n";
    }
  }
  flush();
  f.k = f.levels.size();
  return f;
}

}  // namespace ramsey
