#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ramsey/fincomb.hpp"

namespace ramsey {

struct SearchBudget {
  Stage maxStage = 64;
  Num universeBound = 16;  // default universe is [0, universeBound]
  std::size_t maxTrees = 8;
};

/// Subsets of pools larger than this are never scanned.
inline constexpr std::size_t kMaxScanPool = 24;

FinSet default_universe(Num bound);

// ---- tail-emptiness probe ------------------------------------------------

struct SequenceFound {
  PhiSequence seq;
  std::vector<FinSet> chosen;  // the greedy sets behind each chain tree
};
struct TailEmpty {
  std::int64_t z;  // no subset of the universe above z satisfies phi
};
struct Exhausted {
  std::string reason;
};
using FinseqOutcome = std::variant<SequenceFound, TailEmpty, Exhausted>;

/// Greedy chain of colex-least witnesses F_0 < F_1 < ..., each turned into
/// the chain tree of its increasing enumeration. An empty universe argument
/// means [0, budget.universeBound].
FinseqOutcome finseq_probe(const FinSetPredicate& phi,
                           const SearchBudget& budget,
                           const FinSet& universe = {});

// ---- psi-sequences -------------------------------------------------------

struct Stuck {
  std::size_t index;
};
using PsiOutcome = std::variant<PhiSequence, Stuck>;

/// U_n is the psi-generated subtree of the tail starting at the sum of the
/// heights of U_0..U_{n-1}, grown one level per tree until every leaf is
/// witnessed.
PsiOutcome build_psi_sequence(const PhiSequence& phiseq,
                              const FinSetPredicate& psi, Stage stage,
                              std::size_t count);

// ---- canonical search ----------------------------------------------------

struct Forest {
  std::size_t k = 0;
  std::vector<std::vector<FiniteTree>> levels;  // levels[j][n] = T_{j,n}
  /// s_j, i.e. levels[j].size() - 1 (may be -1 for an empty level).
  std::int64_t offset(std::size_t j) const {
    return static_cast<std::int64_t>(levels[j].size()) - 1;
  }
  FinSet range() const;
};

struct TraceEvent {
  enum Kind { LevelExtended, TreeFound };
  Kind kind;
  std::size_t level;  // j
  std::size_t index;  // n, the tree being built at that level
  std::size_t depth;  // number of levels of the tree now enumerated
  std::uint64_t step;
  std::vector<Str> nodes;  // strings of length `depth` added (LevelExtended)
};

/// A generated subtree still growing when the search stopped.
struct OpenGrowth {
  std::size_t level;
  std::size_t index;
  std::size_t depth;
  FiniteTree partial;
  std::vector<Str> openFrontier;  // deepest nodes with no witness yet
};

struct CanonicalResult {
  bool found = false;
  Forest forest;  // complete if found, otherwise the trees finished so far
  std::string reason;  // why the search stopped short
  std::vector<OpenGrowth> open;  // filled only when the search stopped short
  std::vector<TraceEvent> trace;
};

/// Lazy level-by-level search. Level 0 trees are chains of the shortest
/// universe segment past the previous tree holding a phi_0-witness; a level
/// j > 0 tree is the phi_j-generated subtree of consecutive level j-1 trees,
/// extended one level per new tree until every leaf is witnessed.
CanonicalResult canonical_search(const std::vector<FinSetPredicate>& phis,
                                 const SearchBudget& budget,
                                 const FinSet& universe = {});

/// Re-derives every structural property of a forest: trees in Inc(universe),
/// phi-trees, ordering, the generated-subtree links and the level counts.
std::optional<std::string> check_forest(const Forest& f,
                                        const std::vector<FinSetPredicate>& phis,
                                        Stage stage, const FinSet& universe);

// ---- combinatorial core --------------------------------------------------

class NoWitness : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CoreWitness {
  std::size_t level;
  std::size_t tree;
  Str terminal;
  bool operator==(const CoreWitness&) const = default;
};

/// First terminal (by level, tree, lexicographic node) on whose range the
/// coloring is constantly its own level. `color(x)` must be defined on the
/// range of the forest.
CoreWitness combcore_witness(const Forest& f,
                             const std::function<unsigned(Num)>& color);

/// Precomputed bitmask view for many colorings of one forest with at most 64
/// range elements. Colorings are indexed by position in `range()`.
class CombcoreIndex {
 public:
  explicit CombcoreIndex(const Forest& f);
  const FinSet& range() const { return range_; }
  /// colorByPos[i] is the color of range()[i].
  std::optional<CoreWitness> find(const std::vector<unsigned>& colorByPos) const;

 private:
  struct Term {
    std::size_t level, tree;
    std::uint64_t mask;
    Str node;
  };
  FinSet range_;
  std::vector<Term> terms_;
};

/// Trees grouped by level: a `tree j n` header line, then the tree's nodes.
std::string serialize_forest(const Forest& f);
Forest parse_forest(const std::string& text);

}  // namespace ramsey
