#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ramsey/coloring.hpp"
#include "ramsey/fincomb.hpp"
#include "ramsey/forest.hpp"
#include "ramsey/functional.hpp"

namespace ramsey {

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Lock {
  unsigned color = 0;
  Num threshold = 0;  // c(x, y) = color for threshold <= y < n
  bool operator==(const Lock&) const = default;
};

/// Finite approximation to a stable 2-coloring of pairs: a total coloring of
/// pairs below n and a lock on every x < n.
class PCondition {
 public:
  PCondition() = default;

  Num n() const { return n_; }
  unsigned c(Num x, Num y) const { return cells_.at(pair_index(x, y)); }
  const Lock& lock(Num x) const { return locks_.at(x); }
  const std::vector<Lock>& locks() const { return locks_; }

  /// Grows to n' >= n. `color(x, y)` is called for every new pair (y >= n),
  /// `lock(x)` for every new point.
  PCondition extended(Num n2, const std::function<unsigned(Num, Num)>& color,
                      const std::function<Lock(Num)>& lock) const;

  /// nullopt if every lock is honoured inside [0, n).
  std::optional<std::string> check_locks() const;

  bool operator==(const PCondition&) const = default;

  /// Pairs are stored by y(y-1)/2 + x, so growing n only appends.
  static std::size_t pair_index(Num x, Num y);

 private:
  Num n_ = 0;
  std::vector<std::uint8_t> cells_;
  std::vector<Lock> locks_;
};

bool p_extends(const PCondition& q, const PCondition& p);
/// d is total on [0, N] with N >= n^p, contains c^p and honours every lock up to N.
bool respects(const PairColoring& d, const PCondition& p);

/// "Two numbers x1 > x0 >= floor are sent to 1 by psi on F." Not upward
/// closed in general.
FinSetPredicate two_values_predicate(const TableFunctional& psi, Num floor);

struct NuredBudget {
  Num top = 16;               // final coloring lives on [0, top]; forests use [0, top)
  Stage maxStage = 64;
  std::size_t probeTrees = 2;  // a greedy chain this long counts as unbounded
  std::size_t maxTrees = 16;   // per forest level
};

struct Case1 {
  std::int64_t z;  // no phi-set inside (z, top)
};
struct Case2 {
  std::size_t level;    // level whose generated subtree stayed open
  FiniteTree subtree;   // as far as it grew
  Str path;             // deepest open node; no subset of its range satisfies phi
  std::size_t depth;    // scale-relative evidence: the subtree reached this depth
};
struct Case3 {
  PCondition next;
  Forest forest;
  Num u;
};
using NuredOutcome = std::variant<Case1, Case2, Case3>;

/// One stage against psi with k colors, working inside the universe
/// (n^p, top). Throws BudgetExhausted when the forest search stops short
/// without an open generated subtree to report.
NuredOutcome nured_stage(const PCondition& p, const TableFunctional& psi, unsigned k,
                         const NuredBudget& budget);

/// Extends p to n' (if larger) with color 0 on new pairs not covered by an
/// older lock, and lock <0, x+1> on new points.
PCondition finalize(const PCondition& p, Num n2);

struct StageRecord {
  PCondition before;
  NuredOutcome outcome;
};

struct NuredRun {
  std::vector<StageRecord> stages;
  PCondition final;       // n >= top + 1, every point locked
  bool exhausted = false;  // the last stage threw BudgetExhausted
  std::string note;
};

/// Iterates nured_stage from the empty condition until a Case 1 or Case 2
/// exit (or an exhausted budget), then finalizes.
NuredRun nured_run(const TableFunctional& psi, unsigned k, const NuredBudget& budget);

struct DiagonalResult {
  CoreWitness witness;
  FinSet f;      // least phi-witness inside the terminal's range
  FinSet l;      // limit-homogeneous extension of f above the use
  unsigned color = 0;
  Num x0 = 0, x1 = 0;
  std::string failure;  // empty when every check passed
  bool ok() const { return failure.empty(); }
};

/// Given the Case 3 outcome of a stage that started at `floor` = n^p and a
/// stable d with certificate, finds a limit-homogeneous L on which psi picks
/// out x0 < x1 with c(x0, x1) = 0 while x0 is locked to color 1.
DiagonalResult diagonal_check(const Case3& stage, Num floor, const StabilityCert& cert,
                              const TableFunctional& psi, Stage maxStage);

/// Mathias conditions sharing one reservoir.
struct MathiasTuple {
  std::vector<FinSet> f;
  FinSet reservoir;
  bool valid() const;
};

/// b extends a: F_j ⊆ F'_j ⊆ F_j ∪ I for every j, and I' ⊆ I.
bool mathias_extends(const MathiasTuple& b, const MathiasTuple& a);

struct DenseSpec {
  std::function<bool(const PCondition&)> test;
  std::function<std::optional<PCondition>(const PCondition&)> extend;
};

struct Met {
  PCondition q;
};
struct AvoidedCert {
  std::uint64_t scanned;  // extensions checked, none passing the test
};
struct Unknown {
  std::string reason;
};
using MeetOutcome = std::variant<Met, AvoidedCert, Unknown>;

struct ExtensionBudget {
  Num extraPoints = 1;            // scan extensions with n^q <= n^p + extraPoints
  std::uint64_t maxScan = 1u << 20;
};

/// Calls fn on every extension q of p with n^q <= n^p + extra. Lock
/// thresholds of new points range over [x+1, n^q]; larger thresholds behave
/// like n^q inside q. Stops when fn returns false; returns the count visited.
std::uint64_t for_each_extension(const PCondition& p, Num extra,
                                 const std::function<bool(const PCondition&)>& fn);

MeetOutcome meet_or_avoid(const PCondition& p, const DenseSpec& w, const ExtensionBudget& budget);

std::string serialize_condition(const PCondition& p);

}  // namespace ramsey
