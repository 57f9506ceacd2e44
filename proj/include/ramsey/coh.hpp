#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ramsey/coloring.hpp"
#include "ramsey/enumerations.hpp"
#include "ramsey/fincomb.hpp"
#include "ramsey/functional.hpp"

namespace ramsey {

class RecursionBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets attached to one string: one per target color, plus the stage u at
/// which they were defined.
struct HEntry {
  std::vector<FinSet> sets;
  Stage u = 0;
  FinSet all() const;
  bool operator==(const HEntry&) const = default;
};

struct CohState {
  UnaryColoring cPrefix;
  std::map<Str, HEntry> H;
  std::size_t n = 0;  // defined prefixes of each extendible terminal
  std::optional<std::size_t> activeL;
};

struct CohConfig {
  unsigned k = 1;
  std::vector<unsigned> C;   // all colors of d
  std::vector<unsigned> C0;  // colors ignored by this level
  PairColoring d;
  UniformSequence seq;
  TableFunctional psi;
  std::size_t maxTrees = 8;  // per canonical search, k > 1 only

  /// C - C0, ascending; index j stands for color targets()[j].
  std::vector<unsigned> targets() const;
  std::optional<std::string> validate() const;
};

struct CohEvent {
  enum Kind { Define, Undefine };
  Stage stage = 0;
  Kind kind = Define;
  int condition = 0;  // 1..4
  Str sigma;
  std::vector<FinSet> sets;
  Stage u = 0;
  std::optional<Num> witnessX;  // input x with Psi = 1 (Define only)
  std::optional<Num> witnessUse;
  std::size_t level = 0;  // nonempty coordinate (Define only)
};

struct CohRun {
  unsigned k = 1;
  UnaryColoring c;                 // k + 1 colors
  std::vector<UnaryColoring> cj;   // k colorings into #(k-1) colors
  std::vector<UniformSequence> hat;  // per target index, the derived sequence (k > 1)
  CohState finalState;
  std::vector<CohEvent> events;
  std::vector<std::string> violations;  // state invariant failures, by stage
  std::vector<CohRun> children;
  std::size_t nested() const;  // instantiations below this one along the first chain
};

/// Checks comparability, equal segment lengths, u bounds, H inside ran(σ),
/// defined strings lying below extendible terminals, and (k > 1) exactly
/// one nonempty set per defined string.
std::optional<std::string> check_coh_state(const CohState& st, const UniformSequence& seq,
                                           Stage t, unsigned k);

/// Least (colex) F drawn from `pool` that extends `base` homogeneously in
/// `color` and makes Psi output 1 on some x >= floor colored `parity` by
/// `c`, all by stage t. `guessing` additionally requires each element of F
/// to guess `color` as its limit at t.
struct FSearch {
  const PairColoring* d = nullptr;
  const TableFunctional* psi = nullptr;
  const std::vector<unsigned>* c = nullptr;
  FinSet base;
  unsigned color = 0;
  std::optional<Num> floor;  // elements of F must exceed it; x must reach it
  Stage t = 0;
  unsigned parity = 0;
  bool guessing = true;
};
struct FWitness {
  FinSet f;
  Num x = 0;
  Num use = 0;
};
std::optional<FWitness> least_f(const FinSet& pool, const FSearch& q);
/// The same clauses as a predicate on arbitrary finite sets.
std::optional<FWitness> f_holds(const FinSet& f, const FSearch& q);

CohRun coh_k1_run(const CohConfig& cfg, Stage stageLimit);
CohRun coh_general_run(const CohConfig& cfg, Stage stageLimit, unsigned depth);

struct EBudget {
  Stage stageLimit = 17;
  std::size_t maxTrees = 8;
};
struct EResult {
  UnaryColoring e;
  CohRun run;
};
/// e(x) = <c(x), c_0(x), ..., c_{k-1}(x)> over #(k) colors, from a run on
/// the trivial sequence with C = {0..k-1} and C0 empty.
EResult build_e(unsigned k, const PairColoring& d, const TableFunctional& psi,
                const EBudget& budget);

struct VerifyOptions {
  std::size_t theta = 3;  // |H| >= theta stands in for an infinite H
  Num threshold = 0;      // only outputs >= threshold count
};
struct VerifyPass {
  enum Kind { Small, Split };
  Kind kind;
  FinSet h;
  unsigned color;
  FinSet outputs;  // Psi^H at or above the threshold
};
struct VerifyFail {
  std::string trace;
  std::size_t largestImage = 0;  // most outputs seen for one homogeneous H
};
using VerifyResult = std::variant<VerifyPass, VerifyFail>;

/// Looks for a d-homogeneous H in [0, N] with |H| >= theta whose Psi-image
/// above the threshold has fewer than two elements or two e-colors.
VerifyResult coh_diagonal_verify(const UnaryColoring& e, const PairColoring& d,
                                 const StabilityCert& cert, const TableFunctional& psi,
                                 const VerifyOptions& opt = {});

/// Residue-class step for k > 1: levels[n] is the nonempty coordinate of
/// the n-th stabilized level. For each i < k+1, j_i is the least j with at
/// least theta occurrences among n = i mod (k+1). Returns (i, i', j) with
/// i < i' and j_i = j_i' = j, least in (i, i').
struct PigeonholePair {
  std::size_t i, i2, j;
  bool operator==(const PigeonholePair&) const = default;
};
std::optional<PigeonholePair> residue_pigeonhole(const std::vector<std::size_t>& levels,
                                                 unsigned k, std::size_t theta);

std::string format_events(const std::vector<CohEvent>& events);

}  // namespace ramsey
