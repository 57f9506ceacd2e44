#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/fincomb.hpp"
#include "ramsey/forcing_p.hpp"
#include "ramsey/functional.hpp"

namespace ramsey {

/// Column lock: bit `bit` from position `from` on.
struct ColumnLock {
  unsigned bit = 0;
  Num from = 0;
  bool operator==(const ColumnLock&) const = default;
};

/// Finite columns of '0'/'1' of one common length, each locked or not.
struct CCondition {
  std::vector<std::string> columns;
  std::vector<std::optional<ColumnLock>> locks;  // nullopt = unlocked

  std::size_t width() const { return columns.size(); }
  Num length() const { return columns.empty() ? 0 : static_cast<Num>(columns[0].size()); }
  /// Bit of column `col` at `pos` fixed by p for every family extending it
  /// (written bit or lock tail), else nullopt.
  std::optional<unsigned> fixed_bit(std::size_t col, Num pos) const;
  std::optional<std::string> validate() const;
  bool operator==(const CCondition&) const = default;
};

/// One column, unlocked, empty.
CCondition initial_condition();

bool c_extends(const CCondition& q, const CCondition& p);
/// X lists finite column prefixes, all of one length, at least width(p) many.
bool family_extends(const std::vector<std::string>& x, const CCondition& p);

/// Bit assignment (column, position, bit).
struct BitReq {
  std::size_t col;
  Num pos;
  unsigned bit;
  auto operator<=>(const BitReq&) const = default;
};
/// Least extension of p realizing every request (new bits default to the
/// lock bit or 0, new columns unlocked), padded to at least `minLength`.
std::optional<CCondition> extend_with(const CCondition& p, const std::vector<BitReq>& reqs,
                                      Num minLength = 0);

/// Pair coloring computed from a column family: each listed pair is either
/// constant or reads one bit and maps it through (c0, c1).
struct PairRule {
  Num x = 0, y = 0;
  bool reads = false;
  std::size_t col = 0;
  Num pos = 0;
  unsigned c0 = 0, c1 = 0;  // c0 is the constant when !reads
  bool operator==(const PairRule&) const = default;
};

class ColumnPairFunctional {
 public:
  ColumnPairFunctional() = default;
  explicit ColumnPairFunctional(std::vector<PairRule> rules);
  const std::vector<PairRule>& rules() const { return rules_; }
  const PairRule* rule(Num x, Num y) const;
  /// Value on a concrete family; nullopt if unlisted or the bit is unwritten.
  std::optional<unsigned> value(const std::vector<std::string>& family, Num x, Num y) const;
  /// Every pair x < y < n has a rule.
  bool total(Num n) const;

 private:
  std::vector<PairRule> rules_;
  std::map<std::pair<Num, Num>, std::size_t> index_;
};

/// `x y ; c` or `x y ; col pos ; c0 c1`, one rule per line.
std::string serialize_pair_functional(const ColumnPairFunctional& f);
ColumnPairFunctional parse_pair_functional(const std::string& text);

/// p forces phi(x, y) = j.
bool forces_color(const CCondition& p, const ColumnPairFunctional& phi, Num x, Num y, unsigned j);
/// Bits that make p force phi(x, y) = j; nullopt when no extension does.
std::optional<std::vector<BitReq>> color_requests(const CCondition& p, const ColumnPairFunctional& phi,
                                                  Num x, Num y, unsigned j);
/// Tail of x in the reservoir: { y in I : y > x }. The limit at x is
/// forcible only when the tail has at least theta points.
FinSet tail_of(const FinSet& reservoir, Num x);
std::optional<std::vector<BitReq>> limit_requests(const CCondition& p, const ColumnPairFunctional& phi,
                                                  const FinSet& reservoir, Num x, unsigned j,
                                                  std::size_t theta);

// ---- trees and labels ----

class UnlabelableTerminal : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TreeSpec {
  FinSet h;
  const TableFunctional* psi = nullptr;
  Num k = 0;
  FinSet reservoir;
  std::size_t maxDepth = 6;
  std::size_t maxNodes = 200000;
};

/// A witness at a node: least w >= k, then colex-least F.
struct NodeWitness {
  FinSet f;
  Num w = 0;
  Num use = 0;
};
std::optional<NodeWitness> node_witness(const Str& alpha, const TreeSpec& spec);

struct BuiltTree {
  FiniteTree tree;
  std::vector<Str> terminals;  // nodes with a witness
  std::vector<Str> frontier;   // leaves without one (reservoir or depth ran out)
  bool well_founded() const { return frontier.empty(); }
};
/// Increasing strings over the reservoir with no witness on a proper prefix.
/// Throws BudgetExhausted past maxNodes.
BuiltTree build_witness_tree(const TreeSpec& spec);

struct LabeledTree {
  FiniteTree tree;
  std::set<Str> terminals;
  std::map<Str, std::optional<Num>> labels;  // nullopt = infinity
};
LabeledTree label_tree(const BuiltTree& t, const TreeSpec& spec, std::size_t theta);

struct T0Result {
  enum Case { Terminal, SameLabel, FiniteChildren, InfiniteChildren, Stuck };
  FiniteTree tree;
  std::map<Str, Case> cases;
};
T0Result extract_t0(const LabeledTree& lt, std::size_t theta);
/// Terminals of T0 are terminals of T; other T0 nodes have >= theta children.
std::vector<std::string> check_t0(const LabeledTree& lt, const FiniteTree& t0, std::size_t theta);

// ---- requirement ledger ----

struct YEntry {
  enum Kind { Points, Pairs };
  Kind kind = Points;
  FinSet points;
  std::vector<std::pair<Num, Num>> pairs;  // (x, w)
  unsigned digit = 0;                      // Pairs: required bit of column 0
  bool operator==(const YEntry&) const = default;
};

struct CDenseSpec {
  std::string name;
  std::function<bool(const CCondition&)> test;
  std::function<std::optional<CCondition>(const CCondition&)> extend;
};
/// Demo family for an entry of Y. Pairs: W_e = some (x, w) in P with
/// w >= e and column 0 at w equal to the digit. Points: column e + 1
/// splits P (written 0 and 1 at two points of P).
std::vector<CDenseSpec> default_dense_family(const YEntry& entry, std::size_t count);

struct Dedication {
  enum Kind { P, Q, R };
  Kind kind = P;
  std::size_t t = 0, n = 0, m = 0;  // P
  std::size_t phi = 0;              // Q, R
  std::size_t psi = 0;              // R
  unsigned j = 0;                   // R
};

struct RequirementContext {
  std::vector<ColumnPairFunctional> phis;
  std::vector<TableFunctional> psis;
  std::size_t theta = 3;
  std::size_t maxDepth = 6;
  std::size_t maxNodes = 200000;
  std::size_t denseCount = 4;
  std::function<std::vector<CDenseSpec>(const YEntry&)> denseFamily;  // empty = default
};

struct RequirementLedger {
  Num universe = 16;
  std::vector<CCondition> chain;  // p_0 .. p_s
  std::map<std::size_t, std::array<FinSet, 2>> h;  // per phi
  std::vector<FinSet> reservoirs;                  // I_0 .. I_s
  std::vector<YEntry> y;
  std::vector<std::size_t> ySizes;  // |Y_s|
  std::vector<Dedication> dedications;
  std::map<std::tuple<std::size_t, std::size_t, unsigned>, unsigned> rVisits;

  std::size_t stage() const { return chain.size() - 1; }
  const CCondition& current() const { return chain.back(); }
  const FinSet& reservoir() const { return reservoirs.back(); }
};
RequirementLedger make_ledger(Num universe, CCondition p0 = initial_condition());

struct ActionReport {
  std::size_t stage = 0;
  Dedication dedication;
  std::string branch;
  std::string certificate;
  std::vector<std::string> violations;
};

/// One construction stage. Throws BudgetExhausted if the tree exceeds its
/// node budget; invariant failures land in the report.
ActionReport run_requirement_stage(RequirementLedger& ledger, const Dedication& d,
                                   const RequirementContext& ctx);

/// Ledger invariants at the current stage: H below I, and p forcing each H
/// element's color against every reservoir point above it.
std::vector<std::string> check_ledger(const RequirementLedger& ledger, const RequirementContext& ctx);

std::string serialize_condition(const CCondition& p);
std::string format_ledger(const RequirementLedger& ledger);

}  // namespace ramsey
