#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ramsey/fincomb.hpp"
#include "ramsey/functional.hpp"

namespace ramsey {

/// A problem over bitset instances and bitset solutions.
struct FiniteProblem {
  std::string name;
  Num instanceWidth = 0;  // instance bits live in [0, instanceWidth)
  Num solutionWidth = 0;
  std::vector<FinSet> instances;
  std::function<std::vector<FinSet>(const FinSet&)> solutionsOf;
  std::function<bool(const FinSet&)> isInstance;  // empty = membership in `instances`
  std::string spec;  // one-line text form, for reports

  bool is_instance(const FinSet& x) const;
  /// Widths fit an oracle join and every instance has a solution.
  std::optional<std::string> validate() const;
};

/// Instances with their solution lists given outright.
FiniteProblem listed_problem(std::string name, Num instanceWidth, Num solutionWidth,
                             std::vector<std::pair<FinSet, std::vector<FinSet>>> table);

/// Bits per point for a k-coloring (0 for k = 1).
Num color_bits(unsigned k);
FinSet encode_coloring(const std::vector<unsigned>& c, unsigned k);
std::vector<unsigned> decode_coloring(const FinSet& x, unsigned k, Num n);
/// k-colorings of [0, n); solutions are homogeneous sets of size >= minSize.
FiniteProblem rt1_problem(unsigned k, Num n, Num minSize);

enum class Mode { U, SU, C, SC };
std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct ReductionCandidate {
  TableFunctional phi;  // instance of Q -> instance of P
  TableFunctional psi;  // reads X (+) Yhat, or Yhat alone in strong modes
  Mode mode = Mode::U;
};

struct Holds {};
struct Counterexample {
  FinSet x;
  std::optional<FinSet> xhat;
  std::optional<FinSet> yhat;
  std::string reason;
};
using UniformResult = std::variant<Holds, Counterexample>;

/// Phi^X as a set of width `width`; nullopt if Phi diverges below it.
std::optional<FinSet> apply_set(const TableFunctional& f, const FinSet& oracle, Num width);

/// Exhaustive over instances X of Q and solutions Yhat of Phi^X.
UniformResult check_uniform(const FiniteProblem& q, const FiniteProblem& p, const ReductionCandidate& cand);

struct CandidateSpace {
  std::vector<TableFunctional> phis;
  std::vector<TableFunctional> psis;
};
struct InstanceWitness {
  FinSet x;
  std::size_t phi = 0;
  std::vector<std::pair<FinSet, std::size_t>> psiFor;  // per Yhat
};
struct ComputableHolds {
  std::vector<InstanceWitness> witnesses;
};
struct RefutedAtScale {
  FinSet x;  // first instance with no witness
  std::size_t searched = 0;  // phi x psi pairs in the space
  std::string reason;
};
using ComputableResult = std::variant<ComputableHolds, RefutedAtScale>;

/// Per instance: some phi in the space gives an instance of P, and each of
/// its solutions has some psi in the space producing a solution to X.
ComputableResult check_computable(const FiniteProblem& q, const FiniteProblem& p, bool strong,
                                  const CandidateSpace& space);

/// Psi' with Psi'^(X (+) Y) = Psi^Y: oracle position i moves to 2i + 1.
TableFunctional lift_to_join(const TableFunctional& psi);

struct NamedCandidate {
  std::string name;
  TableFunctional phi, psi;
  bool strong = true;  // psi reads Yhat alone
};
struct ReductionDataset {
  std::string name;
  FiniteProblem q, p;
  std::vector<NamedCandidate> candidates;
};

struct NotionOutcomes {
  std::string dataset;
  bool su = false, sc = false, u = false, c = false;
  std::vector<std::string> notes;  // counterexamples and refutations
};
/// su: some strong candidate. u: some candidate, strong ones lifted.
/// sc: computable over all phis and strong psis. c: over all phis, join
/// psis and lifted strong psis.
NotionOutcomes evaluate_dataset(const ReductionDataset& d);

struct DiagramReport {
  std::vector<std::string> lines;
  std::vector<std::string> violations;  // a stronger Holds without the weaker
};
DiagramReport relation_diagram(const std::vector<NotionOutcomes>& results);

/// `problem NAME rt1 K N MIN` or `problem NAME listed IW SW` followed by
/// `instance <..> : <..> <..>` lines and `end`.
FiniteProblem parse_problem(const std::string& text);
/// `dataset NAME`, two problem blocks (Q then P), then candidate blocks:
/// `candidate NAME strong|join`, `phi`, table lines, `psi`, table lines, `end`.
ReductionDataset parse_dataset(const std::string& text);

/// Canonical inclusion of j-colorings into k-colorings with the identity
/// on solutions.
ReductionDataset rt1_inclusion(unsigned j, unsigned k, Num n, Num minSize);

}  // namespace ramsey
