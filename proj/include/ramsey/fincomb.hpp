#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ramsey {

using Num = std::uint32_t;
using Stage = std::uint64_t;
/// Sorted, duplicate-free list of naturals.
using FinSet = std::vector<Num>;
/// Strictly increasing string of naturals.
using Str = std::vector<Num>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Colex order on finite sets: compare by max element, then by the binary
/// index sum 2^x. The empty set is least.
bool colex_less(const FinSet& a, const FinSet& b);

FinSet set_union(const FinSet& a, const FinSet& b);
bool is_subset(const FinSet& a, const FinSet& b);
FinSet to_set(std::vector<Num> v);

/// Stage-bounded monotone property of finite sets. `holds(F, s)` answers
/// whether the property is confirmed for F within s steps.
class FinSetPredicate {
 public:
  using Fn = std::function<bool(const FinSet&, Stage)>;

  FinSetPredicate() = default;
  FinSetPredicate(std::string name, std::vector<std::int64_t> params, Fn fn,
                  std::string description = {}, bool upwardClosed = false);

  bool holds(const FinSet& f, Stage stage) const { return fn_(f, stage); }
  const std::string& name() const { return name_; }
  const std::vector<std::int64_t>& params() const { return params_; }
  const std::string& description() const { return description_; }
  /// Registry reference, e.g. `card_ge(2)`.
  std::string ref() const;
  /// Holding for F implies holding for every superset at the same stage.
  /// Lets subset scans stop after testing the whole pool.
  bool upward_closed() const { return upwardClosed_; }
  /// Declares that holds(F) depends only on F ∩ [0, bound). Subset scans
  /// then ignore pool elements at or above the bound.
  FinSetPredicate with_support(Num bound) const {
    FinSetPredicate p = *this;
    p.support_ = bound;
    return p;
  }
  std::optional<Num> support() const { return support_; }

 private:
  std::string name_;
  std::vector<std::int64_t> params_;
  Fn fn_;
  std::string description_;
  bool upwardClosed_ = false;
  std::optional<Num> support_;
};

/// Builds a predicate from the registry. Throws ParseError on unknown names
/// or wrong arity.
FinSetPredicate make_predicate(const std::string& name,
                               const std::vector<std::int64_t>& params);
/// Parses `name(p1,p2,...)` or a bare `name`.
FinSetPredicate parse_predicate(const std::string& text);
std::vector<std::string> predicate_registry_names();

/// Least F (colex) with F ⊆ pool and pred(F) by stage, scanning at most
/// 2^|pool| subsets.
std::optional<FinSet> least_witness(const FinSetPredicate& pred,
                                    const FinSet& pool, Stage stage);
/// True if some subset of pool satisfies pred by stage.
bool some_subset_holds(const FinSetPredicate& pred, const FinSet& pool,
                       Stage stage);
/// Same, restricted to subsets containing `must` (an element of pool). Used
/// when the subsets of pool minus `must` are already known to fail.
bool some_subset_with(const FinSetPredicate& pred, const FinSet& pool, Num must,
                      Stage stage);

struct FiniteTree {
  std::vector<Str> nodes;  // sorted lexicographically, root first
  FinSet universe;         // empty means "all naturals"
  std::size_t widthBound = 0;  // 0 means unbounded

  static FiniteTree root_only();
  /// Chain tree of all initial segments of the increasing enumeration of f.
  static FiniteTree chain(const FinSet& f);
  /// Sorts, dedups and closes the node list under prefixes.
  static FiniteTree from_nodes(std::vector<Str> nodes);

  bool contains(const Str& a) const;
  std::vector<Str> children(const Str& a) const;
  std::vector<Str> terminals() const;
  /// Length of the longest node.
  std::size_t height() const;
  std::size_t size() const { return nodes.size(); }
  bool operator==(const FiniteTree& o) const { return nodes == o.nodes; }
};

/// Validates prefix-closure, root presence, increasing strings, universe
/// membership and width. Returns an error message or nullopt.
std::optional<std::string> validate_tree(const FiniteTree& t);

FinSet ran(const Str& a);
FinSet ran(const FiniteTree& t);

struct PhiCheck {
  bool ok = false;
  std::map<Str, FinSet> witnesses;  // least witness per terminal
  std::optional<Str> failing;       // first terminal with no witness
};

PhiCheck is_phi_tree(const FiniteTree& t, const FinSetPredicate& phi,
                     Stage stage);

/// max ran(a) < min ran(b), with the empty range treated as vacuous on
/// either side.
bool tree_less(const FiniteTree& a, const FiniteTree& b);

struct PhiSequence {
  std::vector<FiniteTree> trees;
  bool ordered() const;
};

/// All α with |α| ≤ depthLimit, α(n) ∈ ran(seq[n]) and no subset of
/// ran(α minus its last entry) satisfying psi by stage. Empty seq gives {∅}.
FiniteTree generated_subtree(const std::vector<FiniteTree>& seq,
                             const FinSetPredicate& psi, Stage stage,
                             std::size_t depthLimit);

std::string format_str(const Str& a);
Str parse_str(const std::string& text);
/// One node per line, lexicographic order, `<>` for the root.
std::string serialize_tree(const FiniteTree& t);
FiniteTree parse_tree(const std::string& text);

}  // namespace ramsey
