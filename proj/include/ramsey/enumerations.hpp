#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramsey/fincomb.hpp"
#include "ramsey/forest.hpp"

namespace ramsey {

/// A tree enumeration as an append-only log: level x appears at stageOf[x].
/// "Undefined at s" means the level is missing or its stage is later than s.
class TreeEnumeration {
 public:
  std::size_t size() const { return levels_.size(); }
  const std::vector<Str>& level(std::size_t x) const { return levels_.at(x); }
  Stage stage_of(std::size_t x) const { return stages_.at(x); }
  bool defined(std::size_t x, Stage s) const { return x < levels_.size() && stages_[x] <= s; }
  /// Largest x with level x defined at s.
  std::optional<std::size_t> top(Stage s) const;
  /// Stage at which the enumeration stopped for good, if it did.
  std::optional<Stage> closed_at() const { return closedAt_; }

  /// Appends level size(); strings are sorted and deduplicated.
  void append(std::vector<Str> strings, Stage stage);
  void close(Stage stage) { closedAt_ = stage; }

  /// Root level, lengths, 1-extension links, Inc, monotone stages.
  std::optional<std::string> validate() const;

  bool operator==(const TreeEnumeration&) const = default;

 private:
  std::vector<std::vector<Str>> levels_;
  std::vector<Stage> stages_;
  std::optional<Stage> closedAt_;
};

class UniformSequence {
 public:
  std::vector<TreeEnumeration> members;

  /// Member validity, the l < s stage bound, and the same-x ordering clause:
  /// when U_l(x) and U_l'(x) are both defined for l' < l, U_l'(x) came first.
  std::optional<std::string> validate() const;
  /// Stricter: every level of U_l' is enumerated before U_{l+1}(0) for l' <= l.
  bool sequential() const;
  /// Largest l whose root is defined at s; that member is the one that looks infinite.
  std::optional<std::size_t> active(Stage s) const;

  bool operator==(const UniformSequence&) const = default;
};

/// σ has an extension in the largest level of u defined at s.
bool looks_extendible(const TreeEnumeration& u, const Str& sigma, Stage s);
/// U_l has a level defined at s and no later member has started by s.
bool looks_infinite(const UniformSequence& seq, std::size_t l, Stage s);
/// Strings of the top level at s (the terminal nodes that look extendible).
std::vector<Str> extendible_terminals(const TreeEnumeration& u, Stage s);

/// The l-th member enumerates the growth of the l-th tree at `level` of a
/// canonical search (segments for level 0), one member level per trace
/// event, staged by the trace step. A member closes when its tree is found.
UniformSequence from_canonical_trace(const std::vector<TraceEvent>& trace, std::size_t level);

/// U_0(x) = {<0, 1, ..., x-1>} enumerated at stage x + 1, for x <= depth.
UniformSequence trivial_sequence(std::size_t depth);

/// One line per member level: `l ; x ; stage ; <..> <..>`, plus `l ; closed ; stage`.
std::string serialize_sequence(const UniformSequence& seq);
UniformSequence parse_sequence(const std::string& text);

}  // namespace ramsey
