#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ramsey/fincomb.hpp"

namespace ramsey {

class InconsistentTable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};
class InvalidTable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One row of a truth table: on input x, if the oracle agrees with `bits` on
/// every position of `domain` (both masks over [0, use)), output `out`,
/// visible from stage `stage` on.
struct TableEntry {
  std::uint64_t domain = 0;
  std::uint64_t bits = 0;
  Num x = 0;
  unsigned out = 0;
  Num use = 0;
  Stage stage = 0;

  bool matches(std::uint64_t oracle) const { return (oracle & domain) == bits; }
  auto key() const { return std::tie(stage, use, x, domain, bits, out); }
  bool operator==(const TableEntry& o) const { return key() == o.key(); }
  bool operator<(const TableEntry& o) const { return key() < o.key(); }
};

/// Two entries on the same input whose constraints can hold together.
bool compatible(const TableEntry& a, const TableEntry& b);

struct Evaluation {
  std::optional<unsigned> value;  // nullopt = divergent
  std::optional<Num> use;
  std::optional<Stage> stage;
  bool converges() const { return value.has_value(); }
};

/// Characteristic function of A restricted to [0, 64).
std::uint64_t oracle_mask(const FinSet& a);

class TableFunctional {
 public:
  TableFunctional() = default;
  /// Validates use discipline and consistency.
  explicit TableFunctional(std::vector<TableEntry> entries, std::uint64_t id = 0);
  /// Skips the consistency check so evaluation-time detection can be tested.
  static TableFunctional unchecked(std::vector<TableEntry> entries, std::uint64_t id = 0);

  std::uint64_t id() const { return id_; }
  const std::vector<TableEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  /// Largest input with an entry plus one (0 for the empty table).
  Num input_bound() const { return static_cast<Num>(byX_.size()); }

  /// Resolution: least stage, then least use, among entries visible by
  /// `stage` that match A. Throws InconsistentTable if matching entries
  /// disagree.
  Evaluation eval(const FinSet& a, Num x, Stage stage) const;
  Evaluation eval_mask(std::uint64_t oracle, Num x, Stage stage) const;

 private:
  std::vector<TableEntry> entries_;  // sorted by resolution order
  std::vector<std::vector<std::size_t>> byX_;
  std::uint64_t id_ = 0;
  void index();
};

inline Evaluation eval_on_set(const TableFunctional& psi, const FinSet& a, Num x, Stage stage) {
  return psi.eval(a, x, stage);
}

/// { x < bound : eval(A, x, stage) = 1 }.
FinSet defined_set(const TableFunctional& psi, const FinSet& a, Num bound, Stage stage);

/// For F ⊆ H with eval(F, x) convergent at use u: true iff H and F agree
/// below u. When true the values on H and F are compared and a mismatch
/// throws InconsistentTable.
bool use_extension_stability(const TableFunctional& psi, const FinSet& f,
                             const FinSet& h, Num x, Stage stage);

/// Even/odd interleaving: {2a : a ∈ A} ∪ {2b+1 : b ∈ B}.
FinSet join(const FinSet& a, const FinSet& b);

/// `bits @ domain ; x ; out ; use ; stage`, one entry per line. `- @ -` is
/// the empty constraint; bits are listed in domain order.
std::string serialize_table(const TableFunctional& t);
TableFunctional parse_table(const std::string& text, std::uint64_t id = 0);

/// Bounded family of tables, enumerated in a fixed order.
struct TableSpace {
  Num maxUse = 4;       // use ranges over [0, maxUse]
  Num inputBound = 8;   // inputs x < inputBound
  std::size_t maxEntries = 3;
  bool outputsOne = true;     // only output-1 rows (else both outputs)
  bool fullDomain = true;     // constraint domain = [0, use) (else any subset)
  bool minimalStage = true;   // stage = max(use, x+1) (else up to maxStage)
  Stage maxStage = 8;
};

/// Every admissible entry of the space in canonical order.
std::vector<TableEntry> space_entries(const TableSpace& space);

/// Calls fn(table) for every consistent table with at most maxEntries rows,
/// ids counting from 0 in enumeration order. Stops early when fn returns
/// false. Returns the number of tables visited.
std::uint64_t for_each_table(const TableSpace& space,
                             const std::function<bool(const TableFunctional&)>& fn);

}  // namespace ramsey
