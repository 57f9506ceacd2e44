#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramsey/coloring.hpp"
#include "ramsey/forcing_c.hpp"
#include "ramsey/functional.hpp"
#include "ramsey/reduct.hpp"
#include "ramsey/report.hpp"

namespace ramsey {

/// Stage machine for psi with k colors on [0, universeBound]. With `d`, each
/// Case 3 stage is also run through the diagonal check against d's limits.
Report simulate_nured(const TableFunctional& psi, unsigned k, const std::optional<PairColoring>& d,
                      const RunConfig& cfg);

/// k = 1: the base machine with target color 0 against a 2-coloring d.
/// k > 1: the assembled coloring e against a k-coloring d. Ends with the
/// finite-scale diagonal verification.
Report simulate_coh(const TableFunctional& psi, const PairColoring& d, unsigned k, Stage stages,
                    const RunConfig& cfg);

/// Stage s is dedicated by s mod 3: Q for phi (s/3) mod |phis|, R cycling
/// through (phi, psi, j), P cycling through the entries of Y and the dense
/// family. Every stage's report and ledger are kept in the details.
std::vector<Dedication> default_schedule(std::size_t stages, std::size_t phis, std::size_t psis,
                                         std::size_t denseCount);
Report simulate_nscred(const std::vector<ColumnPairFunctional>& phis, const std::vector<TableFunctional>& psis,
                       std::size_t stages, const RunConfig& cfg);

/// One candidate against the chosen notion.
Report check_reduction(const FiniteProblem& q, const FiniteProblem& p, const TableFunctional& phi,
                       const TableFunctional& psi, Mode mode);
/// Every notion for a dataset's candidates, plus the implication diagram.
Report check_dataset(const ReductionDataset& d);

/// Digit family of e with per-point digit strings.
Report emit_digits(const UnaryColoring& e, unsigned k);

/// Splits text into blocks separated by lines holding only `---`.
std::vector<std::string> split_blocks(const std::string& text);

}  // namespace ramsey
