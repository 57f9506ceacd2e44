#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/coloring.hpp"
#include "ramsey/fincomb.hpp"
#include "ramsey/functional.hpp"
#include "ramsey/report.hpp"

namespace ramsey {

/// Malformed sweep spec, case artifact or command parameters.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---- generators shared by sweeps and tests ----

/// One predicate drawn from a fixed menu of registry entries.
FinSetPredicate sample_predicate(std::mt19937_64& rng);

/// Registry predicates with small parameters, in a fixed order.
std::vector<FinSetPredicate> predicate_family();

/// Limits for x < n with every color used at least `minEach` times (n must
/// allow it), thresholds x + 1 + r for r < 4 capped at n, random noise.
PairColoring sample_stable_coloring(std::mt19937_64& rng, Num n, unsigned k, std::size_t minEach);

/// Completes a partial limit map (nullopt = free) on x < n so every color
/// appears at least `minEach` times: free points take colors cyclically, or
/// at random until admissible. Returns nullopt when the free points cannot
/// make up the shortfall.
std::optional<std::vector<unsigned>> complete_limits(const std::vector<std::optional<unsigned>>& fixed,
                                                     unsigned k, std::size_t minEach, bool cyclic,
                                                     std::mt19937_64& rng);

/// Witness-tree instance: H below a reservoir [r, r + m), singleton witness
/// rows on the top points (at least 2 theta - 1 of them) and a few pair rows.
struct TreeInstance {
  FinSet h;
  TableFunctional psi;
  Num k = 0;
  FinSet reservoir;
  std::size_t maxDepth = 0;
};
TreeInstance sample_tree_instance(std::mt19937_64& rng, std::size_t theta);

// ---- sweeps ----

/// Kinds: combcore, forest, finseq, twoseq, nured, coh, ctree, reduction.
/// A spec is {"kind": ..., params...}; unknown keys are rejected. A file
/// may also hold {"sweeps": [spec, ...]}, run in order into one report.
Report run_sweep(const Json& spec, const RunConfig& cfg);

/// Re-evaluates a case artifact written by a sweep. The report passes when
/// the fresh verdict and detail equal the recorded ones.
Report replay_case(const Json& artifact);

/// Spec keys each kind accepts, with their defaults.
Json sweep_defaults(const std::string& kind);

}  // namespace ramsey
