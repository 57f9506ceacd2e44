#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/fincomb.hpp"

namespace ramsey {

class EmptyResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coloring of pairs x < y from [0, N]. Undefined pairs are allowed; each
/// defined pair carries the stage at which it converges (default y).
class PairColoring {
 public:
  PairColoring() = default;
  PairColoring(Num n, unsigned k);

  Num bound() const { return n_; }  // N, the largest point
  unsigned colors() const { return k_; }

  std::optional<unsigned> at(Num x, Num y) const;
  /// Value if converged by stage s.
  std::optional<unsigned> at(Num x, Num y, Stage s) const;
  void set(Num x, Num y, unsigned color);
  void set(Num x, Num y, unsigned color, Stage stage);
  void clear(Num x, Num y);
  bool total() const;

  /// Convergence is downward closed in y for each x at every stage.
  std::optional<std::string> check_convergence() const;

  bool operator==(const PairColoring& o) const = default;

 private:
  std::size_t idx(Num x, Num y) const;
  Num n_ = 0;
  unsigned k_ = 0;
  std::vector<int> cells_;
  std::vector<Stage> stages_;
};

struct Limit {
  unsigned color;
  Num threshold;  // d(x, y) = color for threshold <= y <= N
  bool operator==(const Limit&) const = default;
};

/// Limits for x in [0, N); x = N has no pairs above it.
struct StabilityCert {
  std::vector<Limit> limits;
  unsigned limit(Num x) const { return limits.at(x).color; }
};

/// Least thresholds at which each x < N settles (always exists at finite
/// scale for total colorings).
StabilityCert stability_cert(const PairColoring& d);
bool check_cert(const PairColoring& d, const StabilityCert& cert);

/// d(x, y) = limits[x] for y >= thresholds[x], and noise drawn from rng
/// below the threshold.
PairColoring stable_coloring(Num n, unsigned k, const std::vector<unsigned>& limits,
                             const std::vector<Num>& thresholds, std::mt19937_64& rng);

struct UnaryColoring {
  std::vector<unsigned> values;
  unsigned m = 0;
  unsigned operator()(Num x) const { return values.at(x); }
  std::size_t size() const { return values.size(); }
  bool operator==(const UnaryColoring&) const = default;
};

/// #(0) = 1, #(k) = (k+1)·#(k-1)^k. Throws overflow_error for k > 4.
std::uint64_t hash_count(unsigned k);
/// (k+1, #(k-1), ..., #(k-1)) with k copies of #(k-1).
std::vector<std::uint64_t> tuple_radices(unsigned k);

/// Mixed radix, first coordinate most significant.
std::uint64_t encode_tuple(const std::vector<std::uint64_t>& values,
                           const std::vector<std::uint64_t>& radices);
std::vector<std::uint64_t> decode_tuple(std::uint64_t code,
                                        const std::vector<std::uint64_t>& radices);

/// Largest y with x < y <= s whose value has converged by stage s.
std::optional<unsigned> guess_limit(const PairColoring& d, Num x, Stage s);

bool is_homogeneous(const FinSet& h, const PairColoring& d, unsigned color);
bool is_limit_homogeneous(const FinSet& l, const StabilityCert& cert, unsigned color);
/// Constant on the elements of s that are >= threshold.
bool is_almost_homogeneous(const FinSet& s, const UnaryColoring& c, Num threshold);

/// Greedy thinning of a limit-homogeneous set: keep x when it is past the
/// threshold of every kept element and pairs with them in `color`.
FinSet thin_to_homogeneous(const FinSet& l, const PairColoring& d, const StabilityCert& cert,
                           unsigned color);

struct DigitFamily {
  unsigned width = 0;
  std::vector<std::vector<unsigned>> columns;  // columns[s][x]
  unsigned digit(std::size_t s, Num x) const {
    return s < columns.size() ? columns[s].at(x) : 0U;
  }
};

/// Binary digits of e(x), zero padded to floor(log2 #(k)) + 1 places, most
/// significant first.
DigitFamily digit_family(const UnaryColoring& e, unsigned k);

/// For each column s < n, the elements of y that are >= tailStart lie all
/// inside or all outside the column.
bool is_cohesive_upto(const FinSet& y, const std::vector<std::vector<unsigned>>& family,
                      std::size_t n, Num tailStart);

/// `pair N k` header, then one row per x listing d(x, x+1..N); `.` marks an
/// undefined pair.
std::string serialize_pair(const PairColoring& d);
PairColoring parse_pair(const std::string& text);
/// `unary m` header, then the values separated by spaces.
std::string serialize_unary(const UnaryColoring& c);
UnaryColoring parse_unary(const std::string& text);
/// One line per column, as a bitstring over x.
std::string serialize_digits(const DigitFamily& f);

}  // namespace ramsey
