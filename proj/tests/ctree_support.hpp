// Random witness-tree instances and brute-force checks for labeled trees.
#pragma once

#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ramsey/forcing_c.hpp"
#include "test_support.hpp"

namespace oracle {

struct CTreeInstance {
  FinSet h;
  ramsey::TableFunctional psi;
  Num k = 0;
  FinSet reservoir;
  std::size_t maxDepth = 0;
};

// Reservoir [r, r+m); every point at or above the cutoff is a witness on its
// own, and at least 2*theta-1 points lie there, so each non-terminal node has
// that many one-extensions. Extra rows need two reservoir points, possibly
// with an H element.
inline CTreeInstance random_ctree_instance(std::mt19937& rng, std::size_t theta) {
  CTreeInstance in;
  const Num r = 2 + rng() % 4;
  const Num m = static_cast<Num>(2 * theta - 1 + 2 + rng() % 5);
  in.h = random_set(rng, 0, r - 1, 0.5);
  in.k = rng() % 3;
  for (Num x = r; x < r + m; ++x) in.reservoir.push_back(x);
  const Num high = static_cast<Num>(2 * theta - 1 + rng() % 2);
  const Num cutoff = r + m - high;
  in.maxDepth = cutoff - r + 1;
  std::vector<ramsey::TableEntry> rows;
  auto row = [&](std::uint64_t bits, Num w) {
    Num use = 0;
    for (Num b = 0; b < 64; ++b)
      if (bits >> b & 1) use = b + 1;
    rows.push_back({bits, bits, w, 1, use, std::max<ramsey::Stage>(use, w + 1)});
  };
  for (Num a = cutoff; a < r + m; ++a) row(std::uint64_t{1} << a, in.k + rng() % 3);
  const std::size_t extra = rng() % 6;
  for (std::size_t e = 0; e < extra && cutoff > r + 1; ++e) {
    const Num a = r + rng() % (cutoff - r), b = r + rng() % (cutoff - r);
    if (a == b) continue;
    std::uint64_t bits = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
    if (!in.h.empty() && rng() % 2) bits |= std::uint64_t{1} << in.h[rng() % in.h.size()];
    // Some rows land below k and must be ignored.
    row(bits, rng() % 4 == 0 && in.k > 0 ? in.k - 1 : in.k + rng() % 4);
  }
  in.psi = ramsey::TableFunctional(rows);
  return in;
}

// Least w >= k over every subset of ran(a), by direct evaluation.
inline std::optional<Num> least_label(const CTreeInstance& in, const Str& a) {
  std::optional<Num> best;
  for (const auto& f : all_subsets(FinSet(a.begin(), a.end())))
    for (Num w = in.k; w < in.psi.input_bound(); ++w) {
      auto ev = in.psi.eval(ramsey::set_union(in.h, f), w, std::numeric_limits<ramsey::Stage>::max());
      if (ev.value == 1u && (!best || w < *best)) best = w;
    }
  return best;
}

// Empty when every labeled-tree and T0 structure property holds.
inline std::vector<std::string> ctree_errors(const CTreeInstance& in, const ramsey::LabeledTree& lt,
                                             const ramsey::FiniteTree& t0, std::size_t theta) {
  std::vector<std::string> bad;
  auto term = [&](const Str& a) { return least_label(in, a).has_value(); };
  for (const auto& a : lt.tree.nodes) {
    auto it = lt.labels.find(a);
    if (it == lt.labels.end()) {
      bad.push_back("unlabeled node " + ramsey::format_str(a));
      continue;
    }
    if (term(a)) {
      if (it->second != least_label(in, a)) bad.push_back("terminal label at " + ramsey::format_str(a));
      continue;
    }
    std::map<Num, std::size_t> count;
    for (const auto& b : lt.tree.nodes)
      if (b.size() == a.size() + 1 && std::equal(a.begin(), a.end(), b.begin()) && lt.labels.at(b))
        ++count[*lt.labels.at(b)];
    std::optional<Num> want;
    for (const auto& [w, c] : count)
      if (c >= theta && !want) want = w;
    if (it->second != want) bad.push_back("internal label at " + ramsey::format_str(a));
  }
  for (const auto& a : t0.nodes) {
    if (!lt.tree.contains(a)) bad.push_back("T0 node outside T");
    std::size_t kids = 0;
    for (const auto& b : t0.nodes)
      if (b.size() == a.size() + 1 && std::equal(a.begin(), a.end(), b.begin())) ++kids;
    if (kids == 0 && !term(a)) bad.push_back("T0 leaf not terminal: " + ramsey::format_str(a));
    if (kids > 0 && kids < theta) bad.push_back("T0 node with few children: " + ramsey::format_str(a));
    if (kids > 0 && term(a)) bad.push_back("T0 continues past a terminal");
  }
  return bad;
}

}  // namespace oracle
