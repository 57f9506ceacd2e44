#include "ramsey/sweep.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "ramsey/coh.hpp"
#include "ramsey/enumerations.hpp"
#include "ramsey/forcing_c.hpp"
#include "ramsey/forcing_p.hpp"
#include "ramsey/forest.hpp"
#include "ramsey/reduct.hpp"

namespace ramsey {

// ---- generators ----

FinSetPredicate sample_predicate(std::mt19937_64& rng) {
  auto small = [&] { return static_cast<std::int64_t>(rng() % 5); };
  switch (rng() % 8) {
    case 0: return make_predicate("card_ge", {small()});
    case 1: return make_predicate("contains", {small() * 2});
    case 2: return make_predicate("max_ge", {small() * 3});
    case 3: return make_predicate("residue_card_ge", {2, small() % 2, 1 + small() % 2});
    case 4: return make_predicate("sum_mod", {3, small() % 3});
    case 5: return make_predicate("gap_ge", {2 + small()});
    case 6: return make_predicate("lagged_card_ge", {1 + small() % 3, small()});
    default: return make_predicate("interval_card_ge", {small(), 4 + small() * 2, 1});
  }
}

std::vector<FinSetPredicate> predicate_family() {
  std::vector<FinSetPredicate> out{make_predicate("never", {}), make_predicate("always", {})};
  for (std::int64_t n = 0; n <= 4; ++n) out.push_back(make_predicate("card_ge", {n}));
  for (std::int64_t x = 0; x <= 10; ++x) out.push_back(make_predicate("contains", {x}));
  for (std::int64_t x = 0; x <= 11; ++x) out.push_back(make_predicate("max_ge", {x}));
  for (std::int64_t m = 2; m <= 3; ++m)
    for (std::int64_t r = 0; r < m; ++r)
      for (std::int64_t n = 1; n <= 2; ++n) out.push_back(make_predicate("residue_card_ge", {m, r, n}));
  for (std::int64_t m = 2; m <= 3; ++m)
    for (std::int64_t r = 0; r < m; ++r) out.push_back(make_predicate("sum_mod", {m, r}));
  for (std::int64_t g = 1; g <= 5; ++g) out.push_back(make_predicate("gap_ge", {g}));
  for (std::int64_t n = 1; n <= 3; ++n)
    for (std::int64_t lag = 0; lag <= 4; lag += 2) out.push_back(make_predicate("lagged_card_ge", {n, lag}));
  for (std::int64_t lo = 0; lo <= 4; lo += 2)
    for (std::int64_t hi = 4; hi <= 10; hi += 3)
      for (std::int64_t n = 1; n <= 2; ++n) out.push_back(make_predicate("interval_card_ge", {lo, hi, n}));
  return out;
}

std::optional<std::vector<unsigned>> complete_limits(const std::vector<std::optional<unsigned>>& fixed,
                                                     unsigned k, std::size_t minEach, bool cyclic,
                                                     std::mt19937_64& rng) {
  std::vector<std::size_t> have(k, 0);
  std::size_t free = 0;
  for (const auto& c : fixed) {
    if (c) ++have.at(*c);
    else ++free;
  }
  std::size_t shortfall = 0;
  for (auto h : have) shortfall += h < minEach ? minEach - h : 0;
  if (shortfall > free) return std::nullopt;
  std::vector<unsigned> out(fixed.size());
  auto fill = [&](auto pick) {
    for (std::size_t x = 0; x < fixed.size(); ++x) out[x] = fixed[x] ? *fixed[x] : pick(x);
    std::vector<std::size_t> cnt(k, 0);
    for (auto c : out) ++cnt[c];
    return std::all_of(cnt.begin(), cnt.end(), [&](std::size_t c) { return c >= minEach; });
  };
  if (cyclic) {
    // Free points first go to the colors still short, then round robin.
    std::vector<unsigned> order;
    auto need = have;
    for (unsigned c = 0; c < k; ++c)
      while (need[c] < minEach) {
        order.push_back(c);
        ++need[c];
      }
    std::size_t i = 0;
    if (fill([&](std::size_t) { return i < order.size() ? order[i++] : static_cast<unsigned>(i++ % k); }))
      return out;
    return std::nullopt;
  }
  for (int attempt = 0; attempt < 1000; ++attempt)
    if (fill([&](std::size_t) { return static_cast<unsigned>(rng() % k); })) return out;
  return std::nullopt;
}

namespace {

std::vector<Num> sample_thresholds(std::mt19937_64& rng, Num n) {
  std::vector<Num> th(n);
  for (Num x = 0; x < n; ++x) th[x] = std::min<Num>(n, x + 1 + static_cast<Num>(rng() % 4));
  return th;
}

}  // namespace

PairColoring sample_stable_coloring(std::mt19937_64& rng, Num n, unsigned k, std::size_t minEach) {
  if (static_cast<std::size_t>(k) * minEach > n) throw SpecError("too few points for the limit quota");
  std::vector<std::optional<unsigned>> none(n);
  auto lim = complete_limits(none, k, minEach, false, rng);
  if (!lim) throw SpecError("could not draw admissible limits");
  auto th = sample_thresholds(rng, n);
  return stable_coloring(n, k, *lim, th, rng);
}

TreeInstance sample_tree_instance(std::mt19937_64& rng, std::size_t theta) {
  TreeInstance in;
  const Num r = 2 + static_cast<Num>(rng() % 4);
  const Num m = static_cast<Num>(2 * theta - 1 + 2 + rng() % 5);
  for (Num x = 0; x < r; ++x)
    if (rng() % 2) in.h.push_back(x);
  in.k = static_cast<Num>(rng() % 3);
  for (Num x = r; x < r + m; ++x) in.reservoir.push_back(x);
  const Num high = static_cast<Num>(2 * theta - 1 + rng() % 2);
  const Num cutoff = r + m - high;
  in.maxDepth = cutoff - r + 1;
  std::vector<TableEntry> rows;
  auto row = [&](std::uint64_t bits, Num w) {
    Num use = 0;
    for (Num b = 0; b < 64; ++b)
      if (bits >> b & 1) use = b + 1;
    rows.push_back({bits, bits, w, 1, use, std::max<Stage>(use, w + 1)});
  };
  for (Num a = cutoff; a < r + m; ++a) row(std::uint64_t{1} << a, in.k + static_cast<Num>(rng() % 3));
  const std::size_t extra = rng() % 6;
  for (std::size_t e = 0; e < extra && cutoff > r + 1; ++e) {
    const Num a = r + static_cast<Num>(rng() % (cutoff - r)), b = r + static_cast<Num>(rng() % (cutoff - r));
    if (a == b) continue;
    std::uint64_t bits = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
    if (!in.h.empty() && rng() % 2) bits |= std::uint64_t{1} << in.h[rng() % in.h.size()];
    row(bits, rng() % 4 == 0 && in.k > 0 ? in.k - 1 : in.k + static_cast<Num>(rng() % 4));
  }
  in.psi = TableFunctional(rows);
  return in;
}

// ---- sweep plumbing ----

namespace {

struct CaseResult {
  bool pass = true;
  bool skipped = false;
  Json detail;  // null on a plain pass
  std::vector<std::string> violations;
  // Keys are string literals; the sink merges them by text.
  std::array<std::pair<const char*, std::uint64_t>, 8> counts{};
  std::size_t nCounts = 0;
  void count(const char* key, std::uint64_t n = 1) {
    for (std::size_t i = 0; i < nCounts; ++i)
      if (counts[i].first == key) {
        counts[i].second += n;
        return;
      }
    if (nCounts == counts.size()) throw std::logic_error("too many counters in one case");
    counts[nCounts++] = {key, n};
  }
  void fail(Json d) {
    pass = false;
    detail = std::move(d);
  }
};

Json result_json(const CaseResult& r) {
  Json j;
  j["verdict"] = !r.violations.empty() ? "violation" : r.pass ? (r.skipped ? "skipped" : "pass") : "fail";
  if (!r.detail.is_null()) j["detail"] = r.detail;
  if (!r.violations.empty()) j["violations"] = r.violations;
  return j;
}

class Sink {
 public:
  Sink(Report& rep, std::string kind, const RunConfig& cfg, const Json& params)
      : rep_(rep), kind_(std::move(kind)), cfg_(cfg),
        listAll_(params.value("listCases", false)),
        maxListed_(params.value("maxListed", std::size_t{50})),
        maxArtifacts_(params.value("maxArtifacts", std::size_t{200})) {}

  void add(const CaseResult& r, const std::function<Json()>& input) {
    const std::uint64_t index = cases_++;
    for (std::size_t i = 0; i < r.nCounts; ++i) counts_[r.counts[i].first] += r.counts[i].second;
    const bool bad = !r.pass || !r.violations.empty();
    if (r.skipped) ++skipped_;
    if (!bad) {
      if (!r.skipped) ++passed_;
      if (listAll_) {
        Json c{{"kind", kind_}, {"index", index}};
        c.update(result_json(r));
        c["input"] = input();
        rep_.cases.push_back(std::move(c));
      }
      return;
    }
    if (!r.violations.empty()) ++violated_;
    else ++failed_;
    Json in = input();
    Json c{{"kind", kind_}, {"index", index}};
    c.update(result_json(r));
    if (listAll_ || listed_ < maxListed_) {
      Json shown = c;
      shown["input"] = in;
      rep_.cases.push_back(std::move(shown));
      ++listed_;
    }
    for (const auto& v : r.violations)
      rep_.violate(kind_ + " case " + std::to_string(index) + ": " + v);
    if (r.violations.empty()) rep_.fail();
    if (!cfg_.outputDir.empty() && written_ < maxArtifacts_) {
      Json art{{"format", "ramsey-case"}, {"version", kReportVersion}, {"kind", kind_}, {"index", index},
               {"input", in}};
      art.update(result_json(r));
      std::filesystem::create_directories(cfg_.outputDir);
      const auto path = std::filesystem::path(cfg_.outputDir) / (kind_ + "-" + std::to_string(index) + ".json");
      std::ofstream(path) << art.dump(2) << "\n";
      rep_.artifacts.push_back(path.string());
      ++written_;
    }
  }

  Json summary() const {
    Json s{{"kind", kind_}, {"cases", cases_}, {"passed", passed_}, {"skipped", skipped_},
           {"failed", failed_}, {"violations", violated_}};
    std::map<std::string, std::uint64_t> merged;
    for (const auto& [k, n] : counts_) merged[k] += n;
    Json c = Json::object();
    for (const auto& [k, n] : merged) c[k] = n;
    s["counts"] = c;
    return s;
  }
  std::uint64_t cases() const { return cases_; }

 private:
  Report& rep_;
  std::string kind_;
  const RunConfig& cfg_;
  bool listAll_;
  std::size_t maxListed_, maxArtifacts_;
  std::uint64_t cases_ = 0, passed_ = 0, skipped_ = 0, failed_ = 0, violated_ = 0;
  std::size_t listed_ = 0, written_ = 0;
  std::map<const char*, std::uint64_t> counts_;
};

constexpr std::size_t kBatch = 2048;

// Evaluates cases in parallel batches and feeds the sink in case order.
template <class Case>
class Driver {
 public:
  using Eval = std::function<CaseResult(const Case&)>;
  using Input = std::function<Json(const Case&)>;
  Driver(Sink& sink, Eval eval, Input input) : sink_(sink), eval_(std::move(eval)), input_(std::move(input)) {}
  ~Driver() = default;

  void push(Case c) {
    batch_.push_back(std::move(c));
    if (batch_.size() >= kBatch) flush();
  }
  /// Returns each result to `keep`; stops feeding the sink once it says no.
  void flush(const std::function<bool(const CaseResult&)>& keep = {}) {
    auto results = parallel_map<CaseResult>(batch_.size(), worker_count(),
                                            [&](std::size_t i) { return eval_(batch_[i]); });
    for (std::size_t i = 0; i < batch_.size() && !stopped_; ++i) {
      sink_.add(results[i], [&] { return input_(batch_[i]); });
      if (keep && !keep(results[i])) stopped_ = true;
    }
    batch_.clear();
  }
  std::size_t pending() const { return batch_.size(); }
  bool stopped() const { return stopped_; }

 private:
  Sink& sink_;
  Eval eval_;
  Input input_;
  std::vector<Case> batch_;
  bool stopped_ = false;
};

// ---- parameters ----

const std::map<std::string, Json>& defaults_table() {
  static const std::map<std::string, Json> t = {
      {"combcore", {{"k", {2, 3}}, {"universe", 12}, {"samples", 150}, {"stage", 25}, {"maxTrees", 12}}},
      {"forest", {{"count", 1000}, {"maxK", 3}, {"universe", 25}, {"stage", 25}, {"maxTrees", 12},
                  {"maxAttempts", 20000}}},
      {"finseq", {{"universe", 10}, {"stage", 64}, {"maxTrees", 4}}},
      {"twoseq", {{"samples", 300}, {"universe", 14}, {"stage", 30}, {"maxTrees", 10}, {"count", 3},
                  {"phi", ""}, {"psi", ""}}},
      {"nured", {{"k", {2, 3}}, {"universe", 16}, {"maxUse", 4}, {"maxEntries", 3}, {"maxStage", 64},
                 {"minEach", 4}, {"fills", {"cyclic", "random"}}, {"stride", 1}, {"maxMaps", 1u << 16}}},
      {"coh", {{"k", 1}, {"universe", 16}, {"maxUse", 4}, {"maxEntries", 2}, {"colorings", 8},
               {"minEach", 4}, {"stride", 1}, {"offset", 0}, {"theta", nullptr}, {"maxTrees", 8}}},
      {"ctree", {{"instances", 500}, {"theta", nullptr}}},
      {"reduction", {{"datasets", Json::array()}, {"inclusion", {{"maxK", 4}, {"n", 8}, {"minSize", 2}}}}},
  };
  return t;
}

Json effective_params(const Json& spec, const RunConfig& cfg) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw SpecError("sweep spec needs a string \"kind\"");
  const std::string kind = spec["kind"];
  auto it = defaults_table().find(kind);
  if (it == defaults_table().end()) throw SpecError("unknown sweep kind: " + kind);
  Json p = it->second;
  static const std::vector<std::string> common{"listCases", "maxListed", "maxArtifacts", "seed"};
  for (const auto& [key, value] : spec.items()) {
    if (key == "kind") continue;
    if (!p.contains(key) && std::find(common.begin(), common.end(), key) == common.end())
      throw SpecError("unknown key for " + kind + ": " + key);
    p[key] = value;
  }
  if (p.contains("theta") && p["theta"].is_null()) p["theta"] = cfg.theta;
  if (!p.contains("seed")) p["seed"] = cfg.seed;
  return p;
}

template <class T>
T num(const Json& p, const char* key) {
  try {
    return p.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad value for ") + key + ": " + e.what());
  }
}

std::vector<unsigned> k_list(const Json& p) {
  const Json& v = p.at("k");
  std::vector<unsigned> ks;
  if (v.is_array())
    for (const auto& x : v) ks.push_back(x.get<unsigned>());
  else
    ks.push_back(v.get<unsigned>());
  for (auto k : ks)
    if (k == 0 || k > 4) throw SpecError("k must lie in [1, 4]");
  return ks;
}

Json refs(const std::vector<FinSetPredicate>& phis) {
  Json a = Json::array();
  for (const auto& p : phis) a.push_back(p.ref());
  return a;
}
std::vector<FinSetPredicate> parse_refs(const Json& a) {
  std::vector<FinSetPredicate> out;
  for (const auto& r : a) out.push_back(parse_predicate(r.get<std::string>()));
  return out;
}

FinSet interval(Num lo, Num hi) {
  FinSet s;
  for (Num x = lo; x < hi; ++x) s.push_back(x);
  return s;
}

// ---- combcore and forest ----

struct SearchCase {
  std::vector<FinSetPredicate> phis;
  Num universe = 12;  // points [0, universe)
  Stage stage = 25;
  std::size_t maxTrees = 12;
};
Json search_input(const SearchCase& c) {
  return {{"phis", refs(c.phis)}, {"universe", c.universe}, {"stage", c.stage}, {"maxTrees", c.maxTrees}};
}
SearchCase search_case(const Json& in) {
  return {parse_refs(in.at("phis")), in.at("universe").get<Num>(), in.at("stage").get<Stage>(),
          in.at("maxTrees").get<std::size_t>()};
}
CanonicalResult search(const SearchCase& c) {
  if (c.universe == 0) throw SpecError("universe must be positive");
  return canonical_search(c.phis, {c.stage, c.universe - 1, c.maxTrees});
}

CaseResult eval_combcore(const SearchCase& c) {
  CaseResult r;
  auto s = search(c);
  const FinSet range = s.found ? s.forest.range() : FinSet{};
  if (!s.found || range.size() > c.universe || range.size() > 16) {
    r.skipped = true;
    r.count(s.found ? "too large" : "no forest");
    return r;
  }
  const std::size_t k = c.phis.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < range.size(); ++i) total *= k;
  r.count("forests");
  r.count("colorings", total);
  r.count("forest points", range.size());
  std::vector<unsigned> col(range.size(), 0);
  std::vector<std::vector<std::vector<Str>>> terms(k);
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& t : s.forest.levels[j]) terms[j].push_back(t.terminals());
  std::uint64_t failures = 0;
  Json first;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t v = code;
    for (auto& x : col) {
      x = static_cast<unsigned>(v % k);
      v /= k;
    }
    auto color = [&](Num x) {
      return col[static_cast<std::size_t>(std::lower_bound(range.begin(), range.end(), x) - range.begin())];
    };
    std::string why;
    try {
      auto w = combcore_witness(s.forest, color);
      const auto& ts = terms.at(w.level).at(w.tree);
      if (std::find(ts.begin(), ts.end(), w.terminal) == ts.end()) why = "witness is not a terminal";
      for (Num x : w.terminal)
        if (color(x) != w.level) why = "witness not homogeneous in its level";
    } catch (const NoWitness& e) {
      why = e.what();
    }
    if (!why.empty() && failures++ == 0) first = {{"coloring", col}, {"reason", why}};
  }
  if (failures) {
    first["failures"] = failures;
    r.fail(first);
  }
  return r;
}

CaseResult eval_forest(const SearchCase& c) {
  CaseResult r;
  auto s = search(c);
  if (!s.found) {
    r.skipped = true;
    r.count("no forest");
    return r;
  }
  r.count("forests");
  r.count("trees", [&] {
    std::size_t n = 0;
    for (const auto& l : s.forest.levels) n += l.size();
    return n;
  }());
  if (auto e = check_forest(s.forest, c.phis, c.stage, interval(0, c.universe)))
    r.fail({{"reason", *e}, {"forest", serialize_forest(s.forest)}});
  return r;
}

void sweep_combcore(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "combcore", cfg, p);
  std::mt19937_64 rng(num<std::uint64_t>(p, "seed"));
  const Num universe = num<Num>(p, "universe");
  if (universe == 0 || universe > 16) throw SpecError("combcore universe must lie in [1, 16]");
  Driver<SearchCase> drv(sink, eval_combcore, search_input);
  for (unsigned k : k_list(p))
    for (std::size_t i = 0; i < num<std::size_t>(p, "samples"); ++i) {
      SearchCase c{{}, universe, num<Stage>(p, "stage"), num<std::size_t>(p, "maxTrees")};
      for (unsigned j = 0; j < k; ++j) c.phis.push_back(sample_predicate(rng));
      drv.push(std::move(c));
    }
  drv.flush();
  rep.summary = sink.summary();
}

void sweep_forest(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "forest", cfg, p);
  std::mt19937_64 rng(num<std::uint64_t>(p, "seed"));
  const auto want = num<std::uint64_t>(p, "count");
  const auto maxAttempts = num<std::uint64_t>(p, "maxAttempts");
  const auto maxK = num<unsigned>(p, "maxK");
  if (maxK == 0) throw SpecError("maxK must be positive");
  std::uint64_t found = 0, attempts = 0;
  Driver<SearchCase> drv(sink, eval_forest, search_input);
  auto keep = [&](const CaseResult& r) { return !(!r.skipped && ++found >= want); };
  while (found < want && attempts < maxAttempts && !drv.stopped()) {
    SearchCase c{{}, num<Num>(p, "universe"), num<Stage>(p, "stage"), num<std::size_t>(p, "maxTrees")};
    const unsigned k = 1 + static_cast<unsigned>(rng() % maxK);
    for (unsigned j = 0; j < k; ++j) c.phis.push_back(sample_predicate(rng));
    drv.push(std::move(c));
    ++attempts;
    if (drv.pending() >= 256) drv.flush(keep);
  }
  if (!drv.stopped()) drv.flush(keep);
  rep.summary = sink.summary();
  rep.summary["forests"] = found;
  if (found < want) rep.fail();
}

// ---- finseq and twoseq ----

struct ProbeCase {
  FinSetPredicate phi;
  Num universe = 10;
  Stage stage = 64;
  std::size_t maxTrees = 4;
};
Json probe_input(const ProbeCase& c) {
  return {{"phi", c.phi.ref()}, {"universe", c.universe}, {"stage", c.stage}, {"maxTrees", c.maxTrees}};
}
ProbeCase probe_case(const Json& in) {
  return {parse_predicate(in.at("phi").get<std::string>()), in.at("universe").get<Num>(),
          in.at("stage").get<Stage>(), in.at("maxTrees").get<std::size_t>()};
}

CaseResult eval_finseq(const ProbeCase& c) {
  CaseResult r;
  const FinSet u = interval(0, c.universe);
  auto out = finseq_probe(c.phi, {c.stage, c.universe - 1, c.maxTrees}, u);
  if (auto* e = std::get_if<Exhausted>(&out)) {
    r.fail({{"reason", "neither outcome: " + e->reason}});
    return r;
  }
  if (auto* t = std::get_if<TailEmpty>(&out)) {
    r.count("tail empty");
    FinSet above;
    for (Num x : u)
      if (static_cast<std::int64_t>(x) > t->z) above.push_back(x);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << above.size()); ++mask) {
      FinSet f;
      for (std::size_t i = 0; i < above.size(); ++i)
        if (mask >> i & 1) f.push_back(above[i]);
      if (c.phi.holds(f, c.stage)) {
        r.fail({{"reason", "certificate refuted"}, {"z", t->z}, {"set", format_str(f)}});
        return r;
      }
    }
    return r;
  }
  const auto& sf = std::get<SequenceFound>(out);
  r.count("sequence found");
  if (!sf.seq.ordered()) r.fail({{"reason", "trees out of order"}});
  for (std::size_t i = 0; i < sf.chosen.size() && r.pass; ++i) {
    const auto& f = sf.chosen[i];
    if (!c.phi.holds(f, c.stage)) r.fail({{"reason", "chosen set fails phi"}, {"index", i}});
    else if (!f.empty() && f.back() >= c.universe) r.fail({{"reason", "chosen set leaves universe"}});
    else if (i && !f.empty() && !sf.chosen[i - 1].empty() && sf.chosen[i - 1].back() >= f.front())
      r.fail({{"reason", "chosen sets overlap"}, {"index", i}});
  }
  for (std::size_t i = 0; i < sf.seq.trees.size() && r.pass; ++i)
    if (!is_phi_tree(sf.seq.trees[i], c.phi, c.stage).ok) r.fail({{"reason", "not a phi-tree"}, {"index", i}});
  return r;
}

void sweep_finseq(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "finseq", cfg, p);
  const Num top = num<Num>(p, "universe");
  if (top == 0 || top > 20) throw SpecError("finseq universe must lie in [1, 20]");
  Driver<ProbeCase> drv(sink, eval_finseq, probe_input);
  for (const auto& phi : predicate_family())
    for (Num u = 1; u <= top; ++u) drv.push({phi, u, num<Stage>(p, "stage"), num<std::size_t>(p, "maxTrees")});
  drv.flush();
  rep.summary = sink.summary();
}

struct TwoCase {
  FinSetPredicate phi, psi;
  Num universe = 14;
  Stage stage = 30;
  std::size_t maxTrees = 10, count = 3;
};
Json two_input(const TwoCase& c) {
  return {{"phi", c.phi.ref()}, {"psi", c.psi.ref()}, {"universe", c.universe}, {"stage", c.stage},
          {"maxTrees", c.maxTrees}, {"count", c.count}};
}
TwoCase two_case(const Json& in) {
  return {parse_predicate(in.at("phi").get<std::string>()), parse_predicate(in.at("psi").get<std::string>()),
          in.at("universe").get<Num>(), in.at("stage").get<Stage>(), in.at("maxTrees").get<std::size_t>(),
          in.at("count").get<std::size_t>()};
}

CaseResult eval_twoseq(const TwoCase& c) {
  CaseResult r;
  auto fs = finseq_probe(c.phi, {c.stage, c.universe - 1, c.maxTrees});
  if (!std::holds_alternative<SequenceFound>(fs)) {
    r.skipped = true;
    r.count("no phi-sequence");
    return r;
  }
  const auto& seq = std::get<SequenceFound>(fs).seq;
  auto out = build_psi_sequence(seq, c.psi, c.stage, c.count);
  if (auto* st = std::get_if<Stuck>(&out)) {
    r.skipped = true;
    r.count("ran out of phi-trees");
    r.detail = {{"stuckAt", st->index}};
    return r;
  }
  const auto& us = std::get<PhiSequence>(out);
  r.count("psi-sequences");
  if (us.trees.size() != c.count) r.fail({{"reason", "wrong length"}});
  if (!us.ordered()) r.fail({{"reason", "trees out of order"}});
  std::size_t s = 0;
  for (std::size_t n = 0; n < us.trees.size() && r.pass; ++n) {
    const auto& u = us.trees[n];
    const std::size_t h = u.height();
    if (s + h > seq.trees.size()) {
      r.fail({{"reason", "tree reads past the phi-sequence"}, {"index", n}});
      break;
    }
    std::vector<FiniteTree> tail(seq.trees.begin() + static_cast<long>(s),
                                 seq.trees.begin() + static_cast<long>(s + h));
    if (!(generated_subtree(tail, c.psi, c.stage, h) == u))
      r.fail({{"reason", "not the generated subtree"}, {"index", n}});
    else if (!is_phi_tree(u, c.psi, c.stage).ok)
      r.fail({{"reason", "not a psi-tree"}, {"index", n}});
    s += h;
  }
  return r;
}

void sweep_twoseq(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "twoseq", cfg, p);
  std::mt19937_64 rng(num<std::uint64_t>(p, "seed"));
  const std::string phi = p.at("phi"), psi = p.at("psi");
  Driver<TwoCase> drv(sink, eval_twoseq, two_input);
  auto make = [&](FinSetPredicate a, FinSetPredicate b) {
    return TwoCase{std::move(a), std::move(b), num<Num>(p, "universe"), num<Stage>(p, "stage"),
                   num<std::size_t>(p, "maxTrees"), num<std::size_t>(p, "count")};
  };
  if (!phi.empty() || !psi.empty()) {
    if (phi.empty() || psi.empty()) throw SpecError("twoseq needs both phi and psi, or neither");
    drv.push(make(parse_predicate(phi), parse_predicate(psi)));
  } else {
    for (std::size_t i = 0; i < num<std::size_t>(p, "samples"); ++i) {
      auto a = sample_predicate(rng);
      auto b = sample_predicate(rng);
      drv.push(make(std::move(a), std::move(b)));
    }
  }
  drv.flush();
  rep.summary = sink.summary();
}

// ---- nured ----

struct NuredCase {
  std::uint64_t tableId = 0;
  TableFunctional psi;
  unsigned k = 2;
  Num top = 16;
  Stage maxStage = 64;
  std::size_t minEach = 4;
  bool cyclic = true, random = true;
  std::uint64_t maxMaps = 1u << 16;
  std::uint64_t seed = 0;
};
Json nured_input(const NuredCase& c) {
  Json fills = Json::array();
  if (c.cyclic) fills.push_back("cyclic");
  if (c.random) fills.push_back("random");
  return {{"tableId", c.tableId}, {"table", serialize_table(c.psi)}, {"k", c.k}, {"universe", c.top},
          {"maxStage", c.maxStage}, {"minEach", c.minEach}, {"fills", fills}, {"maxMaps", c.maxMaps},
          {"seed", c.seed}};
}
void set_fills(const Json& fills, bool& cyclic, bool& random) {
  cyclic = random = false;
  for (const auto& f : fills) {
    if (f == "cyclic") cyclic = true;
    else if (f == "random") random = true;
    else throw SpecError("unknown fill: " + f.dump());
  }
}
NuredCase nured_case(const Json& in) {
  NuredCase c{in.at("tableId").get<std::uint64_t>(), parse_table(in.at("table").get<std::string>()),
              in.at("k").get<unsigned>(), in.at("universe").get<Num>(), in.at("maxStage").get<Stage>(),
              in.at("minEach").get<std::size_t>()};
  set_fills(in.at("fills"), c.cyclic, c.random);
  c.maxMaps = in.at("maxMaps").get<std::uint64_t>();
  c.seed = in.at("seed").get<std::uint64_t>();
  return c;
}

CaseResult eval_nured(const NuredCase& c) {
  CaseResult r;
  NuredBudget b;
  b.top = c.top;
  b.maxStage = c.maxStage;
  const auto run = nured_run(c.psi, c.k, b);
  r.count("runs");
  if (run.exhausted) {
    r.fail({{"reason", "budget exhausted: " + run.note}});
    return r;
  }
  if (run.final.n() < c.top + 1) r.violations.push_back("final condition too short");
  if (auto e = run.final.check_locks()) r.violations.push_back("final locks: " + *e);
  PCondition prev;
  for (const auto& st : run.stages) {
    if (!p_extends(st.before, prev)) r.violations.push_back("conditions not monotone");
    prev = st.before;
  }
  if (!p_extends(run.final, prev)) r.violations.push_back("final does not extend the last stage");
  std::mt19937_64 rng(c.seed);
  for (std::size_t si = 0; si < run.stages.size(); ++si) {
    const auto& st = run.stages[si];
    if (std::holds_alternative<Case1>(st.outcome)) r.count("case 1 exits");
    if (std::holds_alternative<Case2>(st.outcome)) r.count("case 2 exits");
    const auto* c3 = std::get_if<Case3>(&st.outcome);
    if (!c3) continue;
    r.count("case 3 stages");
    const Num floor = st.before.n();
    const FinSet range = c3->forest.range();
    std::uint64_t maps = 1;
    for (std::size_t i = 0; i < range.size() && maps <= c.maxMaps; ++i) maps *= c.k;
    if (maps > c.maxMaps) {
      r.fail({{"reason", "forest range too large to enumerate limit maps"}, {"stage", si}});
      return r;
    }
    for (std::uint64_t code = 0; code < maps; ++code) {
      std::vector<std::optional<unsigned>> fixed(c.top);
      std::uint64_t v = code;
      for (Num x : range) {
        fixed.at(x) = static_cast<unsigned>(v % c.k);
        v /= c.k;
      }
      for (int fill = 0; fill < 2; ++fill) {
        if ((fill == 0 && !c.cyclic) || (fill == 1 && !c.random)) continue;
        auto lim = complete_limits(fixed, c.k, c.minEach, fill == 0, rng);
        if (!lim) {
          r.count("inadmissible limit maps");
          continue;
        }
        auto d = stable_coloring(c.top, c.k, *lim, sample_thresholds(rng, c.top), rng);
        auto res = diagonal_check(*c3, floor, stability_cert(d), c.psi, c.maxStage);
        r.count("diagonal checks");
        std::string why = res.failure;
        if (why.empty() && c3->next.c(res.x0, res.x1) != 0) why = "pair not colored 0";
        if (why.empty() && c3->next.lock(res.x0).color != 1) why = "x0 not locked to 1";
        if (!why.empty()) {
          r.fail({{"reason", why}, {"stage", si}, {"limits", *lim}, {"coloring", serialize_pair(d)}});
          return r;
        }
      }
    }
  }
  return r;
}

TableSpace table_space(const Json& p, Num inputs) {
  TableSpace sp;
  sp.inputBound = inputs;
  sp.maxUse = num<Num>(p, "maxUse");
  sp.maxEntries = num<std::size_t>(p, "maxEntries");
  if (sp.maxUse > 16) throw SpecError("maxUse must be at most 16");
  return sp;
}

void sweep_nured(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "nured", cfg, p);
  std::mt19937_64 rng(num<std::uint64_t>(p, "seed"));
  const Num top = num<Num>(p, "universe");
  const auto stride = std::max<std::uint64_t>(1, num<std::uint64_t>(p, "stride"));
  const auto ks = k_list(p);
  NuredCase proto;
  proto.top = top;
  proto.maxStage = num<Stage>(p, "maxStage");
  proto.minEach = num<std::size_t>(p, "minEach");
  proto.maxMaps = num<std::uint64_t>(p, "maxMaps");
  set_fills(p.at("fills"), proto.cyclic, proto.random);
  Driver<NuredCase> drv(sink, eval_nured, nured_input);
  std::uint64_t tables = 0;
  for (unsigned k : ks) {
    if (static_cast<std::size_t>(k) * proto.minEach > top) throw SpecError("universe too small for the limit quota");
    for_each_table(table_space(p, top), [&](const TableFunctional& psi) {
      if (psi.id() % stride == 0) {
        NuredCase c = proto;
        c.tableId = psi.id();
        c.psi = psi;
        c.k = k;
        c.seed = rng();
        drv.push(std::move(c));
        ++tables;
      }
      return true;
    });
  }
  drv.flush();
  rep.summary = sink.summary();
}

// ---- coh ----

struct CohCase {
  std::uint64_t tableId = 0;
  TableFunctional psi;
  std::size_t dIndex = 0;
  std::shared_ptr<const PairColoring> d;
  std::shared_ptr<const StabilityCert> cert;
  unsigned k = 1;
  std::size_t theta = 3, maxTrees = 8;
  unsigned depth = 3;
};
Json coh_input(const CohCase& c) {
  return {{"tableId", c.tableId}, {"table", serialize_table(c.psi)}, {"coloringIndex", c.dIndex},
          {"coloring", serialize_pair(*c.d)}, {"k", c.k}, {"theta", c.theta}, {"maxTrees", c.maxTrees},
          {"depth", c.depth}};
}
CohCase coh_case(const Json& in) {
  CohCase c;
  c.tableId = in.at("tableId").get<std::uint64_t>();
  c.psi = parse_table(in.at("table").get<std::string>());
  c.dIndex = in.at("coloringIndex").get<std::size_t>();
  auto d = std::make_shared<PairColoring>(parse_pair(in.at("coloring").get<std::string>()));
  c.cert = std::make_shared<StabilityCert>(stability_cert(*d));
  c.d = d;
  c.k = in.at("k").get<unsigned>();
  c.theta = in.at("theta").get<std::size_t>();
  c.maxTrees = in.at("maxTrees").get<std::size_t>();
  c.depth = in.at("depth").get<unsigned>();
  return c;
}

void collect_violations(const CohRun& run, std::vector<std::string>& out, const std::string& where) {
  for (const auto& v : run.violations) out.push_back(where + v);
  for (std::size_t i = 0; i < run.children.size(); ++i)
    collect_violations(run.children[i], out, where + "child " + std::to_string(i) + ": ");
}

// Inputs that every oracle maps to 1: rows with no oracle constraint.
FinSet oracle_free_outputs(const TableFunctional& psi) {
  FinSet xs;
  for (const auto& e : psi.entries())
    if (e.domain == 0 && e.out == 1) xs.push_back(e.x);
  return to_set(xs);
}

CaseResult eval_coh(const CohCase& c) {
  CaseResult r;
  const Num n = c.d->bound();
  UnaryColoring e;
  CohRun run;
  if (c.k == 1) {
    CohConfig cfg;
    cfg.k = 1;
    cfg.C = {0, 1};
    cfg.C0 = {1};
    cfg.d = *c.d;
    cfg.seq = trivial_sequence(n + 1);
    cfg.psi = c.psi;
    run = coh_k1_run(cfg, n + 1);
    e = run.c;
  } else {
    auto er = build_e(c.k, *c.d, c.psi, {n + 1, c.maxTrees});
    e = er.e;
    run = std::move(er.run);
  }
  r.count("runs");
  r.count("events", run.events.size());
  collect_violations(run, r.violations, "");
  auto v = coh_diagonal_verify(e, *c.d, *c.cert, c.psi, {c.theta, 0});
  if (auto* pass = std::get_if<VerifyPass>(&v)) {
    r.count(pass->kind == VerifyPass::Small ? "pass small image" : "pass split image");
  } else {
    const auto& f = std::get<VerifyFail>(v);
    const FinSet fixed = oracle_free_outputs(c.psi);
    r.count(fixed.size() >= 2       ? "fail, fixed pair in image"
            : f.largestImage == 2 ? "fail, two-point images"
                                  : "fail, other");
    r.fail({{"reason", "no splitting or small H"}, {"trace", f.trace}, {"oracleFreeOutputs", format_str(fixed)},
            {"largestImage", f.largestImage}, {"coloring", serialize_unary(e)}});
  }
  return r;
}

void sweep_coh(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "coh", cfg, p);
  std::mt19937_64 rng(num<std::uint64_t>(p, "seed"));
  const Num n = num<Num>(p, "universe");
  const auto ks = k_list(p);
  if (ks.size() != 1) throw SpecError("coh sweeps take a single k");
  const unsigned k = ks[0];
  if (cfg.depth < k) throw SpecError("recursion depth below k");
  const unsigned colors = k == 1 ? 2 : k;
  const auto stride = std::max<std::uint64_t>(1, num<std::uint64_t>(p, "stride"));
  const auto offset = num<std::uint64_t>(p, "offset");
  std::vector<std::shared_ptr<const PairColoring>> ds;
  std::vector<std::shared_ptr<const StabilityCert>> certs;
  for (std::size_t i = 0; i < num<std::size_t>(p, "colorings"); ++i) {
    auto d = std::make_shared<PairColoring>(sample_stable_coloring(rng, n, colors, num<std::size_t>(p, "minEach")));
    certs.push_back(std::make_shared<StabilityCert>(stability_cert(*d)));
    ds.push_back(std::move(d));
  }
  Driver<CohCase> drv(sink, eval_coh, coh_input);
  for_each_table(table_space(p, n), [&](const TableFunctional& psi) {
    if (psi.id() % stride != offset % stride) return true;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CohCase c;
      c.tableId = psi.id();
      c.psi = psi;
      c.dIndex = i;
      c.d = ds[i];
      c.cert = certs[i];
      c.k = k;
      c.theta = num<std::size_t>(p, "theta");
      c.maxTrees = num<std::size_t>(p, "maxTrees");
      c.depth = cfg.depth;
      drv.push(std::move(c));
    }
    return true;
  });
  drv.flush();
  rep.summary = sink.summary();
}

// ---- ctree ----

struct TreeCase {
  TreeInstance in;
  std::size_t theta = 3;
};
Json tree_input(const TreeCase& c) {
  return {{"h", c.in.h}, {"table", serialize_table(c.in.psi)}, {"k", c.in.k}, {"reservoir", c.in.reservoir},
          {"maxDepth", c.in.maxDepth}, {"theta", c.theta}};
}
TreeCase tree_case(const Json& in) {
  TreeCase c;
  c.in.h = in.at("h").get<FinSet>();
  c.in.psi = parse_table(in.at("table").get<std::string>());
  c.in.k = in.at("k").get<Num>();
  c.in.reservoir = in.at("reservoir").get<FinSet>();
  c.in.maxDepth = in.at("maxDepth").get<std::size_t>();
  c.theta = in.at("theta").get<std::size_t>();
  return c;
}

CaseResult eval_ctree(const TreeCase& c) {
  CaseResult r;
  TreeSpec spec;
  spec.h = c.in.h;
  spec.psi = &c.in.psi;
  spec.k = c.in.k;
  spec.reservoir = c.in.reservoir;
  spec.maxDepth = c.in.maxDepth;
  try {
    const auto bt = build_witness_tree(spec);
    const auto lt = label_tree(bt, spec, c.theta);
    r.count("instances");
    r.count("tree nodes", bt.tree.size());
    for (const auto& a : bt.tree.nodes)
      if (!lt.labels.count(a)) {
        r.fail({{"reason", "label_tree left a node unlabeled"}, {"node", format_str(a)}});
        return r;
      }
    const auto t0 = extract_t0(lt, c.theta);
    r.count("t0 nodes", t0.tree.size());
    for (const auto& [node, kase] : t0.cases)
      if (kase == T0Result::Stuck) r.count("stuck nodes");
    auto errs = check_t0(lt, t0.tree, c.theta);
    if (!errs.empty()) r.fail({{"reason", "T0 structure"}, {"errors", errs}});
  } catch (const BudgetExhausted& e) {
    r.fail({{"reason", std::string("tree budget: ") + e.what()}});
  } catch (const UnlabelableTerminal& e) {
    r.fail({{"reason", std::string("unlabelable terminal: ") + e.what()}});
  }
  return r;
}

void sweep_ctree(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "ctree", cfg, p);
  std::mt19937_64 rng(num<std::uint64_t>(p, "seed"));
  const auto theta = num<std::size_t>(p, "theta");
  if (theta == 0) throw SpecError("theta must be positive");
  Driver<TreeCase> drv(sink, eval_ctree, tree_input);
  for (std::size_t i = 0; i < num<std::size_t>(p, "instances"); ++i) drv.push({sample_tree_instance(rng, theta), theta});
  drv.flush();
  rep.summary = sink.summary();
}

// ---- reduction ----

struct ReductionCase {
  std::string path;  // dataset file, or empty for an inclusion
  unsigned j = 0, k = 0;
  Num n = 8, minSize = 2;
};
Json reduction_input(const ReductionCase& c) {
  if (!c.path.empty()) return {{"dataset", c.path}};
  return {{"inclusion", {{"j", c.j}, {"k", c.k}, {"n", c.n}, {"minSize", c.minSize}}}};
}
ReductionCase reduction_case(const Json& in) {
  ReductionCase c;
  if (in.contains("dataset")) {
    c.path = in.at("dataset").get<std::string>();
    return c;
  }
  const Json& i = in.at("inclusion");
  c.j = i.at("j").get<unsigned>();
  c.k = i.at("k").get<unsigned>();
  c.n = i.at("n").get<Num>();
  c.minSize = i.at("minSize").get<Num>();
  return c;
}

Json outcome_json(const NotionOutcomes& o) {
  return {{"dataset", o.dataset}, {"su", o.su}, {"sc", o.sc}, {"u", o.u}, {"c", o.c}, {"notes", o.notes}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CaseResult eval_reduction(const ReductionCase& c) {
  CaseResult r;
  if (!c.path.empty()) {
    const auto o = evaluate_dataset(parse_dataset(read_file(c.path)));
    r.count("datasets");
    auto diag = relation_diagram({o});
    r.detail = {{"outcomes", outcome_json(o)}};
    if (!diag.violations.empty()) r.fail({{"outcomes", outcome_json(o)}, {"broken", diag.violations}});
    return r;
  }
  const auto o = evaluate_dataset(rt1_inclusion(c.j, c.k, c.n, c.minSize));
  r.count("inclusions");
  r.detail = {{"outcomes", outcome_json(o)}};
  auto diag = relation_diagram({o});
  if (!o.su || !diag.violations.empty())
    r.fail({{"reason", o.su ? "implication broken" : "inclusion is not a strong uniform reduction"},
            {"outcomes", outcome_json(o)}, {"broken", diag.violations}});
  return r;
}

void sweep_reduction(const Json& p, Report& rep, const RunConfig& cfg) {
  Sink sink(rep, "reduction", cfg, p);
  std::vector<ReductionCase> cases;
  for (const auto& entry : p.at("datasets")) {
    const std::filesystem::path path = entry.get<std::string>();
    if (std::filesystem::is_directory(path)) {
      std::vector<std::string> files;
      for (const auto& f : std::filesystem::directory_iterator(path))
        if (f.path().extension() == ".txt") files.push_back(f.path().string());
      std::sort(files.begin(), files.end());
      for (auto& f : files) cases.push_back({f});
    } else {
      cases.push_back({path.string()});
    }
  }
  const Json& inc = p.at("inclusion");
  if (!inc.is_null()) {
    const auto maxK = inc.at("maxK").get<unsigned>();
    if (maxK > 4) throw SpecError("inclusion maxK must be at most 4");
    for (unsigned k = 2; k <= maxK; ++k)
      for (unsigned j = 1; j < k; ++j) cases.push_back({"", j, k, inc.at("n").get<Num>(), inc.at("minSize").get<Num>()});
  }
  Json rows = Json::array();
  for (const auto& c : cases) {
    auto res = eval_reduction(c);
    rows.push_back(res.detail.at("outcomes"));
    sink.add(res, [&] { return reduction_input(c); });
  }
  rep.summary = sink.summary();
  rep.details["outcomes"] = rows;
}

using SweepFn = void (*)(const Json&, Report&, const RunConfig&);
const std::map<std::string, SweepFn>& sweep_table() {
  static const std::map<std::string, SweepFn> t = {
      {"combcore", sweep_combcore}, {"forest", sweep_forest}, {"finseq", sweep_finseq},
      {"twoseq", sweep_twoseq},     {"nured", sweep_nured},   {"coh", sweep_coh},
      {"ctree", sweep_ctree},       {"reduction", sweep_reduction},
  };
  return t;
}

CaseResult replay_eval(const std::string& kind, const Json& in) {
  if (kind == "combcore") return eval_combcore(search_case(in));
  if (kind == "forest") return eval_forest(search_case(in));
  if (kind == "finseq") return eval_finseq(probe_case(in));
  if (kind == "twoseq") return eval_twoseq(two_case(in));
  if (kind == "nured") return eval_nured(nured_case(in));
  if (kind == "coh") return eval_coh(coh_case(in));
  if (kind == "ctree") return eval_ctree(tree_case(in));
  if (kind == "reduction") return eval_reduction(reduction_case(in));
  throw SpecError("unknown case kind: " + kind);
}

Report run_one(const Json& spec, const RunConfig& cfg) {
  Report rep;
  rep.command = "sweep " + spec.value("kind", std::string());
  const Json p = effective_params(spec, cfg);
  rep.config = cfg.to_json();
  rep.details["spec"] = Json{{"kind", spec["kind"]}};
  rep.details["spec"].update(p);
  sweep_table().at(spec["kind"])(p, rep, cfg);
  return rep;
}

}  // namespace

Json sweep_defaults(const std::string& kind) {
  auto it = defaults_table().find(kind);
  if (it == defaults_table().end()) throw SpecError("unknown sweep kind: " + kind);
  return it->second;
}

Report run_sweep(const Json& spec, const RunConfig& cfg) {
  if (auto e = cfg.validate()) throw SpecError(*e);
  try {
    if (!spec.is_object() || !spec.contains("sweeps")) return run_one(spec, cfg);
    if (!spec["sweeps"].is_array()) throw SpecError("\"sweeps\" must be an array");
    for (const auto& [key, v] : spec.items())
      if (key != "sweeps" && key != "name") throw SpecError("unknown top-level key: " + key);
    Report all;
    all.command = "sweep " + spec.value("name", std::string("suite"));
    all.config = cfg.to_json();
    Json parts = Json::array();
    for (const auto& s : spec["sweeps"]) {
      Report r = run_one(s, cfg);
      Json part{{"command", r.command}, {"verdict", verdict_name(r.verdict)}, {"spec", r.details["spec"]},
                {"summary", r.summary}};
      if (r.details.contains("outcomes")) part["outcomes"] = r.details["outcomes"];
      parts.push_back(std::move(part));
      for (auto& c : r.cases) all.cases.push_back(std::move(c));
      for (auto& v : r.violations) all.violate(std::move(v));
      for (auto& a : r.artifacts) all.artifacts.push_back(std::move(a));
      if (r.verdict == Verdict::Fail) all.fail();
    }
    all.details["sweeps"] = parts;
    all.summary = Json{{"sweeps", parts.size()}};
    return all;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed sweep spec: ") + e.what());
  }
}

Report replay_case(const Json& artifact) {
  Report rep;
  rep.command = "replay";
  try {
    if (artifact.value("format", std::string()) != "ramsey-case") throw SpecError("not a case artifact");
    if (artifact.value("version", 0) != kReportVersion)
      throw SpecError("unsupported artifact version " + artifact.value("version", Json()).dump());
    const std::string kind = artifact.at("kind");
    const Json fresh = result_json(replay_eval(kind, artifact.at("input")));
    Json recorded{{"verdict", artifact.at("verdict")}};
    if (artifact.contains("detail")) recorded["detail"] = artifact["detail"];
    if (artifact.contains("violations")) recorded["violations"] = artifact["violations"];
    const bool same = fresh == recorded;
    rep.summary = {{"kind", kind}, {"index", artifact.value("index", Json())},
                   {"recorded", artifact.at("verdict")}, {"replayed", fresh.at("verdict")}, {"reproduced", same}};
    rep.details["replayed"] = fresh;
    if (!same) rep.fail();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed case artifact: ") + e.what());
  }
  return rep;
}

}  // namespace ramsey
