#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ramsey/fincomb.hpp"

namespace ramsey {

using Json = nlohmann::ordered_json;

/// Schema version stamped on every report and case artifact.
inline constexpr int kReportVersion = 1;

struct RunConfig {
  Num universeBound = 16;
  Stage stageLimit = 64;
  std::size_t theta = 3;
  unsigned depth = 3;  // recursion depth for nested runs
  std::uint64_t seed = 1;
  std::string outputDir;  // empty = no artifacts written
  int formatVersion = kReportVersion;

  std::optional<std::string> validate() const;
  Json to_json() const;
};

enum class Verdict { Pass, Fail, Violation };
std::string verdict_name(Verdict v);

struct Report {
  std::string command;
  Json config = Json::object();
  Json summary = Json::object();
  Json cases = Json::array();  // per-case verdicts (all, or failures only)
  Json details = Json::object();  // command-specific payload
  std::vector<std::string> violations;  // internal invariant failures
  std::vector<std::string> artifacts;   // counterexample files written
  Verdict verdict = Verdict::Pass;

  void fail() {
    if (verdict == Verdict::Pass) verdict = Verdict::Fail;
  }
  void violate(std::string what) {
    violations.push_back(std::move(what));
    verdict = Verdict::Violation;
  }
  Json to_json() const;
};

/// Pretty JSON with a fixed key order.
std::string render_structured(const Report& r);
/// Human summary: header, summary fields, non-passing cases, violations.
std::string render_text(const Report& r);

/// RAMSEY_WORKERS, clamped to [1, 64]; 1 when unset or malformed.
std::size_t worker_count();

/// out[i] = fn(i), spread over `workers` threads. Order of results never
/// depends on the worker count. The first exception (lowest index) is
/// rethrown after every worker stops.
template <class R>
std::vector<R> parallel_map(std::size_t n, std::size_t workers, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace ramsey
