#include "ramsey/report.hpp"

#include <cstdlib>
#include <sstream>

namespace ramsey {

std::optional<std::string> RunConfig::validate() const {
  if (universeBound == 0) return "universe bound must be positive";
  if (stageLimit == 0) return "stage limit must be positive";
  if (theta == 0) return "theta must be positive";
  if (depth == 0) return "recursion depth must be positive";
  if (formatVersion != kReportVersion)
    return "format version " + std::to_string(formatVersion) + " is not supported (expected " +
           std::to_string(kReportVersion) + ")";
  return std::nullopt;
}

Json RunConfig::to_json() const {
  return {{"universeBound", universeBound}, {"stageLimit", stageLimit}, {"theta", theta},
          {"depth", depth},                 {"seed", seed},             {"formatVersion", formatVersion}};
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Violation: return "violation";
  }
  return "?";
}

Json Report::to_json() const {
  Json j{{"format", "ramsey-report"}, {"version", kReportVersion}, {"command", command},
         {"verdict", verdict_name(verdict)}, {"config", config}, {"summary", summary}};
  if (!details.empty()) j["details"] = details;
  j["cases"] = cases;
  j["violations"] = violations;
  j["artifacts"] = artifacts;
  return j;
}

std::string render_structured(const Report& r) { return r.to_json().dump(2) + "\n"; }

namespace {

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_string()) {
    out << "  " << prefix << ": " << j.get<std::string>() << "\n";
  } else {
    out << "  " << prefix << ": " << j.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << r.command << ": " << verdict_name(r.verdict) << " (report v" << kReportVersion << ")\n";
  flatten(r.summary, "", out);
  if (r.details.contains("text")) out << r.details["text"].get<std::string>();
  if (r.details.contains("sweeps"))
    for (const auto& s : r.details["sweeps"]) {
      out << s["command"].get<std::string>() << ": " << s["verdict"].get<std::string>() << "\n";
      flatten(s["summary"], "", out);
    }
  for (const auto& c : r.cases) {
    if (c.value("verdict", "") == "pass" || c.value("verdict", "") == "skipped") continue;
    out << "case " << c.value("kind", "") << " #" << c.value("index", Json()).dump() << ": "
        << c.value("verdict", "") << "\n";
    if (c.contains("detail")) out << "  " << c["detail"].dump() << "\n";
  }
  for (const auto& v : r.violations) out << "violation: " << v << "\n";
  for (const auto& a : r.artifacts) out << "artifact: " << a << "\n";
  return out.str();
}

std::size_t worker_count() {
  const char* env = std::getenv("RAMSEY_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<std::size_t>(std::min(v, 64L));
}

}  // namespace ramsey
