#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "ramsey/sweep.hpp"

using namespace ramsey;

namespace {

Json small_suite() {
  return Json::parse(R"({"name": "small", "sweeps": [
    {"kind": "combcore", "k": [2], "universe": 8, "samples": 20},
    {"kind": "nured", "k": [2], "maxEntries": 1},
    {"kind": "coh", "k": 1, "maxEntries": 1, "colorings": 2},
    {"kind": "ctree", "instances": 20}
  ]})");
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RAMSEY_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("run config validation") {
  RunConfig c;
  CHECK_FALSE(c.validate());
  c.theta = 0;
  CHECK(c.validate());
  c = RunConfig{};
  c.formatVersion = kReportVersion + 1;
  REQUIRE(c.validate());
  CHECK(c.validate()->find("not supported") != std::string::npos);
}

TEST_CASE("structured report starts with format and version") {
  Report r;
  r.command = "x";
  r.violate("broken");
  const Json j = Json::parse(render_structured(r));
  auto it = j.begin();
  CHECK(it.key() == "format");
  CHECK(j["version"] == kReportVersion);
  CHECK(j["verdict"] == "violation");
  CHECK(render_text(r).find("violation: broken") != std::string::npos);
}

TEST_CASE("parallel_map keeps order and rethrows the first failure") {
  auto sq = parallel_map<int>(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<int>(i * i));
  try {
    parallel_map<int>(50, 3, [](std::size_t i) -> int {
      if (i % 7 == 3) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "3");
  }
}

TEST_CASE("malformed sweep specs are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(run_sweep(Json{{"kind", "nope"}}, cfg), SpecError);
  CHECK_THROWS_AS(run_sweep(Json{{"kind", "forest"}, {"cuont", 3}}, cfg), SpecError);
  CHECK_THROWS_AS(run_sweep(Json{{"sweeps", Json::array()}, {"extra", 1}}, cfg), SpecError);
  CHECK(sweep_defaults("nured").contains("maxEntries"));
}

TEST_CASE("suite report does not depend on the worker count") {
  RunConfig cfg;
  const std::string one = render_structured(run_sweep(small_suite(), cfg));
  setenv("RAMSEY_WORKERS", "3", 1);
  const std::string three = render_structured(run_sweep(small_suite(), cfg));
  unsetenv("RAMSEY_WORKERS");
  CHECK(one == three);
  CHECK(Json::parse(one)["verdict"] == "pass");
}

TEST_CASE("listed cases replay to the same result") {
  RunConfig cfg;
  Json spec = Json::parse(R"({"kind": "ctree", "instances": 6, "listCases": true})");
  const Report r = run_sweep(spec, cfg);
  REQUIRE(r.cases.size() == 6);
  for (const auto& c : r.cases) {
    Json art = c;
    art["format"] = "ramsey-case";
    art["version"] = kReportVersion;
    const Report back = replay_case(art);
    CHECK(back.summary["reproduced"] == true);
    CHECK(back.verdict == Verdict::Pass);
    art["verdict"] = "fail";
    CHECK(replay_case(art).verdict == Verdict::Fail);
  }
  Json bad = r.cases[0];
  bad["format"] = "ramsey-case";
  bad["version"] = kReportVersion + 1;
  CHECK_THROWS_AS(replay_case(bad), SpecError);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("emit digits --k 2 --e 3 9") == 0);
  CHECK(run_cli("emit digits --k 2 --bogus") == 2);
  CHECK(run_cli("check reduction --dataset /nonexistent/file.txt") == 4);
  CHECK(run_cli("--format structured check reduction --dataset " RAMSEY_DATA_DIR "/reductions/identity.txt") == 0);
  CHECK(run_cli("emit digits --k 1 --e 5") == 4);
}
