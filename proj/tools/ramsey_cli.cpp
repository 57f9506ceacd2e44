// Command-line front end: verify, simulate, check, emit, sweep, replay.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ramsey/commands.hpp"
#include "ramsey/forcing_p.hpp"
#include "ramsey/sweep.hpp"

using namespace ramsey;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kViolation = 3, kBadInput = 4 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
}

struct Global {
  std::string format = "text";
  std::string report;
  RunConfig cfg;
};

int emit(const Report& r, const Global& g) {
  const std::string out = g.format == "structured" ? render_structured(r) : render_text(r);
  if (g.report.empty()) {
    std::cout << out;
  } else {
    std::ofstream f(g.report);
    if (!f) throw SpecError("cannot write " + g.report);
    f << out;
  }
  if (r.verdict == Verdict::Violation) {
    // State dumps go to stderr as well, so they survive a redirected report.
    std::cerr << "invariant violation\n";
    for (const auto& v : r.violations) std::cerr << "  " << v << "\n";
    if (r.details.contains("state")) std::cerr << r.details["state"].dump(2) << "\n";
    return kViolation;
  }
  return r.verdict == Verdict::Pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale checks for Ramsey-type reductions"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--report", g.report, "Write the report to this file instead of stdout");
  app.add_option("--seed", g.cfg.seed, "Seed for sampled sweeps");
  app.add_option("--theta", g.cfg.theta, "Finite stand-in for infinitely many");
  app.add_option("--depth", g.cfg.depth, "Recursion depth for nested runs");
  app.add_option("--stage-limit", g.cfg.stageLimit, "Evaluation stage bound");
  app.add_option("--out", g.cfg.outputDir, "Directory for counterexample artifacts");

  // verify: each target is a sweep with flags mapped onto spec keys.
  auto* verify = app.add_subcommand("verify", "Property checks over generated inputs");
  verify->require_subcommand(1);
  Json vspec;
  std::vector<unsigned> vk;
  Num vuniverse = 0;
  std::size_t vsamples = 0, vcount = 0;
  Stage vstage = 0;
  std::string vphi, vpsi;
  for (const char* name : {"combcore", "forest", "finseq", "twoseq"}) {
    auto* sc = verify->add_subcommand(name);
    const std::string kind = name;
    if (kind == "combcore") sc->add_option("--k", vk, "Numbers of levels");
    sc->add_option("--universe", vuniverse, "Points available to the search");
    sc->add_option("--stage", vstage, "Evaluation stage");
    if (kind == "combcore" || kind == "twoseq") sc->add_option("--samples", vsamples, "Sampled predicate tuples");
    if (kind == "forest" || kind == "twoseq") sc->add_option("--count", vcount, "Forests to check, or trees per sequence");
    if (kind == "twoseq") {
      sc->add_option("--phi", vphi, "Predicate, e.g. card_ge(2)");
      sc->add_option("--psi", vpsi, "Predicate for the derived sequence");
    }
    sc->callback([&, kind, sc] {
      auto given = [sc](const char* flag) {
        const auto* o = sc->get_option_no_throw(flag);
        return o && o->count() > 0;
      };
      vspec = Json{{"kind", kind}};
      if (given("--k")) vspec["k"] = vk;
      if (given("--universe")) vspec["universe"] = vuniverse;
      if (given("--stage")) vspec["stage"] = vstage;
      if (given("--samples")) vspec["samples"] = vsamples;
      if (given("--count")) vspec["count"] = vcount;
      if (given("--phi")) vspec["phi"] = vphi;
      if (given("--psi")) vspec["psi"] = vpsi;
    });
  }

  auto* simulate = app.add_subcommand("simulate", "Run one construction");
  simulate->require_subcommand(1);
  unsigned sk = 2;
  Num suniverse = 16;
  std::string spsi, sd, sphi;
  std::size_t sstages = 17;
  auto* nured = simulate->add_subcommand("nured", "Stage machine against one functional");
  nured->add_option("--k", sk, "Colors")->check(CLI::Range(1, 4));
  nured->add_option("--universe", suniverse, "Coloring lives on [0, universe]");
  nured->add_option("--psi", spsi, "Table file")->required();
  nured->add_option("--d", sd, "Optional total coloring for the diagonal check");
  auto* coh = simulate->add_subcommand("coh", "Cohesive-set machine and its verification");
  coh->add_option("--k", sk, "Colors of the assembled coloring")->check(CLI::Range(1, 4));
  coh->add_option("--universe", suniverse, "Must match the coloring's bound");
  coh->add_option("--psi", spsi, "Table file")->required();
  coh->add_option("--d", sd, "Pair coloring file")->required();
  coh->add_option("--stages", sstages, "Stages to run (default: bound + 1)");
  auto* nscred = simulate->add_subcommand("nscred", "Requirement ledger over a fixed schedule");
  nscred->add_option("--stages", sstages, "Stages to run");
  nscred->add_option("--universe", suniverse, "Points of the construction");
  nscred->add_option("--phi", sphi, "Pair functionals, blocks separated by ---")->required();
  nscred->add_option("--psi", spsi, "Table functionals, blocks separated by ---")->required();

  auto* check = app.add_subcommand("check", "Decide a reduction notion at finite scale");
  check->require_subcommand(1);
  auto* reduction = check->add_subcommand("reduction");
  std::string rq, rp, rmode = "u", rphi, rpsi, rdataset;
  reduction->add_option("--q", rq, "Problem reduced");
  reduction->add_option("--p", rp, "Problem reduced to");
  reduction->add_option("--mode", rmode, "Notion")->check(CLI::IsMember({"u", "su", "c", "sc"}));
  reduction->add_option("--phi", rphi, "Instance map table");
  reduction->add_option("--psi", rpsi, "Solution map table");
  reduction->add_option("--dataset", rdataset, "Dataset file (replaces the other flags)");

  auto* emitc = app.add_subcommand("emit", "Write derived artifacts");
  emitc->require_subcommand(1);
  auto* digits = emitc->add_subcommand("digits", "Digit family of a unary coloring");
  unsigned ek = 2;
  std::string ecoloring;
  std::vector<std::uint64_t> evalues;
  digits->add_option("--k", ek, "Colors; digits cover #(k)")->check(CLI::Range(0, 4));
  auto* ecol = digits->add_option("--coloring", ecoloring, "Unary coloring file");
  digits->add_option("--e", evalues, "Values e(0), e(1), ... given inline")->excludes(ecol);

  auto* sweep = app.add_subcommand("sweep", "Run a sweep spec file");
  std::string sweepFile;
  sweep->add_option("file", sweepFile)->required();
  auto* replay = app.add_subcommand("replay", "Re-run a counterexample artifact");
  std::string replayFile;
  replay->add_option("file", replayFile)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (auto e = g.cfg.validate()) throw SpecError(*e);
    if (verify->parsed()) return emit(run_sweep(vspec, g.cfg), g);
    if (sweep->parsed()) return emit(run_sweep(read_json(sweepFile), g.cfg), g);
    if (replay->parsed()) return emit(replay_case(read_json(replayFile)), g);
    if (nured->parsed()) {
      g.cfg.universeBound = suniverse;
      std::optional<PairColoring> d;
      if (!sd.empty()) d = parse_pair(slurp(sd));
      return emit(simulate_nured(parse_table(slurp(spsi)), sk, d, g.cfg), g);
    }
    if (coh->parsed()) {
      const auto d = parse_pair(slurp(sd));
      if (coh->count("--universe") && d.bound() != suniverse) throw SpecError("coloring bound differs from --universe");
      g.cfg.universeBound = d.bound();
      const Stage stages = coh->count("--stages") ? sstages : d.bound() + 1;
      return emit(simulate_coh(parse_table(slurp(spsi)), d, sk, stages, g.cfg), g);
    }
    if (nscred->parsed()) {
      g.cfg.universeBound = suniverse;
      std::vector<ColumnPairFunctional> phis;
      std::vector<TableFunctional> psis;
      for (const auto& b : split_blocks(slurp(sphi))) phis.push_back(parse_pair_functional(b));
      for (const auto& b : split_blocks(slurp(spsi))) psis.push_back(parse_table(b));
      return emit(simulate_nscred(phis, psis, sstages, g.cfg), g);
    }
    if (reduction->parsed()) {
      if (!rdataset.empty()) return emit(check_dataset(parse_dataset(slurp(rdataset))), g);
      if (rq.empty() || rp.empty() || rphi.empty() || rpsi.empty())
        throw SpecError("check reduction needs --dataset, or all of --q --p --phi --psi");
      return emit(check_reduction(parse_problem(slurp(rq)), parse_problem(slurp(rp)), parse_table(slurp(rphi)),
                                  parse_table(slurp(rpsi)), parse_mode(rmode)),
                  g);
    }
    if (digits->parsed()) {
      UnaryColoring e;
      if (!ecoloring.empty()) {
        e = parse_unary(slurp(ecoloring));
      } else if (!evalues.empty()) {
        e.m = static_cast<unsigned>(hash_count(ek));
        for (auto v : evalues) {
          if (v >= e.m) throw SpecError("value " + std::to_string(v) + " is not below #(k)");
          e.values.push_back(static_cast<unsigned>(v));
        }
      } else {
        throw SpecError("emit digits needs --coloring or --e");
      }
      return emit(emit_digits(e, ek), g);
    }
  } catch (const SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
