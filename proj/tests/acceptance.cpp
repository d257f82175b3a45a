// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "icue/families.hpp"
#include "icue/scenarios.hpp"
#include "icue/topology.hpp"
#include "support.hpp"

using namespace icue;

namespace {

constexpr double kGoldenTolerance = 1e-6;
constexpr double kGoldenSeconds = 1.0;
constexpr double kPropertySeconds = 300.0;
constexpr double kOracleLoadTolerance = 1e-3;
constexpr std::uint64_t kSeed = 20240607;

struct Run {
  int exit_code = -1;
  std::string out;
  double seconds = 0.0;
};

Run run_cli(const std::string& args) {
  const auto start = std::chrono::steady_clock::now();
  Run r;
  FILE* pipe = popen(fmt::format("\"{}\" {} 2>/dev/null", ICUE_CLI_PATH, args).c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::map<std::string, std::string> fields(const std::string& out) {
  std::map<std::string, std::string> m;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos) m.emplace(line.substr(0, colon), line.substr(colon + 2));
  }
  return m;
}

double number(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? std::nan("") : std::stod(it->second);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct Check {
  bool pass = false;
  std::string detail;
};

Check braess_golden() {
  const Run r = run_cli("scenario wheatstone_bp --run");
  const auto f = fields(r.out);
  const double before = number(f, "social_cost_before");
  const double after = number(f, "social_cost_after");
  const bool pass = std::abs(before - 1.5) <= kGoldenTolerance &&
                    std::abs(after - 2.0) <= kGoldenTolerance && r.seconds < kGoldenSeconds &&
                    r.exit_code == 2;
  return {pass, fmt::format("SC {:.9g} -> {:.9g}, exit {}, {:.3f}s", before, after, r.exit_code, r.seconds)};
}

Check ibpsc_golden() {
  const Run r = run_cli("scenario pigou_ibpsc --run");
  auto f = fields(r.out);
  const double before = number(f, "social_cost_before");
  const double after = number(f, "social_cost_after");
  const double own_before = number(f, "target_cost_before");
  const double own_after = number(f, "target_cost_after");
  const bool pass = std::abs(before - 3.0) <= kGoldenTolerance &&
                    std::abs(after - 4.0) <= kGoldenTolerance && f["kind"] == "IBPSC" &&
                    f["occurred"] == "true" && f["companion_IBP_occurred"] == "false" &&
                    own_after <= own_before + kGoldenTolerance && r.seconds < kGoldenSeconds;
  return {pass, fmt::format("SC {:.9g} -> {:.9g}, expanded type {:.9g} -> {:.9g}, IBP occurred {}, {:.3f}s",
                            before, after, own_before, own_after, f["companion_IBP_occurred"], r.seconds)};
}

Check circuit_immunity() {
  const auto start = std::chrono::steady_clock::now();
  const FamilySpec family = builtin_family("circuit");
  const SearchReport report = search_paradox(family, ParadoxKind::ibp, 1000, kSeed);
  std::size_t certified = 0;
  for (const auto& w : report.witnesses) certified += w.verdict.confidence == Confidence::certified;
  const double s = seconds_since(start);
  const bool pass = certified == 0 && report.skipped == 0 && report.withheld == 0 && s < kPropertySeconds;
  return {pass, fmt::format("{} games, {} certified IBP, {} witness-dependent, {} withheld, {:.2f}s",
                            report.sampled, certified, report.witnesses.size() - certified,
                            report.withheld, s)};
}

Check not_all_worse() {
  const auto start = std::chrono::steady_clock::now();
  const FamilySpec family = builtin_family("circuit");
  std::size_t held = 0, total = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto inst = sample_instance(family, ParadoxKind::ibp, kSeed, i);
    if (!inst) continue;
    ++total;
    held += check_not_all_worse(inst->game, *inst->expansion).holds;
  }
  const double s = seconds_since(start);
  return {held == total && total == 1000 && s < kPropertySeconds,
          fmt::format("{}/{} games keep some type no worse off, {:.2f}s", held, total, s)};
}

Check sli_consistency() {
  const auto start = std::chrono::steady_clock::now();
  const FamilySpec sli = builtin_family("sli");
  std::size_t not_sli = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto inst = sample_instance(sli, ParadoxKind::ibp, kSeed, i);
    const Population& pop = inst->game.populations()[0];
    if (!is_sli(inst->game.network(), pop.origin, pop.destination).sli) ++not_sli;
  }
  const SearchReport sli_report = search_paradox(sli, ParadoxKind::ibp, 200, kSeed);

  const Network wheat = builtin_scenario("wheatstone_ibp").instance.game.network();
  const bool wheat_sli = is_sli(wheat, wheat.node("O"), wheat.node("D")).sli;
  const bool wheat_li = is_li(wheat, wheat.node("O"), wheat.node("D")).li;
  const SearchReport wheat_report = search_paradox(builtin_family("wheatstone"), ParadoxKind::ibp, 500, kSeed);
  const double s = seconds_since(start);
  const bool pass = not_sli == 0 && sli_report.skipped == 0 && sli_report.withheld == 0 &&
                    sli_report.witnesses.empty() && !wheat_sli && !wheat_li &&
                    !wheat_report.witnesses.empty();
  return {pass, fmt::format("SLI: {} IBP in {} games ({} not SLI); Wheatstone SLI {}, {} IBP witnesses "
                            "in 500 samples (first at sample {}), {:.2f}s",
                            sli_report.witnesses.size(), sli_report.sampled, not_sli, wheat_sli,
                            wheat_report.witnesses.size(),
                            wheat_report.witnesses.empty() ? -1 : long(wheat_report.witnesses[0].sample), s)};
}

double load_diff(const LoadVector& a, const LoadVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Check oracle_equivalence() {
  double worst = 0.0;
  std::size_t games = 0;
  std::string worst_game;
  auto compare = [&](const GameSpec& g, const std::string& label) {
    const double d = load_diff(solve_icue(g).loads, brute_force_icue(g).loads);
    ++games;
    if (d > worst) {
      worst = d;
      worst_game = label;
    }
  };
  for (const auto& id : scenario_ids()) {
    const Scenario sc = builtin_scenario(id);
    compare(sc.instance.game, id);
    if (sc.instance.modified) compare(*sc.instance.modified, id + " (modified)");
    if (sc.instance.expansion) {
      compare(expand_information(sc.instance.game, *sc.instance.expansion).game, id + " (expanded)");
    }
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    compare(testing_support::random_game(kSeed + seed), fmt::format("random {}", seed));
  }
  return {worst <= kOracleLoadTolerance,
          fmt::format("{} games, worst per-edge load difference {:.3g}{}", games, worst,
                      worst_game.empty() ? "" : " (" + worst_game + ")")};
}

Check classifier_goldens() {
  const Network wheat = builtin_scenario("wheatstone_bp").instance.game.network();
  const Network pigou = builtin_scenario("pigou_ibpsc").instance.game.network();
  const GameSpec ring4 = builtin_scenario("two_pop_ring").instance.game;
  Network tree;
  for (const char* n : {"r", "a", "b", "c"}) tree.add_node(n);
  tree.add_edge("ra", "r", "a");
  tree.add_edge("ab", "a", "b");
  tree.add_edge("ac", "a", "c");

  std::vector<std::pair<std::string, bool>> checks{
      {"Wheatstone LI false", !is_li(wheat, wheat.node("O"), wheat.node("D")).li},
      {"Wheatstone SLI false", !is_sli(wheat, wheat.node("O"), wheat.node("D")).sli},
      {"Pigou simple false", !is_simple(pigou)},
      {"Pigou embedding true", has_pigou_embedding(pigou, pigou.node("O"), pigou.node("D"))},
      {"four-edge ring ring true", is_ring(ring4.network())},
      {"four-edge ring circuit game true", is_circuit_game(ring4).circuit_game},
      {"tree embedding false", is_tree(tree) && !has_pigou_embedding(tree, tree.node("r"), tree.node("b"))},
  };
  std::string failed;
  for (const auto& [name, ok] : checks) {
    if (!ok) failed += (failed.empty() ? "" : ", ") + name;
  }
  return {failed.empty(), failed.empty() ? fmt::format("{} goldens hold", checks.size()) : "failed: " + failed};
}

Check determinism() {
  const std::vector<std::string> invocations{
      "search --family pigou --kind IBPSC --seed 11 --budget 150 --threads 1",
      "search --family wheatstone --kind IBP --seed 11 --budget 150 --threads 3",
      "search --family circuit --kind BP --seed 11 --budget 150 --threads 2",
      "search --family topology:stadium_ring --kind IBPSC --seed 11 --budget 20 --threads 2",
  };
  std::size_t identical = 0, rows = 0;
  for (const auto& args : invocations) {
    const Run a = run_cli(args);
    const Run b = run_cli(args);
    if (a.exit_code >= 0 && a.exit_code != 1 && a.out == b.out && !a.out.empty()) ++identical;
    rows += std::count(a.out.begin(), a.out.end(), '\n');
  }
  return {identical == invocations.size(),
          fmt::format("{}/{} invocations byte-identical across reruns ({} CSV lines)", identical,
                      invocations.size(), rows)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"Braess golden", braess_golden},
      {"IBPSC golden", ibpsc_golden},
      {"circuit games immune to IBP", circuit_immunity},
      {"not every type worse off", not_all_worse},
      {"SLI consistency", sli_consistency},
      {"oracle equivalence", oracle_equivalence},
      {"classifier goldens", classifier_goldens},
      {"search determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    fmt::print("criterion {}: {} {}: {}\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
