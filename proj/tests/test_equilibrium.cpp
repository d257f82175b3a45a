#include <doctest.h>

#include <cmath>

#include "icue/equilibrium.hpp"
#include "icue/scenarios.hpp"
#include "support.hpp"

using namespace icue;

namespace {

GameSpec braess_before() { return builtin_scenario("wheatstone_bp").instance.game; }
GameSpec braess_after() { return *builtin_scenario("wheatstone_bp").instance.modified; }

Path named_path(const Network& net, std::initializer_list<const char*> edges) {
  Path p;
  for (const char* e : edges) p.edges.push_back(net.edge_id(e));
  return p;
}

double max_load_diff(const LoadVector& a, const LoadVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("equilibrium gap on the Braess network") {
  const GameSpec g = braess_before();
  const Network& net = g.network();
  const Outcome split{{{{named_path(net, {"O1", "1D"}), 0.5}, {named_path(net, {"O2", "2D"}), 0.5}}}};
  CHECK(equilibrium_gap(g, split)[0].absolute == doctest::Approx(0.0).epsilon(1e-12));
  const Outcome upper{{{{named_path(net, {"O1", "1D"}), 1.0}}}};
  const auto gap = equilibrium_gap(g, upper);
  CHECK(gap[0].absolute == doctest::Approx(1.0));
  CHECK(gap[0].relative == doctest::Approx(0.5));

  const Outcome short_flow{{{{named_path(net, {"O1", "1D"}), 0.4}}}};
  CHECK_THROWS_AS(equilibrium_gap(g, short_flow), std::invalid_argument);
  const Outcome outside{{{{Path{{net.edge_id("O1"), net.edge_id("2D")}}, 1.0}}}};
  CHECK_THROWS_AS(equilibrium_gap(g, outside), std::invalid_argument);
}

TEST_CASE("zero-demand game has zero gap") {
  GameSpec g = braess_before();
  auto types = g.types();
  types[0].demand = 0.0;
  g = g.with_types(types);
  const EquilibriumResult r = solve_icue(g);
  CHECK(r.converged);
  CHECK(r.gaps[0].absolute == 0.0);
  CHECK(r.social_cost == 0.0);
}

TEST_CASE("Beckmann potential closed form") {
  Network net;
  net.add_node("O");
  net.add_node("D");
  net.add_edge("e", "O", "D");
  const GameSpec single(net, {{1, net.node("O"), net.node("D"), net.all_edges()}},
                        {{1, 1, net.all_edges(), 1.0}}, {CostFunction::linear(1.0)});
  CHECK(beckmann_potential(single, LoadVector{1.0}) == doctest::Approx(0.5));
  CHECK(beckmann_potential(single, LoadVector{0.0}) == 0.0);

  const GameSpec g = braess_before();
  const LoadVector half{0.5, 0.5, 0.5, 0.5, 0.0};
  CHECK(beckmann_potential(g, half) == doctest::Approx(1.25));
  CHECK(beckmann_potential(g, half) ==
        doctest::Approx(testing_support::simpson_potential(g, half)).epsilon(1e-10));
}

TEST_CASE("potential agrees with quadrature on random games and loads") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const GameSpec g = testing_support::random_game(seed);
    LoadVector loads(g.network().edge_count());
    for (double& l : loads) l = u(rng);
    CHECK(beckmann_potential(g, loads) ==
          doctest::Approx(testing_support::simpson_potential(g, loads)).epsilon(1e-9));
  }
}

TEST_CASE("Braess network before and after the cross edge") {
  const EquilibriumResult before = solve_icue(braess_before());
  CHECK(before.converged);
  CHECK(before.social_cost == doctest::Approx(1.5).epsilon(1e-9));
  const LoadVector expect_before{0.5, 0.5, 0.5, 0.5, 0.0};
  CHECK(max_load_diff(before.loads, expect_before) < 1e-6);
  CHECK(before.loads_possibly_non_unique);

  const GameSpec after_game = braess_after();
  const EquilibriumResult after = solve_icue(after_game);
  CHECK(after.converged);
  CHECK(after.social_cost == doctest::Approx(2.0).epsilon(1e-9));
  const LoadVector expect_after{1.0, 0.0, 0.0, 1.0, 1.0};
  CHECK(max_load_diff(after.loads, expect_after) < 1e-6);
}

TEST_CASE("Pigou with a restricted type") {
  const GameSpec g = builtin_scenario("pigou_ibpsc").instance.game;
  const EquilibriumResult r = solve_icue(g);
  CHECK(r.converged);
  CHECK(r.type_costs[0] == doctest::Approx(2.0));
  CHECK(r.type_costs[1] == doctest::Approx(1.0));
  CHECK(r.social_cost == doctest::Approx(3.0));
}

TEST_CASE("two-population ring splits symmetrically") {
  const GameSpec g = builtin_scenario("two_pop_ring").instance.game;
  const EquilibriumResult r = solve_icue(g);
  CHECK(r.converged);
  for (double l : r.loads) CHECK(l == doctest::Approx(1.5).epsilon(1e-7));
  const EquilibriumResult oracle = brute_force_icue(g);
  CHECK(max_load_diff(r.loads, oracle.loads) < 1e-3);
  CHECK(oracle.loads[0] == doctest::Approx(oracle.loads[2]).epsilon(1e-3));
  CHECK(oracle.loads[1] == doctest::Approx(oracle.loads[3]).epsilon(1e-3));
}

TEST_CASE("one strategy per type gives the unique feasible point") {
  Network net;
  for (const char* n : {"a", "b", "c"}) net.add_node(n);
  net.add_edge("ab", "a", "b");
  net.add_edge("bc", "b", "c");
  const GameSpec g(net,
                   {{1, net.node("a"), net.node("c"), net.all_edges()},
                    {2, net.node("a"), net.node("b"), {net.edge_id("ab")}}},
                   {{1, 1, net.all_edges(), 0.7}, {2, 1, {net.edge_id("ab")}, 0.4}},
                   {CostFunction::linear(1.0), CostFunction::polynomial({0.0, 0.0, 1.0})});
  const EquilibriumResult r = solve_icue(g);
  const EquilibriumResult oracle = brute_force_icue(g);
  CHECK(r.loads[0] == doctest::Approx(1.1));
  CHECK(r.loads[1] == doctest::Approx(0.7));
  CHECK(max_load_diff(r.loads, oracle.loads) < 1e-12);
}

TEST_CASE("oracle guard") {
  Network net;
  net.add_node("O");
  net.add_node("D");
  for (int i = 0; i < 13; ++i) net.add_edge("p" + std::to_string(i), "O", "D");
  const GameSpec g(net, {{1, net.node("O"), net.node("D"), net.all_edges()}},
                   {{1, 1, net.all_edges(), 1.0}},
                   std::vector<CostFunction>(13, CostFunction::linear(1.0)));
  CHECK_THROWS_AS(brute_force_icue(g), OracleGuardExceeded);
  CHECK(solve_icue(g).converged);
}

TEST_CASE("solver agrees with mirror-descent dynamics on random games") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const GameSpec g = testing_support::random_game(seed);
    CAPTURE(seed);
    const EquilibriumResult r = solve_icue(g);
    REQUIRE(r.converged);
    const auto oracle = testing_support::mirror_descent(g, 40000, 0.1);
    CHECK(max_load_diff(r.loads, oracle.loads) < 1e-3);
    for (std::size_t t = 0; t < r.type_costs.size(); ++t) {
      CHECK(r.type_costs[t] == doctest::Approx(oracle.type_costs[t]).epsilon(1e-4));
    }
  }
}

TEST_CASE("certificates, potential descent and cost identity") {
  for (const SolverMethod method : {SolverMethod::path_equilibration, SolverMethod::conditional_gradient}) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const GameSpec g = testing_support::random_game(seed, {6, 9, 3, 2, true, 40});
      SolverOptions opt;
      opt.method = method;
      opt.max_iterations = method == SolverMethod::conditional_gradient ? 20000 : 10000;
      const EquilibriumResult r = solve_icue(g, opt);
      CAPTURE(seed);
      CAPTURE(int(method));
      if (method == SolverMethod::path_equilibration) REQUIRE(r.converged);
      if (!r.converged) continue;

      const auto gaps = equilibrium_gap(g, r.outcome);
      for (const auto& gap : gaps) CHECK(gap.relative <= opt.tolerance);
      const LoadVector loads = edge_loads(g, r.outcome);
      CHECK(max_load_diff(loads, r.loads) < 1e-12);
      CHECK(r.social_cost == doctest::Approx(social_cost(g, r.outcome)).epsilon(1e-12));

      for (std::size_t k = 1; k < r.potential_trace.size(); ++k) {
        CHECK(r.potential_trace[k] <= r.potential_trace[k - 1] + 1e-12);
      }
      for (std::size_t t = 0; t < g.types().size(); ++t) {
        const TypeCost c = type_cost(g, t, r.outcome);
        CHECK(c.spread <= opt.tolerance * (1.0 + c.cost) + 1e-12);
      }
    }
  }
}

TEST_CASE("non-convergence is reported, never silent") {
  SolverOptions opt;
  opt.max_iterations = 1;
  opt.method = SolverMethod::conditional_gradient;
  const EquilibriumResult r = solve_icue(builtin_scenario("two_pop_ring").instance.game, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.max_relative_gap() > opt.tolerance);

  SolverOptions bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("best-response trace") {
  const GameSpec after = braess_after();
  const Network& net = after.network();
  const Outcome half{{{{named_path(net, {"O1", "1D"}), 0.5}, {named_path(net, {"O2", "2D"}), 0.5}}}};

  SUBCASE("shift fraction zero keeps the start") {
    const auto trace = best_response_trace(after, half, 5, 0.0);
    REQUIRE(trace.size() == 6);
    for (const auto& x : trace) CHECK(edge_loads(after, x) == edge_loads(after, half));
  }
  SUBCASE("flow migrates to the zigzag path") {
    const auto trace = best_response_trace(after, half, 30, 0.5);
    const double first = edge_loads(after, trace.front())[net.edge_id("12").value];
    const double last = edge_loads(after, trace.back())[net.edge_id("12").value];
    CHECK(first == 0.0);
    CHECK(last > 0.5);
  }
  SUBCASE("an equilibrium start stays put") {
    const GameSpec before = braess_before();
    const auto trace = best_response_trace(before, half, 5, 0.5);
    for (const auto& x : trace) {
      const LoadVector l = edge_loads(before, x);
      for (std::size_t e = 0; e < 4; ++e) CHECK(l[e] == doctest::Approx(0.5));
    }
  }
}
