#include "icue/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace icue {

namespace {

using FlowMatrix = std::vector<std::vector<double>>;

LoadVector compute_loads(const GameSpec& game, const StrategySets& sets, const FlowMatrix& x) {
  LoadVector loads(game.network().edge_count(), 0.0);
  for (std::size_t t = 0; t < sets.size(); ++t) {
    for (std::size_t p = 0; p < sets[t].paths.size(); ++p) {
      if (x[t][p] == 0.0) continue;
      for (EdgeId e : sets[t].paths[p].edges) loads[e.value] += x[t][p];
    }
  }
  return loads;
}

double cost_at(const GameSpec& game, EdgeId e, double load) {
  return game.cost(e)(std::max(0.0, load));
}

double slope_at(const GameSpec& game, EdgeId e, double load) {
  return game.cost(e).derivative(std::max(0.0, load));
}

std::vector<double> path_costs(const GameSpec& game, const std::vector<Path>& paths,
                               const LoadVector& loads) {
  std::vector<double> c;
  c.reserve(paths.size());
  for (const auto& p : paths) c.push_back(strategy_cost(game, p, loads));
  return c;
}

// Lowest index wins ties, which is the lexicographic order of the paths.
std::size_t cheapest(const std::vector<double>& costs) {
  return static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());
}

// Root in [0, hi] of a nondecreasing function g with g(0) < 0, or hi when g
// stays nonpositive. Safeguarded Newton on a shrinking bracket.
template <class G, class DG>
double nondecreasing_root(G&& g, DG&& dg, double hi) {
  if (g(hi) <= 0.0) return hi;
  double lo = 0.0;
  double t = 0.5 * hi;
  for (int it = 0; it < 200; ++it) {
    const double v = g(t);
    if (v == 0.0) return t;
    if (v < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 1e-16 * (1.0 + hi)) break;
    const double d = dg(t);
    double next = d > 0.0 ? t - v / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return 0.5 * (lo + hi);
}

std::vector<EdgeId> minus(const Path& a, const Path& b) {
  std::vector<EdgeId> out;
  for (EdgeId e : a.edges) {
    if (std::find(b.edges.begin(), b.edges.end(), e) == b.edges.end()) out.push_back(e);
  }
  return out;
}

// Moves the potential-minimizing amount (at most x[from]) of flow from path
// `from` to path `to` of the same type and updates loads in place.
void shift_flow(const GameSpec& game, const std::vector<Path>& paths, std::vector<double>& x,
                LoadVector& loads, std::size_t from, std::size_t to) {
  const auto gaining = minus(paths[to], paths[from]);
  const auto losing = minus(paths[from], paths[to]);
  auto g = [&](double d) {
    double v = 0.0;
    for (EdgeId e : gaining) v += cost_at(game, e, loads[e.value] + d);
    for (EdgeId e : losing) v -= cost_at(game, e, loads[e.value] - d);
    return v;
  };
  auto dg = [&](double d) {
    double v = 0.0;
    for (EdgeId e : gaining) v += slope_at(game, e, loads[e.value] + d);
    for (EdgeId e : losing) v += slope_at(game, e, loads[e.value] - d);
    return v;
  };
  const double amount = nondecreasing_root(g, dg, x[from]);
  if (amount <= 0.0) return;
  for (EdgeId e : gaining) loads[e.value] += amount;
  for (EdgeId e : losing) loads[e.value] = std::max(0.0, loads[e.value] - amount);
  x[from] = amount >= x[from] ? 0.0 : x[from] - amount;
  x[to] += amount;
}

double internal_max_gap(const GameSpec& game, const StrategySets& sets, const FlowMatrix& x,
                        const LoadVector& loads) {
  double worst = 0.0;
  for (std::size_t t = 0; t < sets.size(); ++t) {
    if (sets[t].paths.size() < 2) continue;
    const auto c = path_costs(game, sets[t].paths, loads);
    const double lo = *std::min_element(c.begin(), c.end());
    for (std::size_t p = 0; p < c.size(); ++p) {
      if (x[t][p] > 0.0) worst = std::max(worst, (c[p] - lo) / (1.0 + lo));
    }
  }
  return worst;
}

// Sequential all-or-nothing loading in type order.
FlowMatrix initial_flows(const GameSpec& game, const StrategySets& sets) {
  FlowMatrix x(sets.size());
  LoadVector loads(game.network().edge_count(), 0.0);
  for (std::size_t t = 0; t < sets.size(); ++t) {
    x[t].assign(sets[t].paths.size(), 0.0);
    const double d = game.types()[t].demand;
    if (d <= 0.0 || sets[t].paths.empty()) continue;
    const std::size_t best = cheapest(path_costs(game, sets[t].paths, loads));
    x[t][best] = d;
    for (EdgeId e : sets[t].paths[best].edges) loads[e.value] += d;
  }
  return x;
}

Outcome to_outcome(const StrategySets& sets, const FlowMatrix& x) {
  Outcome out;
  for (std::size_t t = 0; t < sets.size(); ++t) {
    std::vector<PathFlow> flows;
    for (std::size_t p = 0; p < sets[t].paths.size(); ++p) {
      flows.push_back({sets[t].paths[p], x[t][p]});
    }
    out.by_type.push_back(std::move(flows));
  }
  return out;
}

bool non_unique_loads(const GameSpec& game, const StrategySets& sets) {
  for (std::size_t t = 0; t < sets.size(); ++t) {
    if (game.types()[t].demand <= 0.0) continue;
    for (const auto& p : sets[t].paths) {
      for (EdgeId e : p.edges) {
        if (!game.cost(e).strictly_increasing()) return true;
      }
    }
  }
  return false;
}

void check_sets(const GameSpec& game, const StrategySets& sets) {
  if (sets.size() != game.types().size()) {
    throw std::invalid_argument("strategy sets do not match the game's types");
  }
  for (std::size_t t = 0; t < sets.size(); ++t) {
    if (game.types()[t].demand > 0.0 && sets[t].empty()) {
      throw std::invalid_argument(fmt::format("type {} has positive demand but no strategy",
                                              to_string(game.types()[t].key())));
    }
  }
}

EquilibriumResult finalize(const GameSpec& game, const StrategySets& sets, const FlowMatrix& x,
                           std::size_t iterations, double tolerance,
                           std::vector<double> trace) {
  EquilibriumResult r;
  r.outcome = to_outcome(sets, x);
  r.loads = compute_loads(game, sets, x);
  r.gaps = equilibrium_gap(game, r.outcome);
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    r.type_costs.push_back(type_cost(game, t, r.outcome, r.loads).cost);
  }
  r.social_cost = social_cost(game, r.outcome);
  r.iterations = iterations;
  r.converged = r.max_relative_gap() <= tolerance;
  r.loads_possibly_non_unique = non_unique_loads(game, sets);
  r.potential_trace = std::move(trace);
  return r;
}

EquilibriumResult run_path_equilibration(const GameSpec& game, const StrategySets& sets,
                                         const SolverOptions& options) {
  FlowMatrix x = initial_flows(game, sets);
  LoadVector loads = compute_loads(game, sets, x);
  std::vector<double> trace{beckmann_potential(game, loads)};
  std::size_t it = 0;
  double gap = internal_max_gap(game, sets, x, loads);
  while (gap > options.tolerance && it < options.max_iterations) {
    ++it;
    for (std::size_t t = 0; t < sets.size(); ++t) {
      const auto& paths = sets[t].paths;
      if (game.types()[t].demand <= 0.0 || paths.size() < 2) continue;
      const std::size_t best = cheapest(path_costs(game, paths, loads));
      for (std::size_t p = 0; p < paths.size(); ++p) {
        if (p == best || x[t][p] <= 0.0) continue;
        const double cp = strategy_cost(game, paths[p], loads);
        const double cb = strategy_cost(game, paths[best], loads);
        if (cp > cb) shift_flow(game, paths, x[t], loads, p, best);
      }
    }
    loads = compute_loads(game, sets, x);
    trace.push_back(beckmann_potential(game, loads));
    gap = internal_max_gap(game, sets, x, loads);
  }
  return finalize(game, sets, x, it, options.tolerance, std::move(trace));
}

EquilibriumResult run_conditional_gradient(const GameSpec& game, const StrategySets& sets,
                                           const SolverOptions& options) {
  FlowMatrix x = initial_flows(game, sets);
  LoadVector loads = compute_loads(game, sets, x);
  std::vector<double> trace{beckmann_potential(game, loads)};
  std::size_t it = 0;
  while (internal_max_gap(game, sets, x, loads) > options.tolerance &&
         it < options.max_iterations) {
    FlowMatrix target(sets.size());
    for (std::size_t t = 0; t < sets.size(); ++t) {
      target[t].assign(sets[t].paths.size(), 0.0);
      const double d = game.types()[t].demand;
      if (d <= 0.0 || sets[t].paths.empty()) continue;
      target[t][cheapest(path_costs(game, sets[t].paths, loads))] = d;
    }
    const LoadVector target_loads = compute_loads(game, sets, target);
    LoadVector delta(loads.size());
    for (std::size_t e = 0; e < loads.size(); ++e) delta[e] = target_loads[e] - loads[e];
    auto h = [&](double s) {
      double v = 0.0;
      for (std::size_t e = 0; e < delta.size(); ++e) {
        if (delta[e] != 0.0) {
          v += cost_at(game, EdgeId{static_cast<std::uint32_t>(e)}, loads[e] + s * delta[e]) *
               delta[e];
        }
      }
      return v;
    };
    auto dh = [&](double s) {
      double v = 0.0;
      for (std::size_t e = 0; e < delta.size(); ++e) {
        if (delta[e] != 0.0) {
          v += slope_at(game, EdgeId{static_cast<std::uint32_t>(e)}, loads[e] + s * delta[e]) *
               delta[e] * delta[e];
        }
      }
      return v;
    };
    const double optimum = h(0.0) < 0.0 ? nondecreasing_root(h, dh, 1.0) : 0.0;
    const double step = std::min(2.0 / static_cast<double>(it + 2), optimum);
    ++it;
    if (step <= 0.0) break;
    for (std::size_t t = 0; t < x.size(); ++t) {
      for (std::size_t p = 0; p < x[t].size(); ++p) {
        x[t][p] = std::max(0.0, x[t][p] + step * (target[t][p] - x[t][p]));
      }
    }
    loads = compute_loads(game, sets, x);
    trace.push_back(beckmann_potential(game, loads));
  }
  return finalize(game, sets, x, it, options.tolerance, std::move(trace));
}

std::size_t binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(r));
}

void compositions(std::size_t total, std::size_t parts, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(static_cast<int>(total));
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t v = 0; v <= total; ++v) {
    cur.push_back(static_cast<int>(v));
    compositions(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

void SolverOptions::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("solver max iterations must be >= 1");
  if (!(big_m > 0.0) || !std::isfinite(big_m)) throw std::invalid_argument("big-M must be > 0");
  if (grid_resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
}

double EquilibriumResult::max_relative_gap() const {
  double g = 0.0;
  for (const auto& tg : gaps) g = std::max(g, tg.relative);
  return g;
}

std::vector<TypeGap> equilibrium_gap(const GameSpec& game, const Outcome& outcome,
                                     double feasibility_tolerance) {
  const double infeasible = feasibility_error(game, outcome);
  if (infeasible > feasibility_tolerance) {
    throw std::invalid_argument(
        fmt::format("infeasible outcome: flows miss demand by {}", infeasible));
  }
  const LoadVector loads = edge_loads(game, outcome);
  std::vector<TypeGap> gaps;
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    const StrategySet set = build_strategy_set(game, t);
    TypeGap g;
    bool any_used = false;
    for (const auto& pf : outcome.by_type[t]) {
      if (pf.flow <= 0.0) continue;
      any_used = true;
      if (std::find(set.paths.begin(), set.paths.end(), pf.path) == set.paths.end()) {
        throw std::invalid_argument(
            fmt::format("type {} uses a path outside its strategy set: {}",
                        to_string(game.types()[t].key()), to_string(game.network(), pf.path)));
      }
    }
    if (any_used) {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& p : set.paths) lo = std::min(lo, strategy_cost(game, p, loads));
      for (const auto& pf : outcome.by_type[t]) {
        if (pf.flow <= 0.0) continue;
        g.absolute = std::max(g.absolute, strategy_cost(game, pf.path, loads) - lo);
      }
      g.relative = g.absolute / (1.0 + lo);
    }
    gaps.push_back(g);
  }
  return gaps;
}

double beckmann_potential(const GameSpec& game, const LoadVector& loads) {
  double v = 0.0;
  for (std::size_t e = 0; e < loads.size(); ++e) {
    if (loads[e] > 0.0) v += game.cost(EdgeId{static_cast<std::uint32_t>(e)}).integral(loads[e]);
  }
  return v;
}

double beckmann_potential(const GameSpec& game, const Outcome& outcome) {
  return beckmann_potential(game, edge_loads(game, outcome));
}

EquilibriumResult solve_icue(const GameSpec& game, const SolverOptions& options) {
  options.validate();
  return solve_icue(game, build_strategy_sets(game, options.path_cap), options);
}

EquilibriumResult solve_icue(const GameSpec& game, const StrategySets& sets,
                             const SolverOptions& options) {
  options.validate();
  check_sets(game, sets);
  switch (options.method) {
    case SolverMethod::conditional_gradient:
      return run_conditional_gradient(game, sets, options);
    case SolverMethod::path_equilibration:
      break;
  }
  return run_path_equilibration(game, sets, options);
}

EquilibriumResult brute_force_icue(const GameSpec& game, const SolverOptions& options) {
  options.validate();
  const StrategySets sets = build_strategy_sets(game, options.path_cap);
  check_sets(game, sets);
  std::size_t total_paths = 0;
  for (const auto& s : sets) total_paths += s.paths.size();
  if (total_paths > options.oracle_path_limit) {
    throw OracleGuardExceeded(fmt::format("brute-force oracle guard: {} paths exceed limit {}",
                                          total_paths, options.oracle_path_limit));
  }

  FlowMatrix x(sets.size());
  std::vector<std::size_t> free_types;
  for (std::size_t t = 0; t < sets.size(); ++t) {
    x[t].assign(sets[t].paths.size(), 0.0);
    const double d = game.types()[t].demand;
    if (d <= 0.0) continue;
    if (sets[t].paths.size() == 1) {
      x[t][0] = d;
    } else {
      free_types.push_back(t);
    }
  }

  std::size_t evaluations = 0;
  auto potential = [&](const FlowMatrix& flows) {
    ++evaluations;
    return beckmann_potential(game, compute_loads(game, sets, flows));
  };

  // Grid: shrink the resolution until the product of simplex grids is small.
  constexpr double kGridBudget = 2e5;
  std::size_t res = options.grid_resolution;
  for (; res > 1; --res) {
    double points = 1.0;
    for (std::size_t t : free_types) points *= static_cast<double>(binomial(res + sets[t].paths.size() - 1, sets[t].paths.size() - 1));
    if (points <= kGridBudget) break;
  }
  std::vector<std::vector<std::vector<int>>> grids;
  for (std::size_t t : free_types) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(res, sets[t].paths.size(), cur, comps);
    grids.push_back(std::move(comps));
  }
  FlowMatrix best = x;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> odo(free_types.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < free_types.size(); ++i) {
      const std::size_t t = free_types[i];
      const double d = game.types()[t].demand;
      for (std::size_t p = 0; p < x[t].size(); ++p) {
        x[t][p] = d * grids[i][odo[i]][p] / static_cast<double>(res);
      }
    }
    const double v = potential(x);
    if (v < best_value) {
      best_value = v;
      best = x;
    }
    std::size_t i = 0;
    while (i < odo.size() && ++odo[i] == grids[i].size()) odo[i++] = 0;
    if (i == odo.size()) break;
  }

  // Pattern search with pairwise transfers inside each type.
  auto refine = [&](FlowMatrix flows) {
    double value = potential(flows);
    for (double h = 1.0 / static_cast<double>(res); h > 1e-13; h *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t t : free_types) {
          const double d = game.types()[t].demand;
          for (std::size_t p = 0; p < flows[t].size(); ++p) {
            for (std::size_t q = 0; q < flows[t].size(); ++q) {
              if (p == q) continue;
              const double amount = std::min(h * d, flows[t][p]);
              if (amount <= 0.0) continue;
              const double keep_p = flows[t][p];
              const double keep_q = flows[t][q];
              flows[t][p] = amount >= keep_p ? 0.0 : keep_p - amount;
              flows[t][q] = keep_q + amount;
              const double v = potential(flows);
              if (v < value) {
                value = v;
                improved = true;
              } else {
                flows[t][p] = keep_p;
                flows[t][q] = keep_q;
              }
            }
          }
        }
      }
    }
    return std::pair{flows, value};
  };

  auto [refined, refined_value] = refine(best);
  std::mt19937_64 rng(options.seed);
  std::exponential_distribution<double> expo(1.0);
  for (int restart = 0; restart < 2 && !free_types.empty(); ++restart) {
    FlowMatrix start = best;
    for (std::size_t t : free_types) {
      double sum = 0.0;
      for (auto& v : start[t]) sum += (v = expo(rng));
      for (auto& v : start[t]) v *= game.types()[t].demand / sum;
    }
    auto [cand, cand_value] = refine(start);
    if (cand_value < refined_value) {
      refined = std::move(cand);
      refined_value = cand_value;
    }
  }
  return finalize(game, sets, refined, evaluations, options.tolerance, {refined_value});
}

std::vector<Outcome> best_response_trace(const GameSpec& game, const Outcome& start,
                                         std::size_t rounds, double shift_fraction) {
  if (shift_fraction < 0.0 || shift_fraction > 1.0) {
    throw std::invalid_argument("shift fraction must lie in [0, 1]");
  }
  if (start.by_type.size() != game.types().size()) {
    throw std::invalid_argument("outcome does not match the game's types");
  }
  const StrategySets sets = build_strategy_sets(game);
  std::vector<Outcome> trace{start};
  for (std::size_t r = 0; r < rounds; ++r) {
    Outcome next = trace.back();
    const LoadVector loads = edge_loads(game, trace.back());
    for (std::size_t t = 0; t < sets.size(); ++t) {
      auto& flows = next.by_type[t];
      if (sets[t].empty()) continue;
      const auto costs = path_costs(game, sets[t].paths, loads);
      const Path& target = sets[t].paths[cheapest(costs)];
      const double target_cost = costs[cheapest(costs)];
      std::size_t worst = flows.size();
      double worst_cost = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < flows.size(); ++i) {
        if (flows[i].flow <= 0.0) continue;
        const double c = strategy_cost(game, flows[i].path, loads);
        if (c > worst_cost) {
          worst_cost = c;
          worst = i;
        }
      }
      if (worst == flows.size() || !(worst_cost > target_cost)) continue;
      const double moved = shift_fraction * flows[worst].flow;
      if (moved <= 0.0) continue;
      flows[worst].flow -= moved;
      auto it = std::find_if(flows.begin(), flows.end(),
                             [&](const PathFlow& pf) { return pf.path == target; });
      if (it == flows.end()) {
        flows.push_back({target, moved});
      } else {
        it->flow += moved;
      }
    }
    trace.push_back(std::move(next));
  }
  return trace;
}

}  // namespace icue
