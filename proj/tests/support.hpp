#pragma once
// Reference computations used only by the tests. None of them call into the
// library's path enumeration, cost evaluation or solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "icue/game.hpp"

namespace testing_support {

using icue::CostFunction;
using icue::EdgeId;
using icue::EdgeSet;
using icue::GameSpec;
using icue::Network;
using icue::NodeId;

using EdgeList = std::vector<std::uint32_t>;  // sorted edge indices

// Every subset of `allowed` whose edges form one simple origin-destination
// path: endpoints have degree one, inner nodes degree two, all connected.
inline std::set<EdgeList> subset_paths(const Network& net, NodeId o, NodeId d,
                                       const EdgeSet& allowed) {
  std::vector<std::uint32_t> edges;
  for (EdgeId e : allowed) edges.push_back(e.value);
  std::set<EdgeList> out;
  const std::size_t m = edges.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::map<std::uint32_t, int> degree;
    std::vector<std::uint32_t> parent(net.node_count());
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    EdgeList chosen;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1)) continue;
      const auto& e = net.edge(EdgeId{edges[i]});
      ++degree[e.a.value];
      ++degree[e.b.value];
      parent[find(e.a.value)] = find(e.b.value);
      chosen.push_back(edges[i]);
    }
    bool ok = degree[o.value] == 1 && degree[d.value] == 1;
    for (const auto& [node, deg] : degree) {
      if (node != o.value && node != d.value && deg != 2) ok = false;
      if (find(node) != find(o.value)) ok = false;
    }
    if (ok) out.insert(chosen);
  }
  return out;
}

inline double cost_at(const CostFunction& c, double x) {
  if (c.is_big_m()) return c.big_m_value();
  double s = 0.0;
  for (std::size_t i = 0; i < c.coefficients().size(); ++i) s += c.coefficients()[i] * std::pow(x, double(i));
  return s;
}

// Composite Simpson rule for the integral of c over [0, x].
inline double simpson_integral(const CostFunction& c, double x, int intervals = 2000) {
  if (x <= 0.0) return 0.0;
  const double h = x / intervals;
  double s = cost_at(c, 0.0) + cost_at(c, x);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * cost_at(c, i * h);
  return s * h / 3.0;
}

inline double simpson_potential(const GameSpec& g, const std::vector<double>& loads) {
  double s = 0.0;
  for (std::size_t e = 0; e < loads.size(); ++e) s += simpson_integral(g.costs()[e], loads[e]);
  return s;
}

inline EdgeSet intersect(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// Strategy sets built from subset_paths on known ∩ relevant edges.
inline std::vector<std::vector<EdgeList>> oracle_strategies(const GameSpec& g) {
  std::vector<std::vector<EdgeList>> out;
  for (const auto& t : g.types()) {
    const auto& pop = g.population_of(t);
    const auto s = subset_paths(g.network(), pop.origin, pop.destination,
                                intersect(t.known_edges, pop.relevant_edges));
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

struct OracleEquilibrium {
  std::vector<double> loads;
  std::vector<double> type_costs;  // cheapest strategy cost per type
  double social_cost = 0.0;
};

inline double potential_closed_form(const GameSpec& g, const std::vector<double>& loads) {
  double s = 0.0;
  for (std::size_t e = 0; e < loads.size(); ++e) {
    const CostFunction& c = g.costs()[e];
    if (c.is_big_m()) {
      s += c.big_m_value() * loads[e];
      continue;
    }
    for (std::size_t i = 0; i < c.coefficients().size(); ++i)
      s += c.coefficients()[i] * std::pow(loads[e], double(i + 1)) / double(i + 1);
  }
  return s;
}

// Exponentiated-gradient dynamics on per-type path flows with a step that
// grows after each potential decrease and halves after an increase. Slow but
// simple, and unrelated to the library's solvers.
inline OracleEquilibrium mirror_descent(const GameSpec& g, int iterations = 200000,
                                        double step = 0.05) {
  const auto strategies = oracle_strategies(g);
  const std::size_t ne = g.network().edge_count();
  std::vector<std::vector<double>> x(strategies.size());
  for (std::size_t t = 0; t < strategies.size(); ++t) {
    x[t].assign(strategies[t].size(), g.types()[t].demand / double(strategies[t].size()));
  }
  auto loads_of = [&](const std::vector<std::vector<double>>& flows) {
    std::vector<double> l(ne, 0.0);
    for (std::size_t t = 0; t < flows.size(); ++t)
      for (std::size_t p = 0; p < flows[t].size(); ++p)
        for (auto e : strategies[t][p]) l[e] += flows[t][p];
    return l;
  };
  auto path_cost = [&](const EdgeList& p, const std::vector<double>& l) {
    double c = 0.0;
    for (auto e : p) c += cost_at(g.costs()[e], l[e]);
    return c;
  };
  std::vector<double> l = loads_of(x);
  double phi = potential_closed_form(g, l);
  for (int it = 0; it < iterations; ++it) {
    auto y = x;
    for (std::size_t t = 0; t < y.size(); ++t) {
      const double demand = g.types()[t].demand;
      if (demand <= 0.0 || y[t].size() < 2) continue;
      std::vector<double> c(y[t].size());
      for (std::size_t p = 0; p < c.size(); ++p) c[p] = path_cost(strategies[t][p], l);
      const double cmin = *std::min_element(c.begin(), c.end());
      double total = 0.0;
      for (std::size_t p = 0; p < c.size(); ++p) {
        y[t][p] = std::max(y[t][p] * std::exp(-step * (c[p] - cmin)), 1e-300);
        total += y[t][p];
      }
      for (double& v : y[t]) v *= demand / total;
    }
    const auto ly = loads_of(y);
    const double phi_y = potential_closed_form(g, ly);
    if (phi_y <= phi) {
      x = std::move(y);
      l = ly;
      phi = phi_y;
      step = std::min(step * 1.5, 1e6);
    } else {
      step *= 0.5;
    }
  }
  OracleEquilibrium out;
  out.loads = l;
  for (std::size_t t = 0; t < x.size(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : strategies[t]) best = std::min(best, path_cost(p, out.loads));
    out.type_costs.push_back(best);
    out.social_cost += g.types()[t].demand * best;
  }
  return out;
}

struct RandomGameOptions {
  int max_nodes = 5;
  int max_edges = 7;
  int max_populations = 2;
  int max_types = 2;
  bool strictly_increasing = true;
  std::size_t max_total_paths = 12;
};

// Small random multigraph games; every type has at least one strategy.
inline GameSpec random_game(std::uint64_t seed, const RandomGameOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  auto unif = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  for (;;) {
    Network net;
    const int n = pick(2, opt.max_nodes);
    for (int i = 0; i < n; ++i) net.add_node("n" + std::to_string(i));
    const int m = pick(n, std::max(n, opt.max_edges));
    for (int j = 0; j < m; ++j) {
      std::uint32_t a = j < n - 1 ? std::uint32_t(j + 1) : std::uint32_t(pick(0, n - 1));
      std::uint32_t b = j < n - 1 ? std::uint32_t(pick(0, j)) : std::uint32_t(pick(0, n - 1));
      if (a == b) b = (a + 1) % std::uint32_t(n);
      net.add_edge("e" + std::to_string(j), NodeId{a}, NodeId{b});
    }
    std::vector<icue::Population> pops;
    std::vector<icue::InfoType> types;
    std::size_t total_paths = 0;
    bool ok = true;
    const int pc = pick(1, opt.max_populations);
    for (int i = 1; i <= pc && ok; ++i) {
      const NodeId o{std::uint32_t(pick(0, n - 1))};
      NodeId d{std::uint32_t(pick(0, n - 1))};
      if (o == d) d = NodeId{(o.value + 1) % std::uint32_t(n)};
      const auto paths = subset_paths(net, o, d, net.all_edges());
      if (paths.empty()) {
        ok = false;
        break;
      }
      EdgeSet relevant;
      for (const auto& p : paths)
        for (auto e : p) relevant.insert(EdgeId{e});
      pops.push_back({i, o, d, relevant});
      const int tc = pick(1, opt.max_types);
      for (int k = 1; k <= tc; ++k) {
        EdgeSet known;
        for (const auto& p : paths) {
          if (pick(0, 1)) for (auto e : p) known.insert(EdgeId{e});
        }
        if (known.empty()) {
          auto it = paths.begin();
          std::advance(it, pick(0, int(paths.size()) - 1));
          for (auto e : *it) known.insert(EdgeId{e});
        }
        total_paths += subset_paths(net, o, d, known).size();
        types.push_back({i, k, known, unif(0.1, 2.0)});
      }
    }
    if (!ok || total_paths > opt.max_total_paths) continue;
    std::vector<CostFunction> costs;
    for (int j = 0; j < m; ++j) {
      const int deg = pick(opt.strictly_increasing ? 1 : 0, 3);
      std::vector<double> c(std::size_t(deg) + 1);
      for (double& v : c) v = unif(0.0, 1.0);
      if (deg >= 1) c[1] = unif(0.05, 1.0);
      costs.push_back(CostFunction::polynomial(c));
    }
    return GameSpec(net, pops, types, costs);
  }
}

}  // namespace testing_support
