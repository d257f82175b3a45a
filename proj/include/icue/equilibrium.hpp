#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "icue/game.hpp"
#include "icue/pathsets.hpp"

namespace icue {

enum class SolverMethod {
  // Gauss-Seidel sweeps over types; each sweep moves flow from costlier used
  // paths to the cheapest path with an exact line search on the potential.
  path_equilibration,
  // All-or-nothing targets blended with step min(2/(k+2), line-search optimum).
  conditional_gradient,
};

struct SolverOptions {
  double tolerance = 1e-8;  // on the relative gap
  std::size_t max_iterations = 10000;
  double big_m = kDefaultBigM;
  std::size_t grid_resolution = 24;  // brute-force oracle, per type simplex
  std::uint64_t seed = 0;            // brute-force oracle restarts
  std::size_t path_cap = kDefaultPathCap;
  std::size_t oracle_path_limit = 12;
  SolverMethod method = SolverMethod::path_equilibration;

  // Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct TypeGap {
  double absolute = 0.0;
  double relative = 0.0;  // absolute / (1 + cheapest strategy cost)
};

struct EquilibriumResult {
  Outcome outcome;  // lists every strategy of every type
  LoadVector loads;
  std::vector<double> type_costs;
  std::vector<TypeGap> gaps;
  double social_cost = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Some used edge has a cost that is not strictly increasing, so equilibrium
  // loads need not be unique.
  bool loads_possibly_non_unique = false;
  std::vector<double> potential_trace;  // one entry per iteration, start first

  double max_relative_gap() const;
};

class OracleGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per type: max over used strategies of (cost - cheapest cost in the full
// strategy set). Strategy sets are rebuilt from the game, and flowing paths
// outside them are rejected. Throws std::invalid_argument on infeasibility.
std::vector<TypeGap> equilibrium_gap(const GameSpec& game, const Outcome& outcome,
                                     double feasibility_tolerance = 1e-9);

double beckmann_potential(const GameSpec& game, const LoadVector& loads);
double beckmann_potential(const GameSpec& game, const Outcome& outcome);

// Non-convergence is reported through converged=false with the best iterate.
EquilibriumResult solve_icue(const GameSpec& game, const SolverOptions& options = {});
EquilibriumResult solve_icue(const GameSpec& game, const StrategySets& sets,
                             const SolverOptions& options = {});

// Independent oracle: grid search over the product of per-type flow simplices
// followed by pattern-search refinement of the potential. Throws
// OracleGuardExceeded when the game has more than oracle_path_limit paths.
EquilibriumResult brute_force_icue(const GameSpec& game, const SolverOptions& options = {});

// Each round every type moves shift_fraction of the flow on its costliest used
// strategy onto its cheapest strategy, all types at once. The returned trace
// starts with `start` and has rounds + 1 entries.
std::vector<Outcome> best_response_trace(const GameSpec& game, const Outcome& start,
                                         std::size_t rounds, double shift_fraction);

}  // namespace icue
