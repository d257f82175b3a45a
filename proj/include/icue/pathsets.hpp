#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "icue/game.hpp"
#include "icue/network.hpp"

namespace icue {

inline constexpr std::size_t kDefaultPathCap = 10000;

// Thrown when an enumeration would produce more paths than its cap.
class PathExplosion : public std::runtime_error {
 public:
  explicit PathExplosion(std::size_t cap);
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// All simple origin-destination paths that use only `allowed` edges, sorted
// lexicographically by edge sequence. Parallel edges give distinct paths.
std::vector<Path> enumerate_paths(const Network& network, NodeId origin, NodeId destination,
                                  const EdgeSet& allowed, std::size_t cap = kDefaultPathCap);

// Number of simple paths, counting stops once `limit` is reached.
std::size_t count_paths(const Network& network, NodeId origin, NodeId destination,
                        const EdgeSet& allowed, std::size_t limit);

// Subset of candidates lying on at least one simple path within candidates.
EdgeSet relevant_edges(const Network& network, NodeId origin, NodeId destination,
                       const EdgeSet& candidates, std::size_t cap = kDefaultPathCap);

struct StrategySet {
  TypeKey owner;
  std::vector<Path> paths;
  bool empty() const { return paths.empty(); }
  friend bool operator==(const StrategySet&, const StrategySet&) = default;
};

// Aligned with game.types().
using StrategySets = std::vector<StrategySet>;

StrategySet build_strategy_set(const GameSpec& game, std::size_t type_index,
                               std::size_t cap = kDefaultPathCap);
StrategySets build_strategy_sets(const GameSpec& game, std::size_t cap = kDefaultPathCap);

// Zero-flow outcome listing every strategy of every type.
Outcome empty_outcome(const StrategySets& sets);

}  // namespace icue
