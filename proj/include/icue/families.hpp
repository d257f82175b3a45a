#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icue/paradox.hpp"

namespace icue {

enum class FamilyTemplate {
  circuit,        // rings, several populations, arc-or-ring information sets
  sli_chain,      // series chains of rings and single edges, one population
  wheatstone,     // the Braess network with role-dependent cost ranges
  pigou,          // random two-terminal multigraphs with at least two paths
  fixed_network,  // the network of a builtin scenario
};

// Describes how random instances are drawn. Polynomial coefficients are drawn
// uniformly from [0, coeff_max], except the linear one, which is drawn from
// [linear_min, coeff_max]. Demands are drawn from (demand_min, demand_max].
struct FamilySpec {
  std::string name;
  FamilyTemplate tmpl = FamilyTemplate::circuit;
  int min_size = 3;  // ring edges, or series blocks
  int max_size = 8;
  int max_populations = 3;
  int max_types = 2;
  int max_degree = 3;
  double coeff_max = 1.0;
  double linear_min = 0.05;
  double demand_min = 0.0;
  double demand_max = 2.0;
  std::string scenario;  // fixed_network only
};

// Names: circuit, sli, wheatstone, pigou, topology:<scenario id>.
// Throws std::invalid_argument for unknown names.
FamilySpec builtin_family(std::string_view name);
// A builtin name, or a path to a JSON document with the FamilySpec fields
// ("template" names the FamilyTemplate).
FamilySpec resolve_family(std::string_view name_or_path);
std::string to_string(FamilyTemplate tmpl);

// Deterministic in (family, kind, seed, index). Empty when the family cannot
// produce an instance of that kind, e.g. a single-path network.
std::optional<ParadoxInstance> sample_instance(const FamilySpec& family, ParadoxKind kind,
                                               std::uint64_t seed, std::uint64_t index);

struct Witness {
  std::uint64_t sample = 0;
  ParadoxInstance instance;
  ParadoxVerdict verdict;
  // For IBP and IBPSC searches, the verdict of the other detector on the
  // same pair of equilibria.
  std::optional<ParadoxVerdict> companion;
};

struct SearchReport {
  std::vector<Witness> witnesses;  // in sample order
  std::uint64_t sampled = 0;
  std::uint64_t skipped = 0;   // no instance for this sample
  std::uint64_t withheld = 0;  // solver did not converge
};

// threads = 0 uses the hardware concurrency. Results do not depend on it.
SearchReport search_paradox(const FamilySpec& family, ParadoxKind kind, std::uint64_t budget,
                            std::uint64_t seed, const ParadoxOptions& options = {},
                            unsigned threads = 1);

// Columns of the search CSV; one row per witness.
std::vector<std::string> search_csv_header();
std::vector<std::vector<std::string>> search_csv_rows(const SearchReport& report);

}  // namespace icue
