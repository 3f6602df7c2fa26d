#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lbfl/cfl.hpp"
#include "lbfl/coverage.hpp"
#include "lbfl/instance.hpp"
#include "lbfl/reductions.hpp"

namespace lbfl {

/// Size guards for the brute-force solvers; exceeding one throws
/// ErrorKind::size_guard. The solvers exist to be obviously correct, so they
/// enumerate instead of being clever.
struct OracleLimits {
  int max_facilities = 12;
  int max_suppliers = 16;
  int max_clients_direct = 8;       // direct assignment enumeration
  int64_t max_choice_product = 2'000'000;
};

/// Global optimum by enumerating every feasible open set, assigning clients
/// by exact min-cost flow. nullopt when no feasible solution exists.
std::optional<std::pair<PosSolution, int64_t>> brute_lbfl(
    const LbflInstance& inst, const OracleLimits& limits = {});

/// Optimum of the surcharged-cost instance over all open sets.
std::pair<std::vector<int>, int64_t> brute_ufl(const UflAugmented& aug,
                                               const OracleLimits& limits = {});

/// Optimum over all supplier subsets.
std::pair<CflSolution, int64_t> brute_cfl(const CflInstance& inst,
                                          const OracleLimits& limits = {});

/// Optimum over the product of per-hub options, skipping choices whose nets
/// sum below zero (the all-penalty choice is always feasible).
std::pair<std::vector<int>, int64_t> brute_tcsd(const TcsdInstance& t,
                                                const OracleLimits& limits = {});

/// Same, over canonicalized option lists.
std::pair<std::vector<int>, int64_t> brute_tcsd_canonical(
    const TcsdInstance& t, const std::vector<std::vector<CanonicalPair>>& canon,
    const OracleLimits& limits = {});

/// Penalty-stage optimum by direct enumeration over open profiles and raw
/// assignment vectors. Intentionally independent of the flow module so it can
/// second-guess the transport-based route.
std::pair<PartialSolution, int64_t> brute_lbflp(const PenaltyStage& ps,
                                                const OracleLimits& limits = {});

}  // namespace lbfl
