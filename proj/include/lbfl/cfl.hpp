#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lbfl/rational.hpp"
#include "lbfl/reductions.hpp"

namespace lbfl {

/// Optimal transport from the open suppliers' capacity to the demands.
/// nullopt when the open capacity cannot cover the total demand.
std::optional<CflSolution> eval_open_set(const CflInstance& inst,
                                         const std::vector<int>& open);

struct CflSearchOptions {
  Rational eps{1, 100};
  int64_t max_iters = 1'000'000;
};

struct CflSearchResult {
  CflSolution best;
  int64_t moves = 0;
  bool hit_iteration_cap = false;
};

/// Starting from all suppliers open, repeatedly applies the best improving
/// move among add / drop / swap (exact evaluation per candidate). A move is
/// accepted only when it improves the cost by more than
/// eps * current / |suppliers|; ties go to the earliest candidate in
/// drop-then-add-then-swap order by supplier index. Deterministic.
CflSearchResult local_search(const CflInstance& inst,
                             const CflSearchOptions& opts = {});

}  // namespace lbfl
