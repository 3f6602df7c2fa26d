#pragma once

#include <cstdint>
#include <vector>

#include "lbfl/instance.hpp"
#include "lbfl/rational.hpp"

namespace lbfl {

/// Auxiliary facility-location instance whose opening costs fold in the cost
/// of each facility's lower_bound nearest clients, weighted by
/// 2*beta/(1-beta). `base` is the input scaled by `stage_scale` (the
/// coefficient's denominator) so surcharged costs stay integral for any
/// rational beta. Facilities whose lower bound exceeds |C| are excluded from
/// `pool`: they can never be opened feasibly.
struct UflAugmented {
  LbflInstance base;  // input scaled by stage_scale
  Rational beta;
  int64_t stage_scale = 1;
  std::vector<int> pool;                   // openable facility positions
  std::vector<int64_t> surcharged_cost;    // per facility pos; -1 outside pool
  std::vector<std::vector<int>> nearest;   // per facility pos: lower_bound
                                           // nearest clients, (dist, id) order
};

UflAugmented build_ufl_instance(const LbflInstance& inst, Rational beta);

/// f'(S) + sum over clients of the distance to S, in base units.
int64_t ufl_cost(const UflAugmented& aug, const std::vector<int>& open_pos);

/// Dual-fitting greedy: client budgets grow uniformly, a facility opens once
/// accumulated offers cover its cost, and connected clients offer their
/// connection savings to facilities that are still closed. The output S
/// satisfies ufl_cost(S) <= f'(T) + 2 * conn(T) for every facility subset T.
std::vector<int> solve_ufl_greedy(const UflAugmented& aug);

/// Repeatedly closes any facility whose removal does not increase ufl_cost
/// (non-strict), scanning by ascending facility id until a pass removes
/// nothing. Never empties the set while clients exist.
std::vector<int> prune_by_closing(const UflAugmented& aug, std::vector<int> s);

/// Solution of the relaxed-coverage stage: every open hub serves at least
/// beta * lower_bound clients, assignments are nearest-hub, and hubs are at
/// pairwise positive distances (collocated ones are merged onto the lowest
/// facility id).
struct BetaCoveredSolution {
  Rational beta;
  std::vector<int> hubs;      // facility positions, ascending by facility id
  std::vector<int> assign;    // client pos -> hub facility pos
  std::vector<int64_t> count; // clients per hub, aligned with hubs
};

/// Composes build -> greedy -> prune -> nearest assignment -> merge, then
/// re-verifies coverage. Throws ErrorKind::infeasible when no facility can be
/// opened while clients exist.
BetaCoveredSolution beta_covered(const LbflInstance& inst, Rational beta);

}  // namespace lbfl
