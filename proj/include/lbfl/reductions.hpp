#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lbfl/coverage.hpp"
#include "lbfl/flow.hpp"
#include "lbfl/instance.hpp"
#include "lbfl/rational.hpp"

namespace lbfl {

/// Instance with every client relocated onto its hub and hub facilities made
/// free. Same facilities, clients and lower bounds as the input.
struct ClientAggregation {
  LbflInstance inst;
  std::vector<int> hubs;        // facility positions, ascending by id
  std::vector<int> client_hub;  // client pos -> hub facility pos
  std::vector<int64_t> count;   // clients per hub, aligned with hubs
};

ClientAggregation aggregate_clients(const LbflInstance& inst,
                                    const BetaCoveredSolution& bc);

/// Instance with every facility strictly inside a hub's half-separation ball
/// relocated onto that hub; relocated facilities pay a surcharge of
/// 2/3 * (clients at hub) * (moving distance) on top of their cost.
struct FacilityAggregation {
  LbflInstance inst;
  std::vector<int> hubs;
  std::vector<int> client_hub;
  std::vector<int64_t> count;
  std::vector<int64_t> radius;        // per hub: distance to nearest other hub
  std::vector<std::vector<int>> ball; // per hub: facility positions moved onto it
  std::vector<int> ball_of;           // facility pos -> hub index, -1 if outside
};

/// nullopt signals fewer than two hubs; the driver handles that case.
std::optional<FacilityAggregation> aggregate_facilities(const ClientAggregation& ca);

/// Relaxation where clients may stay unconnected, each hub without an open
/// facility pays (2b-1)/(2b^2) * count * radius, and facilities outside every
/// ball are dropped (opening them never helps).
struct PenaltyStage {
  FacilityAggregation agg;
  std::vector<int> kept;            // facility positions inside some ball
  Rational coeff;                   // penalty per (count * radius) unit
  std::vector<int64_t> hub_penalty; // exact integer per hub
};

PenaltyStage build_penalty_instance(FacilityAggregation agg, Rational beta);

/// open must live inside the balls, at most one facility per ball, and each
/// open facility must meet its lower bound exactly from `assign`.
struct PartialSolution {
  std::vector<int> open;    // facility positions
  std::vector<int> assign;  // client pos -> facility pos, -1 = unconnected
};

CostBreakdown cost_lbflp(const PenaltyStage& ps, const PartialSolution& sol);

/// One per-hub option: pay `cost`, leaving `net` units of client supply at the
/// hub (negative = demand). source >= 0 names the facility to open; -1 is the
/// keep-closed (penalty) option.
struct TcsdPair {
  int64_t cost = 0;
  int64_t net = 0;
  int source = -1;
  bool operator==(const TcsdPair&) const = default;
};

struct TcsdInstance {
  std::vector<int> hubs;      // facility positions
  SquareMatrix hub_dist;
  std::vector<int64_t> count; // clients per hub
  std::vector<std::vector<TcsdPair>> options;  // per hub
};

TcsdInstance build_tcsd(const PenaltyStage& ps);

struct TcsdCost {
  int64_t config_cost = 0;
  int64_t transport_cost = 0;
  int64_t total = 0;
  TransportPlan plan;  // shipments keyed by hub index
};

/// nullopt when the chosen nets sum below zero.
std::optional<TcsdCost> tcsd_cost(const TcsdInstance& t,
                                  const std::vector<int>& choice);

/// Per-hub option list after cost rounding (up, to a power of two) and
/// dominance pruning: costs and nets strictly increase, first cost is 0.
struct CanonicalPair {
  int64_t cost = 0;   // 0 or a power of two
  int64_t net = 0;
  int raw_index = 0;  // index into the raw option list
  bool operator==(const CanonicalPair&) const = default;
};

std::vector<std::vector<CanonicalPair>> canonicalize_rv(const TcsdInstance& t);

int64_t ceil_pow2(int64_t g);

/// Evaluate a canonical choice (index per hub) exactly.
std::optional<TcsdCost> tcsd_cost_canonical(
    const TcsdInstance& t, const std::vector<std::vector<CanonicalPair>>& canon,
    const std::vector<int>& choice);

/// Map a canonical choice back to raw option indices.
std::vector<int> canonical_to_raw(
    const std::vector<std::vector<CanonicalPair>>& canon,
    const std::vector<int>& choice);

/// Supplier ladder derived from a canonical list: level 0 is the free
/// supplier (when the first net is positive); level l >= 1 sells the step
/// from net l-1 to net l at the rounded cost.
struct CflSupplier {
  int loc = 0;    // hub index
  int level = 0;  // canonical index
  int64_t cost = 0;
  int64_t capacity = 0;
};

struct CflInstance {
  std::vector<int> hubs;
  SquareMatrix hub_dist;
  std::vector<int64_t> demand;  // per hub
  std::vector<CflSupplier> suppliers;
};

CflInstance build_cfl(const TcsdInstance& t,
                      const std::vector<std::vector<CanonicalPair>>& canon);

struct CflSolution {
  std::vector<int> open;  // supplier indices, ascending
  TransportPlan plan;     // shipments keyed by hub index
  int64_t opening_cost = 0;
  int64_t total = 0;
};

/// Per hub, pick the canonical pair of the highest open supplier level
/// (index 0 when none is open). The result never costs more than the
/// supplier solution and is always feasible.
std::vector<int> lift_cfl_to_tcsd(
    const std::vector<std::vector<CanonicalPair>>& canon, const CflInstance& cfl,
    const CflSolution& sol);

/// Materialize a raw choice plus its optimal transport plan as an LBFL-with-
/// penalty solution: open each chosen facility, connect local clients up to
/// the lower bound, and realize shipped units as concrete clients picked by
/// ascending id at the shipping hub. Component costs match the choice exactly.
PartialSolution lift_tcsd_to_lbflp(const TcsdInstance& t, const PenaltyStage& ps,
                                   const std::vector<int>& raw_choice,
                                   const TransportPlan& plan);

/// Reconnect every unconnected client of a penalty-stage solution: stray
/// clients at open hubs join the local facility; closed hubs form a
/// nearest-neighbor forest and pending clients move bottom-up, opening a free
/// hub facility whenever enough have accumulated. Two-cycle roots fall back
/// to the partner hub or to the open hub nearest to the pair.
PosSolution reconnect_unserved(const PenaltyStage& ps, const PartialSolution& sol);

struct RecostResult {
  CostBreakdown aggregated;   // under the facility-aggregated metric
  CostBreakdown relocated;    // under the client-aggregated metric
  CostBreakdown original;     // under the input metric
  bool unfold_factor_ok = false;   // 2 * relocated <= 3 * aggregated
  bool unfold_additive_ok = false; // original <= relocated + hub costs + stage-1 conn
};

/// Evaluate one solution under all three metrics and check the two
/// de-aggregation certificates.
RecostResult recost_down(const LbflInstance& base, const ClientAggregation& ca,
                         const FacilityAggregation& fa, const PosSolution& sol);

/// |conn_relocated(sol) - conn_base(sol)| <= conn_base of the coverage stage.
bool client_move_bound_ok(const LbflInstance& base, const ClientAggregation& ca,
                          const PosSolution& sol);

}  // namespace lbfl
