#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbfl/errors.hpp"

namespace lbfl {

struct SquareMatrix {
  int n = 0;
  std::vector<int64_t> cell;

  static SquareMatrix zeros(int n) {
    return SquareMatrix{n, std::vector<int64_t>(size_t(n) * size_t(n), 0)};
  }
  int64_t& at(int r, int c) { return cell[size_t(r) * n + c]; }
  int64_t at(int r, int c) const { return cell[size_t(r) * n + c]; }
  bool operator==(const SquareMatrix&) const = default;
};

struct Facility {
  int id = 0;
  int64_t open_cost = 0;
  int64_t lower_bound = 0;
  bool operator==(const Facility&) const = default;
};

/// A lower-bounded facility location instance. Facilities and clients share
/// one point space: point k is facilities[k] for k < nf(), and
/// clients[k - nf()] otherwise. Distances are scaled integers; `scale` records
/// the precision factor so costs can be reported in original units.
/// The matrix may be a pseudometric: zero distance between distinct points is
/// allowed (aggregation stages create collocations on purpose).
struct LbflInstance {
  int64_t scale = 1;
  std::vector<Facility> facilities;
  std::vector<int> clients;  // client ids
  SquareMatrix dist;         // (nf+nc) x (nf+nc), facilities first
  // Present for coordinate-induced metrics (taxicab); kept for round-trips.
  std::optional<std::vector<std::array<int64_t, 2>>> points;

  int nf() const { return int(facilities.size()); }
  int nc() const { return int(clients.size()); }
  int n_points() const { return nf() + nc(); }

  int64_t d_ff(int i, int k) const { return dist.at(i, k); }
  int64_t d_fc(int i, int j) const { return dist.at(i, nf() + j); }
  int64_t d_cc(int j, int k) const { return dist.at(nf() + j, nf() + k); }

  int facility_pos(int id) const;  // -1 when unknown
  int client_pos(int id) const;    // -1 when unknown

  bool operator==(const LbflInstance&) const = default;
};

/// Id-addressed solution: the exchange format. `assign` is sorted by client
/// id and must cover every client for a full solution.
struct LbflSolution {
  std::vector<int> open;                    // facility ids, ascending
  std::vector<std::pair<int, int>> assign;  // (client id, facility id)
};

struct CostBreakdown {
  int64_t facility_cost = 0;
  int64_t connection_cost = 0;
  int64_t penalty_cost = 0;
  int64_t total() const { return facility_cost + connection_cost + penalty_cost; }
  bool operator==(const CostBreakdown&) const = default;
};

enum class ViolationKind { asymmetry, diagonal, triangle };

struct MetricViolation {
  ViolationKind kind;
  int a = 0, b = 0, c = 0;  // triangle names (a,b,c); pairs use a,b
  std::string describe() const;
};

/// Empty result iff the matrix is a pseudometric: symmetric, zero diagonal,
/// triangle inequality on all ordered triples. Throws on negative entries.
std::vector<MetricViolation> validate_metric(const SquareMatrix& d);

struct LowerBoundShortfall {
  int facility_id = 0;
  int64_t required = 0;
  int64_t served = 0;
};

/// Exact facility + connection cost. Structural problems (unknown ids,
/// unassigned clients, assignment to a closed facility) throw; lower-bound
/// shortfalls do not — query them with lower_bound_shortfalls.
CostBreakdown cost_of(const LbflInstance& inst, const LbflSolution& sol);
std::vector<LowerBoundShortfall> lower_bound_shortfalls(const LbflInstance& inst,
                                                        const LbflSolution& sol);

/// Position-indexed solution used inside the reduction pipeline.
/// assign[j] is a facility position, or -1 for an unconnected client.
struct PosSolution {
  std::vector<int> open;    // facility positions, ascending
  std::vector<int> assign;  // size nc
};

LbflSolution to_ids(const LbflInstance& inst, const PosSolution& sol);
PosSolution to_positions(const LbflInstance& inst, const LbflSolution& sol);

/// Facility + connection cost of a fully assigned positional solution.
CostBreakdown eval_pos(const LbflInstance& inst, const PosSolution& sol);

/// Copy with distances and opening costs multiplied by k (exact).
LbflInstance scale_instance(const LbflInstance& inst, int64_t k);

/// Sub-instance keeping only the given facility positions (ids preserved).
LbflInstance restrict_facilities(const LbflInstance& inst,
                                 const std::vector<int>& keep_pos);

}  // namespace lbfl
