#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lbfl/instance.hpp"

namespace lbfl {

/// Min-cost flow by successive shortest augmenting paths with potentials.
/// All arc costs must be nonnegative when added; flows are integral.
class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : n_(n), adj_(n) {}

  int add_node() {
    adj_.emplace_back();
    return n_++;
  }

  /// Returns a handle for flow_on. cap >= 0, cost >= 0.
  int add_arc(int u, int v, int64_t cap, int64_t cost);

  /// Augments cheapest s->t paths until `limit` units are shipped or the sink
  /// becomes unreachable. Returns the number of units shipped.
  int64_t run(int s, int t, int64_t limit = INT64_MAX);

  int64_t flow_on(int arc) const { return arcs_[arc ^ 1].cap; }

  /// Sum of cost * flow over all forward arcs.
  int64_t total_cost() const;

 private:
  struct Arc {
    int to;
    int64_t cap;
    int64_t cost;
  };
  int n_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
};

/// Net supplies/demands over a set of labelled locations: net > 0 supplies
/// units, net < 0 demands them. Supplies may exceed demands; excess stays put.
struct TransportProblem {
  std::vector<int> nodes;    // external labels
  std::vector<int64_t> net;  // aligned with nodes
  SquareMatrix dist;         // |nodes| x |nodes|
};

struct Shipment {
  int from = 0, to = 0;  // node labels
  int64_t units = 0;
  bool operator==(const Shipment&) const = default;
};

struct TransportPlan {
  std::vector<Shipment> shipments;
  int64_t cost = 0;
};

/// Exact minimum-cost integral plan satisfying every demand.
/// Throws ErrorKind::infeasible when the nets sum to less than zero.
TransportPlan solve_transport(const TransportProblem& p);

struct BoundedAssignment {
  std::vector<int> assign;  // client pos -> facility pos
  int64_t connection_cost = 0;
};

/// Minimum-connection-cost assignment of every client to an open facility such
/// that each open facility i receives at least lower_bound(i) clients.
/// nullopt exactly when the open lower bounds sum past |C| (or the open set is
/// empty while clients exist).
std::optional<BoundedAssignment> assign_with_lower_bounds(
    const LbflInstance& inst, const std::vector<int>& open_pos);

}  // namespace lbfl
