#include "lbfl/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace lbfl {

namespace {
constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
}

int MinCostFlow::add_arc(int u, int v, int64_t cap, int64_t cost) {
  require(cap >= 0 && cost >= 0, ErrorKind::internal, "bad arc in flow network");
  adj_[u].push_back(int(arcs_.size()));
  arcs_.push_back({v, cap, cost});
  adj_[v].push_back(int(arcs_.size()));
  arcs_.push_back({u, 0, -cost});
  return int(arcs_.size()) - 2;
}

int64_t MinCostFlow::run(int s, int t, int64_t limit) {
  std::vector<int64_t> pot(n_, 0), dist(n_);
  std::vector<int> pre_arc(n_);
  int64_t shipped = 0;

  while (shipped < limit) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[s] = 0;
    using Item = std::pair<int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      for (int a : adj_[u]) {
        const Arc& arc = arcs_[a];
        if (arc.cap <= 0) continue;
        int64_t nd = du + arc.cost + pot[u] - pot[arc.to];
        if (nd < dist[arc.to]) {
          dist[arc.to] = nd;
          pre_arc[arc.to] = a;
          pq.push({nd, arc.to});
        }
      }
    }
    if (dist[t] >= kInf) break;
    for (int u = 0; u < n_; ++u)
      pot[u] += dist[u] < kInf ? dist[u] : dist[t];

    int64_t push = limit - shipped;
    for (int u = t; u != s; u = arcs_[pre_arc[u] ^ 1].to)
      push = std::min(push, arcs_[pre_arc[u]].cap);
    for (int u = t; u != s; u = arcs_[pre_arc[u] ^ 1].to) {
      arcs_[pre_arc[u]].cap -= push;
      arcs_[pre_arc[u] ^ 1].cap += push;
    }
    shipped += push;
  }
  return shipped;
}

int64_t MinCostFlow::total_cost() const {
  int64_t c = 0;
  for (size_t a = 0; a < arcs_.size(); a += 2) c += arcs_[a].cost * arcs_[a ^ 1].cap;
  return c;
}

TransportPlan solve_transport(const TransportProblem& p) {
  int m = int(p.nodes.size());
  require(int(p.net.size()) == m && p.dist.n == m, ErrorKind::malformed_input,
          "transport problem shape mismatch");
  int64_t balance = 0, demand_total = 0;
  for (int64_t z : p.net) {
    balance += z;
    if (z < 0) demand_total += -z;
  }
  require(balance >= 0, ErrorKind::infeasible,
          "transport demands exceed supplies by " + std::to_string(-balance));

  TransportPlan plan;
  if (demand_total == 0) return plan;

  MinCostFlow f(m + 2);
  int s = m, t = m + 1;
  std::vector<std::pair<std::pair<int, int>, int>> cross;  // ((u,v), arc)
  for (int u = 0; u < m; ++u)
    if (p.net[u] > 0) f.add_arc(s, u, p.net[u], 0);
  for (int v = 0; v < m; ++v)
    if (p.net[v] < 0) f.add_arc(v, t, -p.net[v], 0);
  for (int u = 0; u < m; ++u) {
    if (p.net[u] <= 0) continue;
    for (int v = 0; v < m; ++v) {
      if (p.net[v] >= 0) continue;
      int a = f.add_arc(u, v, std::min(p.net[u], -p.net[v]), p.dist.at(u, v));
      cross.push_back({{u, v}, a});
    }
  }
  int64_t shipped = f.run(s, t);
  require(shipped == demand_total, ErrorKind::internal,
          "transport solver failed to meet demand");
  for (const auto& [uv, a] : cross)
    if (f.flow_on(a) > 0)
      plan.shipments.push_back({p.nodes[uv.first], p.nodes[uv.second], f.flow_on(a)});
  plan.cost = f.total_cost();
  return plan;
}

std::optional<BoundedAssignment> assign_with_lower_bounds(
    const LbflInstance& inst, const std::vector<int>& open_pos) {
  int nc = inst.nc();
  int64_t bound_sum = 0;
  for (int i : open_pos) bound_sum += inst.facilities[i].lower_bound;
  if (bound_sum > nc) return std::nullopt;
  if (nc == 0) return BoundedAssignment{{}, 0};
  if (open_pos.empty()) return std::nullopt;

  // Lower bounds on facility->sink arcs are removed by the standard excess
  // transformation; the forced t->s arc of value |C| makes every client ship.
  int m = int(open_pos.size());
  int s = nc + m, t = s + 1, ss = t + 1, tt = ss + 1;
  MinCostFlow f(tt + 1);
  std::vector<std::vector<int>> client_arcs(nc);
  for (int j = 0; j < nc; ++j) f.add_arc(s, j, 1, 0);
  for (int j = 0; j < nc; ++j)
    for (int k = 0; k < m; ++k)
      client_arcs[j].push_back(f.add_arc(j, nc + k, 1, inst.d_fc(open_pos[k], j)));
  int64_t t_excess = -int64_t(nc);
  for (int k = 0; k < m; ++k) {
    int64_t b = inst.facilities[open_pos[k]].lower_bound;
    f.add_arc(nc + k, t, nc - b, 0);
    if (b > 0) f.add_arc(nc + k, tt, b, 0);  // node excess -b
    t_excess += b;
  }
  f.add_arc(ss, s, nc, 0);  // excess +|C| at s from the forced return arc
  if (t_excess > 0)
    f.add_arc(ss, t, t_excess, 0);
  else if (t_excess < 0)
    f.add_arc(t, tt, -t_excess, 0);

  int64_t needed = nc + std::max<int64_t>(t_excess, 0);
  int64_t shipped = f.run(ss, tt);
  require(shipped == needed, ErrorKind::internal,
          "bounded assignment flow did not saturate");

  BoundedAssignment out;
  out.assign.assign(nc, -1);
  for (int j = 0; j < nc; ++j)
    for (int k = 0; k < m; ++k)
      if (f.flow_on(client_arcs[j][k]) > 0) out.assign[j] = open_pos[k];
  for (int j = 0; j < nc; ++j)
    require(out.assign[j] >= 0, ErrorKind::internal, "client left unassigned");
  out.connection_cost = f.total_cost();
  return out;
}

}  // namespace lbfl
