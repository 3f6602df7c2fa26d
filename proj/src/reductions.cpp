#include "lbfl/reductions.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace lbfl {

ClientAggregation aggregate_clients(const LbflInstance& inst,
                                    const BetaCoveredSolution& bc) {
  ClientAggregation ca;
  ca.hubs = bc.hubs;
  ca.client_hub = bc.assign;
  ca.count = bc.count;
  ca.inst = inst;
  ca.inst.points.reset();

  int nf = inst.nf(), nc = inst.nc();
  auto& d = ca.inst.dist;
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nc; ++j) {
      int64_t v = inst.d_ff(i, bc.assign[j]);
      d.at(i, nf + j) = v;
      d.at(nf + j, i) = v;
    }
  for (int j = 0; j < nc; ++j)
    for (int l = 0; l < nc; ++l)
      d.at(nf + j, nf + l) = inst.d_ff(bc.assign[j], bc.assign[l]);
  for (int h : ca.hubs) ca.inst.facilities[h].open_cost = 0;
  return ca;
}

std::optional<FacilityAggregation> aggregate_facilities(const ClientAggregation& ca) {
  if (ca.hubs.size() < 2) return std::nullopt;
  const LbflInstance& b = ca.inst;
  int k = int(ca.hubs.size()), nf = b.nf(), nc = b.nc();

  FacilityAggregation fa;
  fa.hubs = ca.hubs;
  fa.client_hub = ca.client_hub;
  fa.count = ca.count;

  fa.radius.assign(k, 0);
  for (int h = 0; h < k; ++h) {
    int64_t best = std::numeric_limits<int64_t>::max();
    for (int g = 0; g < k; ++g)
      if (g != h) best = std::min(best, b.d_ff(ca.hubs[h], ca.hubs[g]));
    require(best > 0, ErrorKind::internal, "hubs must be at positive distances");
    fa.radius[h] = best;
  }

  fa.ball.assign(k, {});
  fa.ball_of.assign(nf, -1);
  for (int i = 0; i < nf; ++i) {
    for (int h = 0; h < k; ++h) {
      if (2 * b.d_ff(ca.hubs[h], i) < fa.radius[h]) {
        require(fa.ball_of[i] == -1, ErrorKind::internal,
                "half-separation balls overlap");
        fa.ball_of[i] = h;
      }
    }
    if (fa.ball_of[i] >= 0) fa.ball[fa.ball_of[i]].push_back(i);
  }
  auto by_id = [&](int x, int y) {
    return b.facilities[x].id < b.facilities[y].id;
  };
  for (auto& members : fa.ball) std::sort(members.begin(), members.end(), by_id);

  fa.inst = b;
  fa.inst.points.reset();
  auto phi = [&](int i) { return fa.ball_of[i] >= 0 ? ca.hubs[fa.ball_of[i]] : i; };
  auto& d = fa.inst.dist;
  for (int i = 0; i < nf; ++i) {
    for (int l = 0; l < nf; ++l) d.at(i, l) = b.d_ff(phi(i), phi(l));
    for (int j = 0; j < nc; ++j) {
      int64_t v = b.d_fc(phi(i), j);
      d.at(i, nf + j) = v;
      d.at(nf + j, i) = v;
    }
  }
  for (int i = 0; i < nf; ++i) {
    int h = fa.ball_of[i];
    if (h < 0) continue;
    int64_t move = b.d_ff(ca.hubs[h], i);
    int64_t surcharge = 2 * fa.count[h] * move;
    require(surcharge % 3 == 0, ErrorKind::internal,
            "facility surcharge is not an integer; scale the instance by 3");
    fa.inst.facilities[i].open_cost += surcharge / 3;
  }
  return fa;
}

PenaltyStage build_penalty_instance(FacilityAggregation agg, Rational beta) {
  PenaltyStage ps;
  ps.agg = std::move(agg);
  int64_t p = beta.num(), q = beta.den();
  ps.coeff = Rational(q * (2 * p - q), 2 * p * p);

  int k = int(ps.agg.hubs.size());
  ps.hub_penalty.assign(k, 0);
  for (int h = 0; h < k; ++h) {
    Rational v = ps.coeff * Rational(ps.agg.count[h] * ps.agg.radius[h]);
    require(v.is_integer(), ErrorKind::internal,
            "penalty is not an integer; scale the instance by the coefficient "
            "denominator");
    ps.hub_penalty[h] = v.num();
  }
  for (int i = 0; i < ps.agg.inst.nf(); ++i)
    if (ps.agg.ball_of[i] >= 0) ps.kept.push_back(i);
  return ps;
}

CostBreakdown cost_lbflp(const PenaltyStage& ps, const PartialSolution& sol) {
  const FacilityAggregation& agg = ps.agg;
  const LbflInstance& b = agg.inst;
  int k = int(agg.hubs.size());
  require(int(sol.assign.size()) == b.nc(), ErrorKind::invalid_solution,
          "assignment vector has wrong length");

  std::vector<char> is_open(b.nf(), 0);
  std::vector<int> open_in_ball(k, -1);
  CostBreakdown cb;
  for (int i : sol.open) {
    require(i >= 0 && i < b.nf() && !is_open[i], ErrorKind::invalid_solution,
            "bad open facility position");
    is_open[i] = 1;
    int h = agg.ball_of[i];
    require(h >= 0, ErrorKind::invalid_solution,
            "open facility lies outside every hub ball");
    require(open_in_ball[h] == -1, ErrorKind::invalid_solution,
            "two open facilities share a hub ball");
    open_in_ball[h] = i;
    cb.facility_cost += b.facilities[i].open_cost;
  }

  std::vector<int64_t> served(b.nf(), 0);
  for (int j = 0; j < b.nc(); ++j) {
    int i = sol.assign[j];
    if (i < 0) continue;
    require(i < b.nf() && is_open[i], ErrorKind::invalid_solution,
            "client connected to a closed facility");
    served[i]++;
    cb.connection_cost += b.d_fc(i, j);
  }
  for (int i : sol.open)
    require(served[i] >= b.facilities[i].lower_bound, ErrorKind::invalid_solution,
            "open facility misses its lower bound");

  for (int h = 0; h < k; ++h)
    if (open_in_ball[h] == -1) cb.penalty_cost += ps.hub_penalty[h];
  return cb;
}

TcsdInstance build_tcsd(const PenaltyStage& ps) {
  const FacilityAggregation& agg = ps.agg;
  int k = int(agg.hubs.size());
  TcsdInstance t;
  t.hubs = agg.hubs;
  t.count = agg.count;
  t.hub_dist = SquareMatrix::zeros(k);
  for (int h = 0; h < k; ++h)
    for (int g = 0; g < k; ++g)
      t.hub_dist.at(h, g) = agg.inst.d_ff(agg.hubs[h], agg.hubs[g]);

  t.options.resize(k);
  for (int h = 0; h < k; ++h) {
    t.options[h].push_back({ps.hub_penalty[h], agg.count[h], -1});
    for (int i : agg.ball[h])
      t.options[h].push_back({agg.inst.facilities[i].open_cost,
                              agg.count[h] - agg.inst.facilities[i].lower_bound,
                              i});
  }
  return t;
}

namespace {

std::optional<TcsdCost> price_choice(const TcsdInstance& t,
                                     const std::vector<int64_t>& costs,
                                     const std::vector<int64_t>& nets) {
  int64_t balance = 0;
  TcsdCost out;
  for (size_t h = 0; h < nets.size(); ++h) {
    out.config_cost += costs[h];
    balance += nets[h];
  }
  if (balance < 0) return std::nullopt;
  TransportProblem tp;
  for (int h = 0; h < int(nets.size()); ++h) tp.nodes.push_back(h);
  tp.net = nets;
  tp.dist = t.hub_dist;
  out.plan = solve_transport(tp);
  out.transport_cost = out.plan.cost;
  out.total = out.config_cost + out.transport_cost;
  return out;
}

}  // namespace

std::optional<TcsdCost> tcsd_cost(const TcsdInstance& t,
                                  const std::vector<int>& choice) {
  int k = int(t.hubs.size());
  require(int(choice.size()) == k, ErrorKind::invalid_solution,
          "choice vector has wrong length");
  std::vector<int64_t> costs(k), nets(k);
  for (int h = 0; h < k; ++h) {
    require(choice[h] >= 0 && choice[h] < int(t.options[h].size()),
            ErrorKind::invalid_solution, "choice index out of range");
    costs[h] = t.options[h][choice[h]].cost;
    nets[h] = t.options[h][choice[h]].net;
  }
  return price_choice(t, costs, nets);
}

int64_t ceil_pow2(int64_t g) {
  require(g >= 0, ErrorKind::internal, "negative option cost");
  if (g <= 1) return g;
  return int64_t(std::bit_ceil(uint64_t(g)));
}

std::vector<std::vector<CanonicalPair>> canonicalize_rv(const TcsdInstance& t) {
  std::vector<std::vector<CanonicalPair>> canon(t.hubs.size());
  for (size_t h = 0; h < t.hubs.size(); ++h) {
    std::vector<CanonicalPair> rounded;
    for (size_t r = 0; r < t.options[h].size(); ++r)
      rounded.push_back({ceil_pow2(t.options[h][r].cost), t.options[h][r].net,
                         int(r)});
    std::sort(rounded.begin(), rounded.end(), [](const auto& a, const auto& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.net != b.net) return a.net > b.net;
      return a.raw_index < b.raw_index;
    });
    std::vector<CanonicalPair> kept;
    for (const auto& pair : rounded)
      if (kept.empty() || pair.net > kept.back().net) kept.push_back(pair);
    require(!kept.empty() && kept.front().cost == 0, ErrorKind::internal,
            "canonical list must start with a free option");
    canon[h] = std::move(kept);
  }
  return canon;
}

std::optional<TcsdCost> tcsd_cost_canonical(
    const TcsdInstance& t, const std::vector<std::vector<CanonicalPair>>& canon,
    const std::vector<int>& choice) {
  int k = int(t.hubs.size());
  std::vector<int64_t> costs(k), nets(k);
  for (int h = 0; h < k; ++h) {
    const CanonicalPair& pair = canon[h].at(choice[h]);
    costs[h] = pair.cost;
    nets[h] = pair.net;
  }
  return price_choice(t, costs, nets);
}

std::vector<int> canonical_to_raw(
    const std::vector<std::vector<CanonicalPair>>& canon,
    const std::vector<int>& choice) {
  std::vector<int> raw(choice.size());
  for (size_t h = 0; h < choice.size(); ++h)
    raw[h] = canon[h].at(choice[h]).raw_index;
  return raw;
}

CflInstance build_cfl(const TcsdInstance& t,
                      const std::vector<std::vector<CanonicalPair>>& canon) {
  int k = int(t.hubs.size());
  CflInstance c;
  c.hubs = t.hubs;
  c.hub_dist = t.hub_dist;
  c.demand.assign(k, 0);
  for (int h = 0; h < k; ++h) {
    const auto& list = canon[h];
    int64_t first_net = list[0].net;
    if (first_net < 0)
      c.demand[h] = -first_net;
    else if (first_net > 0)
      c.suppliers.push_back({h, 0, 0, first_net});
    for (size_t l = 1; l < list.size(); ++l) {
      int64_t cap = list[l].net - list[l - 1].net;
      require(cap > 0, ErrorKind::internal, "canonical nets must increase");
      c.suppliers.push_back({h, int(l), list[l].cost, cap});
    }
  }
  return c;
}

std::vector<int> lift_cfl_to_tcsd(
    const std::vector<std::vector<CanonicalPair>>& canon, const CflInstance& cfl,
    const CflSolution& sol) {
  std::vector<int> choice(canon.size(), 0);
  for (int idx : sol.open) {
    const CflSupplier& s = cfl.suppliers.at(idx);
    choice[s.loc] = std::max(choice[s.loc], s.level);
  }
  return choice;
}

PartialSolution lift_tcsd_to_lbflp(const TcsdInstance& t, const PenaltyStage& ps,
                                   const std::vector<int>& raw_choice,
                                   const TransportPlan& plan) {
  const FacilityAggregation& agg = ps.agg;
  const LbflInstance& b = agg.inst;
  int k = int(t.hubs.size()), nc = b.nc();

  std::vector<std::vector<int>> locals(k);
  std::vector<int> hub_index(b.nf(), -1);
  for (int h = 0; h < k; ++h) hub_index[t.hubs[h]] = h;
  for (int j = 0; j < nc; ++j) {
    int h = hub_index[agg.client_hub[j]];
    require(h >= 0, ErrorKind::internal, "client at an unknown hub");
    locals[h].push_back(j);
  }
  for (auto& list : locals)
    std::sort(list.begin(), list.end(),
              [&](int a, int c) { return b.clients[a] < b.clients[c]; });

  PartialSolution out;
  out.assign.assign(nc, -1);
  std::vector<std::vector<int>> available(k);
  std::vector<int> open_at(k, -1);
  for (int h = 0; h < k; ++h) {
    const TcsdPair& pair = t.options[h].at(raw_choice[h]);
    if (pair.source < 0) {
      available[h] = locals[h];
      continue;
    }
    int i = pair.source;
    out.open.push_back(i);
    open_at[h] = i;
    int64_t take = std::min<int64_t>(t.count[h], b.facilities[i].lower_bound);
    for (int64_t idx = 0; idx < int64_t(locals[h].size()); ++idx) {
      if (idx < take)
        out.assign[locals[h][idx]] = i;
      else
        available[h].push_back(locals[h][idx]);
    }
  }
  for (const Shipment& ship : plan.shipments) {
    require(ship.from >= 0 && ship.from < k && ship.to >= 0 && ship.to < k,
            ErrorKind::internal, "shipment between unknown hubs");
    require(open_at[ship.to] >= 0, ErrorKind::internal,
            "units shipped to a hub with no open facility");
    require(int64_t(available[ship.from].size()) >= ship.units,
            ErrorKind::internal, "shipment exceeds the source hub's spare clients");
    for (int64_t u = 0; u < ship.units; ++u) {
      out.assign[available[ship.from].front()] = open_at[ship.to];
      available[ship.from].erase(available[ship.from].begin());
    }
  }
  std::sort(out.open.begin(), out.open.end());
  return out;
}

PosSolution reconnect_unserved(const PenaltyStage& ps, const PartialSolution& in) {
  const FacilityAggregation& agg = ps.agg;
  const LbflInstance& b = agg.inst;
  int k = int(agg.hubs.size()), nc = b.nc();
  cost_lbflp(ps, in);  // validates the input solution

  std::vector<int> hub_index(b.nf(), -1);
  for (int h = 0; h < k; ++h) hub_index[agg.hubs[h]] = h;

  std::vector<int> open_at(k, -1);
  for (int i : in.open) open_at[agg.ball_of[i]] = i;
  std::vector<char> originally_open(k, 0);
  for (int h = 0; h < k; ++h) originally_open[h] = open_at[h] >= 0;

  std::vector<int> assign = in.assign;
  std::vector<int> opens = in.open;
  std::vector<std::vector<int>> pending(k);
  for (int j = 0; j < nc; ++j)
    if (assign[j] < 0) pending[hub_index[agg.client_hub[j]]].push_back(j);
  auto client_order = [&](int a, int c) { return b.clients[a] < b.clients[c]; };
  for (auto& list : pending) std::sort(list.begin(), list.end(), client_order);

  // Stray clients at hubs that already host an open facility join it.
  for (int h = 0; h < k; ++h) {
    if (open_at[h] < 0) continue;
    for (int j : pending[h]) assign[j] = open_at[h];
    pending[h].clear();
  }

  auto hub_dist = [&](int h, int g) { return b.d_ff(agg.hubs[h], agg.hubs[g]); };
  auto hub_id = [&](int h) { return b.facilities[agg.hubs[h]].id; };
  auto hub_bound = [&](int h) { return b.facilities[agg.hubs[h]].lower_bound; };

  // Nearest-neighbor pointer of every closed hub, ties by facility id.
  std::vector<int> next(k, -1);
  for (int h = 0; h < k; ++h) {
    if (open_at[h] >= 0) continue;
    int pick = -1;
    for (int g = 0; g < k; ++g) {
      if (g == h) continue;
      if (pick < 0 || hub_dist(h, g) < hub_dist(h, pick) ||
          (hub_dist(h, g) == hub_dist(h, pick) && hub_id(g) < hub_id(pick)))
        pick = g;
    }
    require(pick >= 0 && hub_dist(h, pick) == agg.radius[h], ErrorKind::internal,
            "nearest-neighbor pointer disagrees with the hub radius");
    next[h] = pick;
  }

  // Each weakly-connected component is an in-tree rooted at an open hub, or
  // an in-tree whose root closes a 2-cycle; consistent tie-breaking rules out
  // longer cycles (checked below). parent[] rewires each 2-cycle into a tree
  // rooted at the member with the smaller (lower bound, id).
  std::vector<int> parent(k, -1);
  std::vector<int> cycle_partner(k, -1);
  for (int h = 0; h < k; ++h)
    if (open_at[h] < 0) parent[h] = next[h];
  for (int h = 0; h < k; ++h) {
    int g = next[h];
    if (open_at[h] >= 0 || g < 0 || open_at[g] >= 0 || next[g] != h) continue;
    int r = h, partner = g;
    if (std::pair(hub_bound(g), hub_id(g)) < std::pair(hub_bound(h), hub_id(h))) {
      r = g;
      partner = h;
    }
    parent[r] = -1;
    cycle_partner[r] = partner;
  }
  std::vector<int> depth(k, -1);
  for (int h = 0; h < k; ++h) {
    int steps = 0, cur = h;
    while (parent[cur] >= 0 && steps <= k) {
      cur = parent[cur];
      ++steps;
    }
    require(steps <= k, ErrorKind::internal,
            "nearest-neighbor graph has a cycle longer than two");
    depth[h] = steps;
  }

  std::vector<int> order(k);
  for (int h = 0; h < k; ++h) order[h] = h;
  std::sort(order.begin(), order.end(), [&](int a, int c) {
    if (depth[a] != depth[c]) return depth[a] > depth[c];
    return a < c;
  });

  auto open_free_hub = [&](int h) {
    int fac = agg.hubs[h];
    opens.push_back(fac);
    open_at[h] = fac;
    for (int j : pending[h]) assign[j] = fac;
    pending[h].clear();
  };
  auto move_pending = [&](int from, int to) {
    for (int j : pending[from]) pending[to].push_back(j);
    pending[from].clear();
    std::sort(pending[to].begin(), pending[to].end(), client_order);
  };

  for (int h : order) {
    if (parent[h] < 0 || open_at[h] >= 0) continue;  // roots handled below
    if (!pending[h].empty() && int64_t(pending[h].size()) >= hub_bound(h))
      open_free_hub(h);
    else
      move_pending(h, parent[h]);
  }

  for (int r = 0; r < k; ++r) {
    if (parent[r] >= 0) continue;
    if (originally_open[r]) {  // in-tree rooted at an open hub
      for (int j : pending[r]) assign[j] = open_at[r];
      pending[r].clear();
      continue;
    }
    if (cycle_partner[r] < 0) continue;  // not a component root
    int partner = cycle_partner[r];
    if (pending[r].empty()) continue;
    if (int64_t(pending[r].size()) >= hub_bound(r)) {
      open_free_hub(r);
      continue;
    }
    if (open_at[partner] >= 0) {
      for (int j : pending[r]) assign[j] = open_at[partner];
      pending[r].clear();
      continue;
    }
    int star = -1;
    for (int h = 0; h < k; ++h) {
      if (!originally_open[h]) continue;
      int64_t dh = std::min(hub_dist(h, r), hub_dist(h, partner));
      if (star < 0) {
        star = h;
        continue;
      }
      int64_t ds = std::min(hub_dist(star, r), hub_dist(star, partner));
      if (dh < ds || (dh == ds && hub_id(h) < hub_id(star))) star = h;
    }
    require(star >= 0, ErrorKind::infeasible,
            "no open hub can absorb the remaining unconnected clients");
    for (int j : pending[r]) assign[j] = open_at[star];
    pending[r].clear();
  }

  PosSolution out;
  out.open = std::move(opens);
  std::sort(out.open.begin(), out.open.end());
  out.assign = std::move(assign);

  std::vector<int64_t> served(b.nf(), 0);
  for (int j = 0; j < nc; ++j) {
    require(out.assign[j] >= 0, ErrorKind::internal,
            "reconnect left a client unconnected");
    served[out.assign[j]]++;
  }
  for (int i : out.open)
    require(served[i] >= b.facilities[i].lower_bound, ErrorKind::internal,
            "reconnect broke a lower bound");
  return out;
}

RecostResult recost_down(const LbflInstance& base, const ClientAggregation& ca,
                         const FacilityAggregation& fa, const PosSolution& sol) {
  RecostResult r;
  r.aggregated = eval_pos(fa.inst, sol);
  r.relocated = eval_pos(ca.inst, sol);
  r.original = eval_pos(base, sol);
  r.unfold_factor_ok = 2 * r.relocated.total() <= 3 * r.aggregated.total();

  int64_t hub_costs = 0;
  for (int h : ca.hubs) hub_costs += base.facilities[h].open_cost;
  int64_t stage1_conn = 0;
  for (int j = 0; j < base.nc(); ++j)
    stage1_conn += base.d_fc(ca.client_hub[j], j);
  r.unfold_additive_ok =
      r.original.total() <= r.relocated.total() + hub_costs + stage1_conn;
  return r;
}

bool client_move_bound_ok(const LbflInstance& base, const ClientAggregation& ca,
                          const PosSolution& sol) {
  int64_t moved = eval_pos(ca.inst, sol).connection_cost;
  int64_t plain = eval_pos(base, sol).connection_cost;
  int64_t stage1_conn = 0;
  for (int j = 0; j < base.nc(); ++j)
    stage1_conn += base.d_fc(ca.client_hub[j], j);
  int64_t diff = moved > plain ? moved - plain : plain - moved;
  return diff <= stage1_conn;
}

}  // namespace lbfl
