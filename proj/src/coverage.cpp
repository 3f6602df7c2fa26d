#include "lbfl/coverage.hpp"

#include <algorithm>
#include <limits>

namespace lbfl {

UflAugmented build_ufl_instance(const LbflInstance& inst, Rational beta) {
  require(Rational(1, 2) < beta && beta < Rational(1), ErrorKind::malformed_input,
          "coverage parameter must lie strictly between 1/2 and 1");
  Rational coef = Rational(2) * beta / (Rational(1) - beta);

  UflAugmented aug;
  aug.beta = beta;
  aug.stage_scale = coef.den();
  aug.base = scale_instance(inst, aug.stage_scale);
  aug.surcharged_cost.assign(inst.nf(), -1);
  aug.nearest.resize(inst.nf());

  int nc = inst.nc();
  for (int i = 0; i < inst.nf(); ++i) {
    const Facility& f = inst.facilities[i];
    if (f.lower_bound > nc) continue;  // can never be opened feasibly
    std::vector<std::pair<int64_t, int>> order;
    order.reserve(nc);
    for (int j = 0; j < nc; ++j)
      order.emplace_back(aug.base.d_fc(i, j), inst.clients[j]);
    std::sort(order.begin(), order.end());
    int64_t nearest_sum = 0;
    for (int64_t k = 0; k < f.lower_bound; ++k) {
      int j = aug.base.client_pos(order[k].second);
      aug.nearest[i].push_back(j);
      nearest_sum += order[k].first;
    }
    // nearest_sum is stage_scale-divisible by construction of base.
    require(nearest_sum % coef.den() == 0, ErrorKind::internal,
            "surcharge divisibility lost");
    aug.surcharged_cost[i] =
        aug.base.facilities[i].open_cost + coef.num() * (nearest_sum / coef.den());
    aug.pool.push_back(i);
  }
  return aug;
}

int64_t ufl_cost(const UflAugmented& aug, const std::vector<int>& open_pos) {
  require(!open_pos.empty() || aug.base.nc() == 0, ErrorKind::internal,
          "ufl_cost of an empty set with clients present");
  int64_t total = 0;
  for (int i : open_pos) {
    require(aug.surcharged_cost[i] >= 0, ErrorKind::internal,
            "facility outside the openable pool");
    total += aug.surcharged_cost[i];
  }
  for (int j = 0; j < aug.base.nc(); ++j) {
    int64_t best = std::numeric_limits<int64_t>::max();
    for (int i : open_pos) best = std::min(best, aug.base.d_fc(i, j));
    total += best;
  }
  return total;
}

namespace {

// One simulation event: either a closed facility becomes fully paid, or an
// unconnected client reaches an open facility. Ordering is (time, kind, id)
// with facility openings first, ids taken from the instance.
struct Event {
  bool valid = false;
  Rational time;
  int kind = 0;  // 0 = open facility, 1 = connect client
  int id = 0;
  int pos = 0;
};

void consider(Event& best, const Rational& t, int kind, int id, int pos) {
  if (best.valid) {
    if (t > best.time) return;
    if (t == best.time &&
        (kind > best.kind || (kind == best.kind && id >= best.id)))
      return;
  }
  best = {true, t, kind, id, pos};
}

}  // namespace

std::vector<int> solve_ufl_greedy(const UflAugmented& aug) {
  const LbflInstance& b = aug.base;
  int nc = b.nc();
  if (nc == 0) return {};
  require(!aug.pool.empty(), ErrorKind::infeasible,
          "no facility can serve the clients");

  std::vector<int> conn(nc, -1);
  std::vector<int64_t> cdist(nc, 0);
  std::vector<char> opened(b.nf(), 0);
  Rational now(0);
  int unconnected = nc;

  while (unconnected > 0) {
    Event next;
    for (int i : aug.pool) {
      if (opened[i]) continue;
      int64_t fixed = 0;
      std::vector<int64_t> ds;
      for (int j = 0; j < nc; ++j) {
        int64_t dij = b.d_fc(i, j);
        if (conn[j] >= 0) {
          if (cdist[j] > dij) fixed += cdist[j] - dij;
        } else {
          ds.push_back(dij);
        }
      }
      int64_t need = aug.surcharged_cost[i] - fixed;
      if (need <= 0) {
        consider(next, now, 0, b.facilities[i].id, i);
        continue;
      }
      std::sort(ds.begin(), ds.end());
      int64_t prefix = 0;
      for (size_t k = 1; k <= ds.size(); ++k) {
        prefix += ds[k - 1];
        Rational t(need + prefix, int64_t(k));
        if (k < ds.size() && t > Rational(ds[k])) continue;
        require(t >= Rational(ds[k - 1]), ErrorKind::internal,
                "offer sweep left its segment");
        consider(next, t < now ? now : t, 0, b.facilities[i].id, i);
        break;
      }
    }
    for (int j = 0; j < nc; ++j) {
      if (conn[j] >= 0) continue;
      int64_t best = -1;
      for (int i : aug.pool)
        if (opened[i] && (best < 0 || b.d_fc(i, j) < best)) best = b.d_fc(i, j);
      if (best >= 0) consider(next, Rational(best), 1, b.clients[j], j);
    }
    require(next.valid, ErrorKind::internal, "greedy stalled with clients left");
    now = next.time;

    if (next.kind == 0) {
      int i = next.pos;
      opened[i] = 1;
      for (int j = 0; j < nc; ++j) {
        int64_t dij = b.d_fc(i, j);
        if (conn[j] < 0) {
          if (Rational(dij) <= now) {
            conn[j] = i;
            cdist[j] = dij;
            --unconnected;
          }
        } else if (dij < cdist[j]) {
          conn[j] = i;
          cdist[j] = dij;
        }
      }
    } else {
      int j = next.pos;
      int pick = -1;
      for (int i : aug.pool) {
        if (!opened[i]) continue;
        if (pick < 0 || b.d_fc(i, j) < b.d_fc(pick, j) ||
            (b.d_fc(i, j) == b.d_fc(pick, j) &&
             b.facilities[i].id < b.facilities[pick].id))
          pick = i;
      }
      require(pick >= 0 && Rational(b.d_fc(pick, j)) == now, ErrorKind::internal,
              "connect event out of sync");
      conn[j] = pick;
      cdist[j] = b.d_fc(pick, j);
      --unconnected;
    }
  }

  std::vector<int> out;
  for (int i = 0; i < b.nf(); ++i)
    if (opened[i]) out.push_back(i);
  return out;
}

std::vector<int> prune_by_closing(const UflAugmented& aug, std::vector<int> s) {
  const LbflInstance& b = aug.base;
  auto by_id = [&](int x, int y) {
    return b.facilities[x].id < b.facilities[y].id;
  };
  std::sort(s.begin(), s.end(), by_id);

  bool removed = true;
  while (removed) {
    removed = false;
    std::vector<int> scan = s;
    for (int i : scan) {
      if (b.nc() > 0 && s.size() <= 1) break;
      auto it = std::find(s.begin(), s.end(), i);
      if (it == s.end()) continue;
      std::vector<int> without = s;
      without.erase(std::find(without.begin(), without.end(), i));
      int64_t with_cost = ufl_cost(aug, s);
      if (without.empty() && b.nc() > 0) continue;
      if (ufl_cost(aug, without) <= with_cost) {
        s = std::move(without);
        removed = true;
      }
    }
  }
  return s;
}

BetaCoveredSolution beta_covered(const LbflInstance& inst, Rational beta) {
  BetaCoveredSolution out;
  out.beta = beta;
  if (inst.nc() == 0) return out;

  UflAugmented aug = build_ufl_instance(inst, beta);
  require(!aug.pool.empty(), ErrorKind::infeasible,
          "every facility has a lower bound above the client count");
  std::vector<int> s = prune_by_closing(aug, solve_ufl_greedy(aug));
  require(!s.empty(), ErrorKind::internal, "pruning emptied the open set");

  // Nearest-hub assignment, ties by facility id.
  int nc = inst.nc();
  std::vector<int> assign(nc, -1);
  for (int j = 0; j < nc; ++j) {
    int pick = -1;
    for (int i : s) {
      if (pick < 0 || inst.d_fc(i, j) < inst.d_fc(pick, j) ||
          (inst.d_fc(i, j) == inst.d_fc(pick, j) &&
           inst.facilities[i].id < inst.facilities[pick].id))
        pick = i;
    }
    assign[j] = pick;
  }

  // Merge collocated members (zero distance is transitive in a pseudometric):
  // keep the lowest facility id of each group and redirect its clients.
  std::vector<int> keeper(s.size());
  for (size_t a = 0; a < s.size(); ++a) {
    int best = s[a];
    for (size_t c = 0; c < s.size(); ++c)
      if (inst.d_ff(s[a], s[c]) == 0 &&
          inst.facilities[s[c]].id < inst.facilities[best].id)
        best = s[c];
    keeper[a] = best;
  }
  std::vector<int> redirect(inst.nf(), -1);
  for (size_t a = 0; a < s.size(); ++a) redirect[s[a]] = keeper[a];
  for (int j = 0; j < nc; ++j) assign[j] = redirect[assign[j]];

  std::vector<int> hubs;
  for (size_t a = 0; a < s.size(); ++a)
    if (keeper[a] == s[a]) hubs.push_back(s[a]);
  std::sort(hubs.begin(), hubs.end(), [&](int x, int y) {
    return inst.facilities[x].id < inst.facilities[y].id;
  });

  std::vector<int64_t> count(hubs.size(), 0);
  for (int j = 0; j < nc; ++j) {
    auto it = std::find(hubs.begin(), hubs.end(), assign[j]);
    require(it != hubs.end(), ErrorKind::internal, "assignment escaped hubs");
    count[it - hubs.begin()]++;
  }

  // Re-verify, not assume: coverage and pairwise-positive distances.
  for (size_t h = 0; h < hubs.size(); ++h) {
    int64_t b = inst.facilities[hubs[h]].lower_bound;
    require(Rational(count[h]) >= beta * Rational(b),
            ErrorKind::internal, "coverage lost after merging");
    for (size_t g = h + 1; g < hubs.size(); ++g)
      require(inst.d_ff(hubs[h], hubs[g]) > 0, ErrorKind::internal,
              "collocated hubs survived the merge");
  }

  out.hubs = std::move(hubs);
  out.assign = std::move(assign);
  out.count = std::move(count);
  return out;
}

}  // namespace lbfl
