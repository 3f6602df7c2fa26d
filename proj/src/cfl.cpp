#include "lbfl/cfl.hpp"

#include <algorithm>

namespace lbfl {

std::optional<CflSolution> eval_open_set(const CflInstance& inst,
                                         const std::vector<int>& open) {
  int k = int(inst.hubs.size());
  std::vector<int64_t> supply(k, 0);
  int64_t opening = 0, capacity = 0, demand = 0;
  for (int idx : open) {
    const CflSupplier& s = inst.suppliers.at(idx);
    supply[s.loc] += s.capacity;
    opening += s.cost;
    capacity += s.capacity;
  }
  for (int64_t d : inst.demand) demand += d;
  if (capacity < demand) return std::nullopt;

  TransportProblem tp;
  tp.net.resize(k);
  for (int h = 0; h < k; ++h) {
    tp.nodes.push_back(h);
    tp.net[h] = supply[h] - inst.demand[h];
  }
  tp.dist = inst.hub_dist;

  CflSolution out;
  out.open = open;
  std::sort(out.open.begin(), out.open.end());
  out.plan = solve_transport(tp);
  out.opening_cost = opening;
  out.total = opening + out.plan.cost;
  return out;
}

CflSearchResult local_search(const CflInstance& inst,
                             const CflSearchOptions& opts) {
  int m = int(inst.suppliers.size());
  std::vector<int> open(m);
  for (int i = 0; i < m; ++i) open[i] = i;
  auto cur = eval_open_set(inst, open);
  require(bool(cur), ErrorKind::infeasible,
          "total supplier capacity cannot cover the demand");

  CflSearchResult res;
  if (m == 0) {
    res.best = *cur;
    return res;
  }

  std::vector<char> is_open(m, 1);
  auto accepts = [&](int64_t gain) {
    // gain > eps * current / m, compared exactly.
    return (__int128)gain * m * opts.eps.den() >
           (__int128)opts.eps.num() * cur->total;
  };

  while (res.moves < opts.max_iters) {
    int64_t best_gain = 0;
    std::optional<CflSolution> best_sol;
    auto try_set = [&](std::vector<int> candidate) {
      auto eval = eval_open_set(inst, candidate);
      if (!eval) return;
      int64_t gain = cur->total - eval->total;
      if (gain > best_gain && accepts(gain)) {
        best_gain = gain;
        best_sol = std::move(eval);
      }
    };
    for (int s = 0; s < m; ++s) {  // drops
      if (!is_open[s]) continue;
      std::vector<int> cand;
      for (int i : open)
        if (i != s) cand.push_back(i);
      try_set(std::move(cand));
    }
    for (int s = 0; s < m; ++s) {  // adds
      if (is_open[s]) continue;
      std::vector<int> cand = open;
      cand.push_back(s);
      try_set(std::move(cand));
    }
    for (int s = 0; s < m; ++s) {  // swaps: close s, open s2
      if (!is_open[s]) continue;
      for (int s2 = 0; s2 < m; ++s2) {
        if (is_open[s2]) continue;
        std::vector<int> cand;
        for (int i : open)
          if (i != s) cand.push_back(i);
        cand.push_back(s2);
        try_set(std::move(cand));
      }
    }
    if (!best_sol) break;
    cur = std::move(best_sol);
    open = cur->open;
    std::fill(is_open.begin(), is_open.end(), 0);
    for (int i : open) is_open[i] = 1;
    res.moves++;
  }
  res.hit_iteration_cap = res.moves >= opts.max_iters;
  res.best = *cur;
  return res;
}

}  // namespace lbfl
