#include "lbfl/oracle.hpp"

#include <algorithm>
#include <limits>

#include "lbfl/flow.hpp"

namespace lbfl {

namespace {
constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
}

std::optional<std::pair<PosSolution, int64_t>> brute_lbfl(
    const LbflInstance& inst, const OracleLimits& limits) {
  int nf = inst.nf(), nc = inst.nc();
  require(nf <= limits.max_facilities, ErrorKind::size_guard,
          "brute_lbfl guard: " + std::to_string(nf) + " facilities > " +
              std::to_string(limits.max_facilities));
  if (nc == 0) return std::pair<PosSolution, int64_t>{PosSolution{{}, {}}, 0};

  std::optional<std::pair<PosSolution, int64_t>> best;
  for (uint32_t mask = 1; mask < (1u << nf); ++mask) {
    std::vector<int> open;
    int64_t fcost = 0, bsum = 0;
    for (int i = 0; i < nf; ++i)
      if (mask >> i & 1) {
        open.push_back(i);
        fcost += inst.facilities[i].open_cost;
        bsum += inst.facilities[i].lower_bound;
      }
    if (bsum > nc) continue;
    auto assigned = assign_with_lower_bounds(inst, open);
    require(bool(assigned), ErrorKind::internal, "feasible subset rejected");
    int64_t total = fcost + assigned->connection_cost;
    if (!best || total < best->second)
      best = {PosSolution{std::move(open), std::move(assigned->assign)}, total};
  }
  return best;
}

std::pair<std::vector<int>, int64_t> brute_ufl(const UflAugmented& aug,
                                               const OracleLimits& limits) {
  int m = int(aug.pool.size());
  require(m <= limits.max_facilities, ErrorKind::size_guard,
          "brute_ufl guard exceeded");
  require(m > 0 || aug.base.nc() == 0, ErrorKind::infeasible,
          "no openable facility");
  std::vector<int> best_set;
  int64_t best_cost = aug.base.nc() == 0 ? 0 : kInf;
  for (uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> open;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) open.push_back(aug.pool[i]);
    int64_t c = ufl_cost(aug, open);
    if (c < best_cost) {
      best_cost = c;
      best_set = std::move(open);
    }
  }
  return {best_set, best_cost};
}

std::pair<CflSolution, int64_t> brute_cfl(const CflInstance& inst,
                                          const OracleLimits& limits) {
  int m = int(inst.suppliers.size());
  require(m <= limits.max_suppliers, ErrorKind::size_guard,
          "brute_cfl guard exceeded");
  std::optional<CflSolution> best;
  for (uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> open;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) open.push_back(i);
    auto eval = eval_open_set(inst, open);
    if (!eval) continue;
    if (!best || eval->total < best->total) best = std::move(eval);
  }
  require(bool(best), ErrorKind::infeasible, "no feasible supplier subset");
  return {*best, best->total};
}

namespace {

// Odometer over one index per hub; returns false when the space is exhausted.
bool advance(std::vector<int>& idx, const std::vector<int>& sizes) {
  for (size_t h = 0; h < idx.size(); ++h) {
    if (++idx[h] < sizes[h]) return true;
    idx[h] = 0;
  }
  return false;
}

template <typename CostFn>
std::pair<std::vector<int>, int64_t> enumerate_choices(
    const std::vector<int>& sizes, int64_t guard, CostFn&& price) {
  int64_t product = 1;
  for (int s : sizes) {
    product *= std::max(s, 1);
    require(product <= guard, ErrorKind::size_guard,
            "choice-product guard exceeded");
  }
  std::vector<int> idx(sizes.size(), 0), best_idx;
  int64_t best = kInf;
  do {
    int64_t c = price(idx);
    if (c < best) {
      best = c;
      best_idx = idx;
    }
  } while (advance(idx, sizes));
  require(best < kInf, ErrorKind::infeasible, "no feasible choice vector");
  return {best_idx, best};
}

}  // namespace

std::pair<std::vector<int>, int64_t> brute_tcsd(const TcsdInstance& t,
                                                const OracleLimits& limits) {
  std::vector<int> sizes;
  for (const auto& opts : t.options) sizes.push_back(int(opts.size()));
  return enumerate_choices(sizes, limits.max_choice_product,
                           [&](const std::vector<int>& idx) -> int64_t {
                             auto c = tcsd_cost(t, idx);
                             return c ? c->total : kInf;
                           });
}

std::pair<std::vector<int>, int64_t> brute_tcsd_canonical(
    const TcsdInstance& t, const std::vector<std::vector<CanonicalPair>>& canon,
    const OracleLimits& limits) {
  std::vector<int> sizes;
  for (const auto& opts : canon) sizes.push_back(int(opts.size()));
  return enumerate_choices(sizes, limits.max_choice_product,
                           [&](const std::vector<int>& idx) -> int64_t {
                             auto c = tcsd_cost_canonical(t, canon, idx);
                             return c ? c->total : kInf;
                           });
}

std::pair<PartialSolution, int64_t> brute_lbflp(const PenaltyStage& ps,
                                                const OracleLimits& limits) {
  const FacilityAggregation& agg = ps.agg;
  const LbflInstance& b = agg.inst;
  int k = int(agg.hubs.size()), nc = b.nc();
  require(nc <= limits.max_clients_direct, ErrorKind::size_guard,
          "brute_lbflp guard: too many clients for direct enumeration");

  // Open profile: -1 (closed, pay the penalty) or one ball member per hub.
  std::vector<int> sizes;
  for (int h = 0; h < k; ++h) sizes.push_back(int(agg.ball[h].size()) + 1);

  std::optional<std::pair<PartialSolution, int64_t>> best;
  std::vector<int> profile(k, 0);
  do {
    std::vector<int> open;
    int64_t base_cost = 0;
    for (int h = 0; h < k; ++h) {
      if (profile[h] == 0) {
        base_cost += ps.hub_penalty[h];
      } else {
        int i = agg.ball[h][profile[h] - 1];
        open.push_back(i);
        base_cost += b.facilities[i].open_cost;
      }
    }
    // Raw enumeration of assignment vectors over {unconnected} + open.
    int choices = int(open.size()) + 1;
    std::vector<int> assign_idx(nc, 0), sizes_a(nc, choices);
    do {
      std::vector<int64_t> served(open.size(), 0);
      int64_t conn = 0;
      for (int j = 0; j < nc; ++j) {
        if (assign_idx[j] == 0) continue;
        int i = open[assign_idx[j] - 1];
        served[assign_idx[j] - 1]++;
        conn += b.d_fc(i, j);
      }
      bool ok = true;
      for (size_t o = 0; o < open.size(); ++o)
        if (served[o] < b.facilities[open[o]].lower_bound) ok = false;
      if (!ok) continue;
      int64_t total = base_cost + conn;
      if (!best || total < best->second) {
        PartialSolution sol;
        sol.open = open;
        sol.assign.assign(nc, -1);
        for (int j = 0; j < nc; ++j)
          if (assign_idx[j] > 0) sol.assign[j] = open[assign_idx[j] - 1];
        best = {std::move(sol), total};
      }
    } while (advance(assign_idx, sizes_a));
  } while (advance(profile, sizes));

  require(bool(best), ErrorKind::infeasible, "no feasible penalty-stage solution");
  return *best;
}

}  // namespace lbfl
