#include "lbfl/generate.hpp"

#include <algorithm>
#include <random>

namespace lbfl {

namespace {

// mt19937_64 is fully specified by the standard, and the modulo draw keeps
// results identical across platforms; the bias is irrelevant here.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  int64_t bounded(int64_t lo, int64_t hi) {  // inclusive range
    if (hi <= lo) return lo;
    return lo + int64_t(eng() % uint64_t(hi - lo + 1));
  }
};

}  // namespace

MetricFamily parse_family(const std::string& name) {
  if (name == "line") return MetricFamily::line;
  if (name == "plane") return MetricFamily::plane;
  if (name == "graph") return MetricFamily::graph;
  throw LbflError(ErrorKind::malformed_input, "unknown metric family: " + name);
}

std::string family_name(MetricFamily f) {
  switch (f) {
    case MetricFamily::line: return "line";
    case MetricFamily::plane: return "plane";
    case MetricFamily::graph: return "graph";
  }
  return "?";
}

LbflInstance generate_instance(uint64_t seed, const GenProfile& profile) {
  Rng rng(seed);
  LbflInstance inst;
  inst.scale = profile.scale;
  int nf = profile.n_facilities, nc = profile.n_clients;
  int n = nf + nc;

  for (int i = 0; i < nf; ++i) {
    Facility f;
    f.id = i;
    f.open_cost = rng.bounded(profile.cost_min, profile.cost_max);
    int64_t lb_hi = profile.lb_max;
    if (profile.cap_lb_to_clients) lb_hi = std::min<int64_t>(lb_hi, nc);
    f.lower_bound = rng.bounded(std::min(profile.lb_min, lb_hi), lb_hi);
    inst.facilities.push_back(f);
  }
  for (int j = 0; j < nc; ++j) inst.clients.push_back(nf + j);

  inst.dist = SquareMatrix::zeros(n);
  if (profile.family == MetricFamily::graph) {
    if (n > 0) {
      // Random spanning tree plus extra edges, then shortest-path closure.
      constexpr int64_t inf = INT64_MAX / 4;
      SquareMatrix w = SquareMatrix::zeros(n);
      for (auto& v : w.cell) v = inf;
      for (int i = 0; i < n; ++i) w.at(i, i) = 0;
      auto add_edge = [&](int a, int b, int64_t weight) {
        w.at(a, b) = std::min(w.at(a, b), weight);
        w.at(b, a) = w.at(a, b);
      };
      for (int i = 1; i < n; ++i)
        add_edge(i, int(rng.bounded(0, i - 1)),
                 rng.bounded(profile.edge_w_min, profile.edge_w_max));
      int extra = profile.graph_extra_edges >= 0 ? profile.graph_extra_edges : n;
      for (int e = 0; e < extra && n >= 2; ++e) {
        int a = int(rng.bounded(0, n - 1));
        int b = int(rng.bounded(0, n - 1));
        if (a != b) add_edge(a, b, rng.bounded(profile.edge_w_min, profile.edge_w_max));
      }
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            w.at(a, b) = std::min(w.at(a, b), w.at(a, k) + w.at(k, b));
      inst.dist = w;
    }
  } else {
    std::vector<std::array<int64_t, 2>> pts(n);
    for (int k = 0; k < n; ++k) {
      pts[k][0] = rng.bounded(0, profile.coord_range);
      pts[k][1] = profile.family == MetricFamily::plane
                      ? rng.bounded(0, profile.coord_range)
                      : 0;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        inst.dist.at(a, b) = std::abs(pts[a][0] - pts[b][0]) +
                             std::abs(pts[a][1] - pts[b][1]);
    inst.points = std::move(pts);
  }
  return inst;
}

}  // namespace lbfl
