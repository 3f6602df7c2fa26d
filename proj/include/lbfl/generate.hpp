#pragma once

#include <cstdint>

#include "lbfl/instance.hpp"

namespace lbfl {

enum class MetricFamily { line, plane, graph };

/// Generator parameters. Coordinate families induce the taxicab metric so all
/// distances are exact integers; the graph family uses shortest-path closure
/// of a random connected weighted graph.
struct GenProfile {
  int n_facilities = 5;
  int n_clients = 10;
  MetricFamily family = MetricFamily::plane;
  int64_t coord_range = 100;  // coordinates drawn from [0, coord_range]
  int64_t cost_min = 0;
  int64_t cost_max = 100;
  int64_t lb_min = 0;
  int64_t lb_max = 3;
  bool cap_lb_to_clients = true;  // clamp lower bounds to |C| (feasibility bias)
  int graph_extra_edges = -1;     // -1: one extra edge per node
  int64_t edge_w_min = 1;
  int64_t edge_w_max = 50;
  int64_t scale = 1;
};

MetricFamily parse_family(const std::string& name);
std::string family_name(MetricFamily f);

/// Deterministic for a fixed (seed, profile). Facility ids are 0..nf-1 and
/// client ids nf..nf+nc-1.
LbflInstance generate_instance(uint64_t seed, const GenProfile& profile);

}  // namespace lbfl
