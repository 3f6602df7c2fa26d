#include "lbfl/instance.hpp"

#include <algorithm>
#include <unordered_map>

namespace lbfl {

int LbflInstance::facility_pos(int id) const {
  for (int i = 0; i < nf(); ++i)
    if (facilities[i].id == id) return i;
  return -1;
}

int LbflInstance::client_pos(int id) const {
  for (int j = 0; j < nc(); ++j)
    if (clients[j] == id) return j;
  return -1;
}

std::string MetricViolation::describe() const {
  switch (kind) {
    case ViolationKind::asymmetry:
      return "d(" + std::to_string(a) + "," + std::to_string(b) +
             ") != d(" + std::to_string(b) + "," + std::to_string(a) + ")";
    case ViolationKind::diagonal:
      return "d(" + std::to_string(a) + "," + std::to_string(a) + ") != 0";
    case ViolationKind::triangle:
      return "d(" + std::to_string(a) + "," + std::to_string(c) + ") > d(" +
             std::to_string(a) + "," + std::to_string(b) + ") + d(" +
             std::to_string(b) + "," + std::to_string(c) + ")";
  }
  return "?";
}

std::vector<MetricViolation> validate_metric(const SquareMatrix& d) {
  require(size_t(d.n) * size_t(d.n) == d.cell.size(), ErrorKind::malformed_input,
          "distance matrix is not square");
  for (int64_t v : d.cell)
    require(v >= 0, ErrorKind::malformed_input, "negative distance entry");

  std::vector<MetricViolation> out;
  for (int a = 0; a < d.n; ++a) {
    if (d.at(a, a) != 0) out.push_back({ViolationKind::diagonal, a, a, a});
    for (int b = a + 1; b < d.n; ++b)
      if (d.at(a, b) != d.at(b, a))
        out.push_back({ViolationKind::asymmetry, a, b, 0});
  }
  for (int a = 0; a < d.n; ++a)
    for (int b = 0; b < d.n; ++b) {
      if (b == a) continue;
      for (int c = 0; c < d.n; ++c) {
        if (c == a || c == b) continue;
        if (d.at(a, c) > d.at(a, b) + d.at(b, c))
          out.push_back({ViolationKind::triangle, a, b, c});
      }
    }
  return out;
}

namespace {

// Resolves the id-addressed solution against the instance, throwing on any
// structural problem.
struct Resolved {
  std::vector<int> open_pos;
  std::vector<int> assign_pos;  // client pos -> facility pos
};

Resolved resolve(const LbflInstance& inst, const LbflSolution& sol) {
  std::unordered_map<int, int> fpos, cpos;
  for (int i = 0; i < inst.nf(); ++i) fpos[inst.facilities[i].id] = i;
  for (int j = 0; j < inst.nc(); ++j) cpos[inst.clients[j]] = j;

  Resolved r;
  std::vector<char> is_open(inst.nf(), 0);
  for (int id : sol.open) {
    auto it = fpos.find(id);
    require(it != fpos.end(), ErrorKind::invalid_solution,
            "unknown facility id in open set: " + std::to_string(id));
    if (!is_open[it->second]) {
      is_open[it->second] = 1;
      r.open_pos.push_back(it->second);
    }
  }
  std::sort(r.open_pos.begin(), r.open_pos.end());

  r.assign_pos.assign(inst.nc(), -1);
  for (const auto& [cid, fid] : sol.assign) {
    auto ci = cpos.find(cid);
    require(ci != cpos.end(), ErrorKind::invalid_solution,
            "unknown client id in assignment: " + std::to_string(cid));
    auto fi = fpos.find(fid);
    require(fi != fpos.end(), ErrorKind::invalid_solution,
            "unknown facility id in assignment: " + std::to_string(fid));
    require(is_open[fi->second], ErrorKind::invalid_solution,
            "client " + std::to_string(cid) + " assigned to closed facility " +
                std::to_string(fid));
    require(r.assign_pos[ci->second] == -1, ErrorKind::invalid_solution,
            "client assigned twice: " + std::to_string(cid));
    r.assign_pos[ci->second] = fi->second;
  }
  for (int j = 0; j < inst.nc(); ++j)
    require(r.assign_pos[j] != -1, ErrorKind::invalid_solution,
            "client not assigned: " + std::to_string(inst.clients[j]));
  return r;
}

}  // namespace

CostBreakdown cost_of(const LbflInstance& inst, const LbflSolution& sol) {
  Resolved r = resolve(inst, sol);
  CostBreakdown cb;
  for (int i : r.open_pos) cb.facility_cost += inst.facilities[i].open_cost;
  for (int j = 0; j < inst.nc(); ++j)
    cb.connection_cost += inst.d_fc(r.assign_pos[j], j);
  return cb;
}

std::vector<LowerBoundShortfall> lower_bound_shortfalls(const LbflInstance& inst,
                                                        const LbflSolution& sol) {
  Resolved r = resolve(inst, sol);
  std::vector<int64_t> served(inst.nf(), 0);
  for (int j = 0; j < inst.nc(); ++j) served[r.assign_pos[j]]++;
  std::vector<LowerBoundShortfall> out;
  for (int i : r.open_pos) {
    const Facility& f = inst.facilities[i];
    if (served[i] < f.lower_bound)
      out.push_back({f.id, f.lower_bound, served[i]});
  }
  return out;
}

LbflSolution to_ids(const LbflInstance& inst, const PosSolution& sol) {
  LbflSolution out;
  for (int i : sol.open) out.open.push_back(inst.facilities[i].id);
  std::sort(out.open.begin(), out.open.end());
  for (int j = 0; j < inst.nc(); ++j)
    if (sol.assign[j] >= 0)
      out.assign.emplace_back(inst.clients[j], inst.facilities[sol.assign[j]].id);
  std::sort(out.assign.begin(), out.assign.end());
  return out;
}

PosSolution to_positions(const LbflInstance& inst, const LbflSolution& sol) {
  Resolved r = resolve(inst, sol);
  return PosSolution{std::move(r.open_pos), std::move(r.assign_pos)};
}

CostBreakdown eval_pos(const LbflInstance& inst, const PosSolution& sol) {
  CostBreakdown cb;
  for (int i : sol.open) cb.facility_cost += inst.facilities[i].open_cost;
  for (int j = 0; j < inst.nc(); ++j) {
    require(sol.assign[j] >= 0 && sol.assign[j] < inst.nf(), ErrorKind::internal,
            "positional solution leaves a client unassigned");
    cb.connection_cost += inst.d_fc(sol.assign[j], j);
  }
  return cb;
}

LbflInstance scale_instance(const LbflInstance& inst, int64_t k) {
  require(k >= 1, ErrorKind::internal, "scale factor must be positive");
  LbflInstance out = inst;
  for (auto& v : out.dist.cell) v *= k;
  for (auto& f : out.facilities) f.open_cost *= k;
  out.points.reset();  // coordinates no longer match the metric units
  return out;
}

LbflInstance restrict_facilities(const LbflInstance& inst,
                                 const std::vector<int>& keep_pos) {
  LbflInstance out;
  out.scale = inst.scale;
  out.clients = inst.clients;
  for (int i : keep_pos) out.facilities.push_back(inst.facilities[i]);
  int m = int(keep_pos.size()) + inst.nc();
  out.dist = SquareMatrix::zeros(m);
  auto old_pt = [&](int k) {
    return k < int(keep_pos.size()) ? keep_pos[k] : inst.nf() + (k - int(keep_pos.size()));
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.dist.at(a, b) = inst.dist.at(old_pt(a), old_pt(b));
  return out;
}

}  // namespace lbfl
