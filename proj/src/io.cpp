#include "lbfl/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

namespace lbfl {

using nlohmann::json;

nlohmann::json instance_to_json(const LbflInstance& inst) {
  json j;
  j["scale"] = inst.scale;
  j["facilities"] = json::array();
  for (const auto& f : inst.facilities)
    j["facilities"].push_back({{"id", f.id},
                               {"cost", f.open_cost},
                               {"lower_bound", f.lower_bound}});
  j["clients"] = json::array();
  for (int id : inst.clients) j["clients"].push_back({{"id", id}});
  if (inst.points) {
    j["points"] = json::array();
    for (const auto& p : *inst.points) j["points"].push_back({p[0], p[1]});
  } else {
    j["dist"] = json::array();
    for (int r = 0; r < inst.dist.n; ++r) {
      json row = json::array();
      for (int c = 0; c < inst.dist.n; ++c) row.push_back(inst.dist.at(r, c));
      j["dist"].push_back(row);
    }
  }
  return j;
}

LbflInstance instance_from_json(const json& j) {
  LbflInstance inst;
  try {
    inst.scale = j.value("scale", int64_t(1));
    require(inst.scale >= 1, ErrorKind::malformed_input, "scale must be >= 1");
    std::set<int> seen;
    for (const auto& jf : j.at("facilities")) {
      Facility f;
      f.id = jf.at("id").get<int>();
      f.open_cost = jf.at("cost").get<int64_t>();
      f.lower_bound = jf.at("lower_bound").get<int64_t>();
      require(f.open_cost >= 0, ErrorKind::malformed_input,
              "negative opening cost for facility " + std::to_string(f.id));
      require(f.lower_bound >= 0, ErrorKind::malformed_input,
              "negative lower bound for facility " + std::to_string(f.id));
      require(seen.insert(f.id).second, ErrorKind::malformed_input,
              "duplicate id: " + std::to_string(f.id));
      inst.facilities.push_back(f);
    }
    for (const auto& jc : j.at("clients")) {
      int id = jc.at("id").get<int>();
      require(seen.insert(id).second, ErrorKind::malformed_input,
              "duplicate id: " + std::to_string(id));
      inst.clients.push_back(id);
    }
    int n = inst.n_points();
    bool has_points = j.contains("points"), has_dist = j.contains("dist");
    require(has_points != has_dist, ErrorKind::malformed_input,
            "instance needs exactly one of 'points' or 'dist'");
    if (has_points) {
      const auto& jp = j.at("points");
      require(int(jp.size()) == n, ErrorKind::malformed_input,
              "points count does not match facilities + clients");
      std::vector<std::array<int64_t, 2>> pts;
      for (const auto& row : jp) {
        require(row.size() == 1 || row.size() == 2, ErrorKind::malformed_input,
                "points must have 1 or 2 coordinates");
        int64_t x = row.at(0).get<int64_t>();
        int64_t y = row.size() == 2 ? row.at(1).get<int64_t>() : 0;
        pts.push_back({x, y});
      }
      inst.dist = SquareMatrix::zeros(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          inst.dist.at(a, b) = std::abs(pts[a][0] - pts[b][0]) +
                               std::abs(pts[a][1] - pts[b][1]);
      inst.points = std::move(pts);
    } else {
      const auto& jd = j.at("dist");
      require(int(jd.size()) == n, ErrorKind::malformed_input,
              "dist row count does not match facilities + clients");
      inst.dist = SquareMatrix::zeros(n);
      for (int r = 0; r < n; ++r) {
        require(int(jd.at(r).size()) == n, ErrorKind::malformed_input,
                "dist row " + std::to_string(r) + " has wrong length");
        for (int c = 0; c < n; ++c) {
          int64_t v = jd.at(r).at(c).get<int64_t>();
          require(v >= 0, ErrorKind::malformed_input,
                  "negative distance at (" + std::to_string(r) + "," +
                      std::to_string(c) + ")");
          inst.dist.at(r, c) = v;
        }
      }
    }
  } catch (const json::exception& e) {
    throw LbflError(ErrorKind::malformed_input,
                    std::string("instance parse error: ") + e.what());
  }
  auto violations = validate_metric(inst.dist);
  if (!violations.empty())
    throw LbflError(ErrorKind::malformed_input,
                    "metric violation: " + violations.front().describe());
  return inst;
}

nlohmann::json solution_to_json(const LbflSolution& sol) {
  json j;
  j["open"] = sol.open;
  json a = json::object();
  for (const auto& [cid, fid] : sol.assign) a[std::to_string(cid)] = fid;
  j["assign"] = a;
  return j;
}

LbflSolution solution_from_json(const json& j) {
  LbflSolution sol;
  try {
    for (const auto& id : j.at("open")) sol.open.push_back(id.get<int>());
    for (const auto& [key, val] : j.at("assign").items())
      sol.assign.emplace_back(std::stoi(key), val.get<int>());
  } catch (const json::exception& e) {
    throw LbflError(ErrorKind::malformed_input,
                    std::string("solution parse error: ") + e.what());
  } catch (const std::logic_error&) {
    throw LbflError(ErrorKind::malformed_input, "bad client id key in assign");
  }
  std::sort(sol.open.begin(), sol.open.end());
  std::sort(sol.assign.begin(), sol.assign.end());
  return sol;
}

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrorKind::malformed_input, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw LbflError(ErrorKind::malformed_input,
                    path + ": " + std::string(e.what()));
  }
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  require(bool(out), ErrorKind::malformed_input, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

LbflInstance load_instance(const std::string& path) {
  return instance_from_json(load_json(path));
}

void save_instance(const LbflInstance& inst, const std::string& path) {
  save_json(instance_to_json(inst), path);
}

LbflSolution load_solution(const std::string& path) {
  return solution_from_json(load_json(path));
}

void save_solution(const LbflSolution& sol, const std::string& path) {
  save_json(solution_to_json(sol), path);
}

}  // namespace lbfl
