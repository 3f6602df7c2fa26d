#include "lbfl/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <sstream>

#include "lbfl/io.hpp"
#include "lbfl/oracle.hpp"

namespace lbfl {

using nlohmann::json;

FactorLedger compute_ledger(Rational beta, int alpha_cfl) {
  FactorLedger l;
  l.alpha_cfl = alpha_cfl;
  l.transport_stage = Rational(4) * Rational(alpha_cfl);
  l.penalty_stage = l.transport_stage;
  Rational two(2), one(1);
  l.facility_stage =
      (two * beta / (two * beta - one) + two / beta) * l.penalty_stage;
  l.client_stage = Rational(4) * l.facility_stage;
  Rational relax = two / (one - beta);
  l.end_to_end = l.client_stage * (one + relax) + relax;
  return l;
}

namespace {

json ledger_json(const FactorLedger& l) {
  return json{{"alpha_cfl", l.alpha_cfl},
              {"transport_stage", l.transport_stage.str()},
              {"penalty_stage", l.penalty_stage.str()},
              {"facility_stage", l.facility_stage.str()},
              {"client_stage", l.client_stage.str()},
              {"end_to_end", l.end_to_end.str()}};
}

// Smallest integer multiplier that keeps every derived coefficient integral:
// the coverage surcharge 2b/(1-b), the facility-move surcharge 2/3, and the
// penalty coefficient (2b-1)/(2b^2).
int64_t pipeline_scale(Rational beta) {
  int64_t p = beta.num(), q = beta.den();
  Rational c1(2 * p, q - p);
  Rational c2(2, 3);
  Rational c3(q * (2 * p - q), 2 * p * p);
  int64_t k = std::lcm(c1.den(), std::lcm(c2.den(), c3.den()));
  require(k <= 1'000'000, ErrorKind::malformed_input,
          "coverage parameter denominator is too large for exact scaling");
  return k;
}

std::string le_detail(int64_t lhs, int64_t rhs) {
  return std::to_string(lhs) + " <= " + std::to_string(rhs);
}

}  // namespace

bool CertificateReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json CertificateReport::to_json() const {
  json j;
  j["beta"] = beta.str();
  j["internal_scale"] = internal_scale;
  j["degenerate"] = degenerate;
  j["covered_cost"] = covered_cost;
  auto put = [&](const char* key, const std::optional<int64_t>& v) {
    if (v) j[key] = *v;
  };
  put("cost_facility_agg", cost_facility_agg);
  put("cost_client_agg", cost_client_agg);
  put("cost_penalty_stage", cost_penalty_stage);
  put("cost_tcsd_raw", cost_tcsd_raw);
  put("cost_tcsd_canonical", cost_tcsd_canonical);
  put("cost_cfl", cost_cfl);
  j["final_cost_scaled"] = final_cost_scaled;
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["all_pass"] = all_pass();
  j["ledger"] = ledger_json(ledger_used);
  j["ledger_reference"] = ledger_json(ledger_reference);
  return j;
}

json StageDump::to_json() const {
  json j;
  j["work_instance"] = instance_to_json(work);
  json hubs = json::array();
  for (size_t h = 0; h < covered.hubs.size(); ++h)
    hubs.push_back({{"facility", work.facilities[covered.hubs[h]].id},
                    {"clients", covered.count[h]}});
  j["covered"] = {{"hubs", hubs}};
  if (relocated) j["relocated_instance"] = instance_to_json(relocated->inst);
  if (penalty) {
    j["aggregated_instance"] = instance_to_json(penalty->agg.inst);
    json pens = json::array();
    for (size_t h = 0; h < penalty->hub_penalty.size(); ++h)
      pens.push_back({{"facility", work.facilities[penalty->agg.hubs[h]].id},
                      {"radius", penalty->agg.radius[h]},
                      {"penalty", penalty->hub_penalty[h]}});
    j["penalties"] = pens;
  }
  if (tcsd) {
    json opts = json::array();
    for (size_t h = 0; h < tcsd->options.size(); ++h) {
      json list = json::array();
      for (const auto& pr : tcsd->options[h])
        list.push_back({{"cost", pr.cost},
                        {"net", pr.net},
                        {"source", pr.source < 0
                                       ? -1
                                       : work.facilities[pr.source].id}});
      opts.push_back(list);
    }
    j["tcsd_options"] = opts;
  }
  if (!canonical.empty()) {
    json c = json::array();
    for (const auto& list : canonical) {
      json l = json::array();
      for (const auto& pr : list)
        l.push_back({{"cost", pr.cost}, {"net", pr.net}, {"raw_index", pr.raw_index}});
      c.push_back(l);
    }
    j["canonical_options"] = c;
  }
  if (cfl) {
    json sup = json::array();
    for (const auto& s : cfl->suppliers)
      sup.push_back({{"hub", s.loc}, {"level", s.level}, {"cost", s.cost},
                     {"capacity", s.capacity}});
    j["cfl"] = {{"demand", cfl->demand}, {"suppliers", sup}};
  }
  if (cfl_solution)
    j["cfl_open"] = cfl_solution->open;
  if (!canonical_choice.empty()) j["canonical_choice"] = canonical_choice;
  if (!raw_choice.empty()) j["raw_choice"] = raw_choice;
  if (plan) {
    json ships = json::array();
    for (const auto& s : plan->shipments)
      ships.push_back({{"from", s.from}, {"to", s.to}, {"units", s.units}});
    j["transport_plan"] = {{"cost", plan->cost}, {"shipments", ships}};
  }
  if (partial) {
    json open = json::array();
    for (int i : partial->open) open.push_back(work.facilities[i].id);
    j["partial_solution"] = {{"open", open}};
  }
  if (lifted) j["lifted_solution"] = solution_to_json(to_ids(work, *lifted));
  return j;
}

PipelineResult pipeline_solve(const LbflInstance& inst,
                              const PipelineOptions& opts) {
  require(Rational(1, 2) < opts.beta && opts.beta < Rational(1),
          ErrorKind::malformed_input,
          "coverage parameter must lie strictly between 1/2 and 1");

  PipelineResult res;
  CertificateReport& rep = res.report;
  rep.beta = opts.beta;
  rep.ledger_used = compute_ledger(opts.beta, 9);
  rep.ledger_reference = compute_ledger(opts.beta, 5);

  int nc = inst.nc();
  if (nc == 0) {
    rep.degenerate = true;
    return res;  // empty solution, zero cost, vacuous certificates
  }

  std::vector<int> openable;
  for (int i = 0; i < inst.nf(); ++i)
    if (inst.facilities[i].lower_bound <= nc) openable.push_back(i);
  require(!openable.empty(), ErrorKind::infeasible,
          "every facility's lower bound exceeds the client count");

  LbflInstance sub = restrict_facilities(inst, openable);
  int64_t scale_k = pipeline_scale(opts.beta);
  LbflInstance work = scale_instance(sub, scale_k);
  rep.internal_scale = scale_k;

  auto dump = opts.keep_stages ? std::make_shared<StageDump>() : nullptr;
  auto add_check = [&](const std::string& name, bool pass,
                       const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
  };

  BetaCoveredSolution bc = beta_covered(work, opts.beta);
  {
    bool cov = true, sep = true, near = true;
    for (size_t h = 0; h < bc.hubs.size(); ++h) {
      if (Rational(bc.count[h]) <
          opts.beta * Rational(work.facilities[bc.hubs[h]].lower_bound))
        cov = false;
      for (size_t g = h + 1; g < bc.hubs.size(); ++g)
        if (work.d_ff(bc.hubs[h], bc.hubs[g]) == 0) sep = false;
    }
    for (int j = 0; j < nc; ++j) {
      int64_t got = work.d_fc(bc.assign[j], j);
      for (int h : bc.hubs)
        if (work.d_fc(h, j) < got) near = false;
    }
    add_check("hub-coverage", cov, "every hub serves >= beta * lower_bound");
    add_check("hub-separation", sep, "hub pairs at positive distance");
    add_check("nearest-hub-assignment", near, "");
  }
  for (int h : bc.hubs) rep.covered_cost += work.facilities[h].open_cost;
  for (int j = 0; j < nc; ++j) rep.covered_cost += work.d_fc(bc.assign[j], j);

  ClientAggregation ca = aggregate_clients(work, bc);
  add_check("relocated-metric-valid", validate_metric(ca.inst.dist).empty(), "");

  PosSolution lifted;
  if (bc.hubs.size() < 2) {
    // All clients share one location once relocated: open the cheapest
    // feasible facility for them (the free hub itself whenever it fits).
    rep.degenerate = true;
    int v = bc.hubs[0];
    int pick = -1;
    if (work.facilities[v].lower_bound <= nc) {
      pick = v;
    } else {
      int64_t best = 0;
      for (int i = 0; i < work.nf(); ++i) {
        if (work.facilities[i].lower_bound > nc) continue;
        int64_t c = ca.inst.facilities[i].open_cost + nc * ca.inst.d_ff(v, i);
        if (pick < 0 || c < best ||
            (c == best &&
             work.facilities[i].id < work.facilities[pick].id)) {
          pick = i;
          best = c;
        }
      }
    }
    require(pick >= 0, ErrorKind::infeasible, "no openable facility");
    lifted.open = {pick};
    lifted.assign.assign(nc, pick);
  } else {
    auto fa_opt = aggregate_facilities(ca);
    require(bool(fa_opt), ErrorKind::internal, "expected two or more hubs");
    PenaltyStage pstage = build_penalty_instance(std::move(*fa_opt), opts.beta);
    const FacilityAggregation& fa = pstage.agg;

    add_check("aggregated-metric-valid", validate_metric(fa.inst.dist).empty(), "");
    {
      bool disjoint = true;
      for (int i = 0; i < ca.inst.nf(); ++i) {
        int hits = 0;
        for (size_t h = 0; h < fa.hubs.size(); ++h)
          if (2 * ca.inst.d_ff(fa.hubs[h], i) < fa.radius[h]) ++hits;
        if (hits > 1) disjoint = false;
      }
      add_check("balls-disjoint", disjoint, "");

      bool doubling = true;
      int64_t worst_lhs = 0, worst_rhs = 0;
      for (int i = 0; i < fa.inst.nf(); ++i)
        for (int j = 0; j < nc; ++j) {
          int64_t lhs = fa.inst.d_fc(i, j), rhs = 2 * ca.inst.d_fc(i, j);
          if (lhs > rhs) {
            doubling = false;
            worst_lhs = lhs;
            worst_rhs = rhs;
          }
        }
      add_check("ball-doubling", doubling,
                doubling ? "d_agg <= 2 * d_rel on every facility-client pair"
                         : le_detail(worst_lhs, worst_rhs));

      bool separated = true;
      for (int i = 0; i < fa.inst.nf(); ++i) {
        if (fa.ball_of[i] >= 0) continue;
        for (size_t h = 0; h < fa.hubs.size(); ++h)
          if (2 * fa.inst.d_ff(i, fa.hubs[h]) < fa.radius[h]) separated = false;
      }
      add_check("outside-separation", separated, "");
    }

    TcsdInstance tcsd = build_tcsd(pstage);
    auto canon = canonicalize_rv(tcsd);
    CflInstance cfl = build_cfl(tcsd, canon);
    CflSearchResult search =
        local_search(cfl, CflSearchOptions{opts.cfl_eps, opts.cfl_max_iters});
    res.cfl_hit_iteration_cap = search.hit_iteration_cap;
    rep.cost_cfl = search.best.total;

    std::vector<int> canon_choice = lift_cfl_to_tcsd(canon, cfl, search.best);
    auto canon_cost = tcsd_cost_canonical(tcsd, canon, canon_choice);
    require(bool(canon_cost), ErrorKind::internal,
            "lifted transport choice is infeasible");
    rep.cost_tcsd_canonical = canon_cost->total;
    add_check("supplier-lift", canon_cost->total <= search.best.total,
              le_detail(canon_cost->total, search.best.total));

    {
      std::vector<int> prefix;
      for (int idx = 0; idx < int(cfl.suppliers.size()); ++idx)
        if (cfl.suppliers[idx].level <= canon_choice[cfl.suppliers[idx].loc])
          prefix.push_back(idx);
      auto realized = eval_open_set(cfl, prefix);
      add_check("prefix-realization",
                realized && realized->total <= 2 * canon_cost->total,
                realized ? le_detail(realized->total, 2 * canon_cost->total)
                         : "infeasible prefix");
    }

    std::vector<int> raw_choice = canonical_to_raw(canon, canon_choice);
    auto raw_cost = tcsd_cost(tcsd, raw_choice);
    require(bool(raw_cost), ErrorKind::internal, "raw choice is infeasible");
    rep.cost_tcsd_raw = raw_cost->total;
    add_check("rounding-monotone", raw_cost->total <= canon_cost->total,
              le_detail(raw_cost->total, canon_cost->total));

    PartialSolution partial =
        lift_tcsd_to_lbflp(tcsd, pstage, raw_choice, raw_cost->plan);
    CostBreakdown c3 = cost_lbflp(pstage, partial);
    rep.cost_penalty_stage = c3.total();
    add_check("choice-bookkeeping",
              c3.facility_cost + c3.penalty_cost == raw_cost->config_cost &&
                  c3.connection_cost == raw_cost->transport_cost,
              "stage cost components match the chosen options exactly");

    lifted = reconnect_unserved(pstage, partial);
    CostBreakdown c2 = eval_pos(fa.inst, lifted);
    rep.cost_facility_agg = c2.total();
    {
      int64_t p = opts.beta.num(), q = opts.beta.den();
      add_check("reconnect-factor",
                (2 * p - q) * c2.total() <= 2 * p * c3.total(),
                le_detail((2 * p - q) * c2.total(), 2 * p * c3.total()));
    }

    RecostResult rc = recost_down(work, ca, fa, lifted);
    add_check("facility-unfold", rc.unfold_factor_ok,
              le_detail(2 * rc.relocated.total(), 3 * rc.aggregated.total()));

    if (dump) {
      dump->penalty = pstage;
      dump->tcsd = tcsd;
      dump->canonical = canon;
      dump->cfl = cfl;
      dump->cfl_solution = search.best;
      dump->canonical_choice = canon_choice;
      dump->raw_choice = raw_choice;
      dump->plan = raw_cost->plan;
      dump->partial = partial;
    }
  }

  CostBreakdown scaled_cost = eval_pos(work, lifted);
  rep.final_cost_scaled = scaled_cost.total();
  add_check("client-move-bound", client_move_bound_ok(work, ca, lifted), "");
  {
    CostBreakdown relocated_cost = eval_pos(ca.inst, lifted);
    rep.cost_client_agg = relocated_cost.total();
    int64_t hub_costs = 0, stage1_conn = 0;
    for (int hub : ca.hubs) hub_costs += work.facilities[hub].open_cost;
    for (int j = 0; j < nc; ++j) stage1_conn += work.d_fc(ca.client_hub[j], j);
    add_check("client-unfold",
              scaled_cost.total() <=
                  relocated_cost.total() + hub_costs + stage1_conn,
              le_detail(scaled_cost.total(),
                        relocated_cost.total() + hub_costs + stage1_conn));
  }

  res.solution = to_ids(work, lifted);
  res.cost = cost_of(inst, res.solution);
  require(res.cost.total() * scale_k == rep.final_cost_scaled,
          ErrorKind::internal, "scale bookkeeping mismatch");
  add_check("final-feasible", lower_bound_shortfalls(inst, res.solution).empty(),
            "");

  if (dump) {
    dump->work = work;
    dump->covered = bc;
    dump->relocated = ca;
    dump->lifted = lifted;
    res.stages = dump;
  }

  if (!rep.all_pass()) {
    std::string names;
    for (const auto& c : rep.checks)
      if (!c.pass) names += (names.empty() ? "" : ", ") + c.name;
    throw LbflError(ErrorKind::certificate_violation,
                    "certificate failed: " + names);
  }
  return res;
}

CheckResult check_solution(const LbflInstance& inst, const LbflSolution& sol) {
  CheckResult out;
  std::set<int> open_ids(sol.open.begin(), sol.open.end());
  std::vector<int64_t> served(inst.nf(), 0);
  std::vector<char> assigned(inst.nc(), 0);
  std::vector<int> open_pos;

  for (int id : open_ids) {
    int pos = inst.facility_pos(id);
    if (pos < 0)
      out.problems.push_back("unknown facility id in open set: " + std::to_string(id));
    else
      open_pos.push_back(pos);
  }
  for (const auto& [cid, fid] : sol.assign) {
    int cp = inst.client_pos(cid);
    int fp = inst.facility_pos(fid);
    if (cp < 0) {
      out.problems.push_back("unknown client id: " + std::to_string(cid));
      continue;
    }
    if (fp < 0) {
      out.problems.push_back("unknown facility id: " + std::to_string(fid));
      continue;
    }
    if (!open_ids.count(fid)) {
      out.problems.push_back("client " + std::to_string(cid) +
                             " assigned to closed facility " + std::to_string(fid));
      continue;
    }
    if (assigned[cp]) {
      out.problems.push_back("client assigned twice: " + std::to_string(cid));
      continue;
    }
    assigned[cp] = 1;
    served[fp]++;
    out.cost.connection_cost += inst.d_fc(fp, cp);
  }
  for (int j = 0; j < inst.nc(); ++j)
    if (!assigned[j])
      out.problems.push_back("client not assigned: " + std::to_string(inst.clients[j]));
  for (int pos : open_pos) {
    const Facility& f = inst.facilities[pos];
    out.cost.facility_cost += f.open_cost;
    if (served[pos] < f.lower_bound)
      out.problems.push_back(
          "facility " + std::to_string(f.id) + " serves " +
          std::to_string(served[pos]) + " of " + std::to_string(f.lower_bound) +
          " required clients (short by " +
          std::to_string(f.lower_bound - served[pos]) + ")");
  }
  out.feasible = out.problems.empty();
  return out;
}

json run_bench(const BenchOptions& opts) {
  json rows = json::array();
  Rational max_ratio(0);
  double ratio_sum = 0;
  int ratio_n = 0, infeasible = 0, solved = 0;

  for (int r = 0; r < opts.count; ++r) {
    uint64_t seed = opts.seed_start + uint64_t(r);
    LbflInstance inst = generate_instance(seed, opts.profile);
    json row;
    row["seed"] = seed;
    row["facilities"] = inst.nf();
    row["clients"] = inst.nc();
    auto t0 = std::chrono::steady_clock::now();
    try {
      PipelineResult pr = pipeline_solve(inst, opts.pipe);
      ++solved;
      row["cost"] = pr.cost.total();
      if (inst.scale > 1)
        row["cost_unscaled"] = double(pr.cost.total()) / double(inst.scale);
      row["open"] = int(pr.solution.open.size());
      row["certificates"] = pr.report.all_pass();
      if (inst.nf() <= opts.oracle_max_facilities) {
        auto opt = brute_lbfl(inst);
        require(bool(opt), ErrorKind::internal,
                "oracle infeasible on a solved instance");
        row["optimum"] = opt->second;
        Rational ratio = opt->second == 0
                             ? Rational(1)
                             : Rational(pr.cost.total(), opt->second);
        row["ratio"] = ratio.str();
        row["ratio_value"] = ratio.to_double();
        if (ratio > max_ratio) max_ratio = ratio;
        ratio_sum += ratio.to_double();
        ++ratio_n;
      }
    } catch (const LbflError& e) {
      if (e.kind() != ErrorKind::infeasible) throw;
      row["infeasible"] = true;
      ++infeasible;
    }
    if (opts.with_timings) {
      auto ms = std::chrono::duration_cast<std::chrono::microseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      row["us"] = ms;
    }
    rows.push_back(row);
  }

  json out;
  out["profile"] = {{"family", family_name(opts.profile.family)},
                    {"facilities", opts.profile.n_facilities},
                    {"clients", opts.profile.n_clients},
                    {"coord_range", opts.profile.coord_range},
                    {"cost_max", opts.profile.cost_max},
                    {"lb_max", opts.profile.lb_max}};
  out["beta"] = opts.pipe.beta.str();
  out["cfl_eps"] = opts.pipe.cfl_eps.str();
  out["seed_start"] = opts.seed_start;
  out["count"] = opts.count;
  out["rows"] = rows;
  json agg;
  agg["solved"] = solved;
  agg["infeasible"] = infeasible;
  agg["oracle_compared"] = ratio_n;
  if (ratio_n > 0) {
    agg["max_ratio"] = max_ratio.str();
    agg["max_ratio_value"] = max_ratio.to_double();
    agg["mean_ratio_value"] = ratio_sum / ratio_n;
  }
  out["aggregate"] = agg;
  return out;
}

std::string bench_table(const json& report) {
  std::ostringstream os;
  os << "  seed  |F| |C|        cost     optimum   ratio\n";
  for (const auto& row : report.at("rows")) {
    char line[160];
    if (row.contains("infeasible")) {
      std::snprintf(line, sizeof line, "%6llu %4d %3d  infeasible\n",
                    (unsigned long long)row.at("seed").get<uint64_t>(),
                    row.at("facilities").get<int>(), row.at("clients").get<int>());
    } else {
      std::string ratio = row.contains("ratio") ? row.at("ratio").get<std::string>() : "-";
      std::string opt = row.contains("optimum")
                            ? std::to_string(row.at("optimum").get<int64_t>())
                            : "-";
      std::snprintf(line, sizeof line, "%6llu %4d %3d %11lld %11s   %s\n",
                    (unsigned long long)row.at("seed").get<uint64_t>(),
                    row.at("facilities").get<int>(), row.at("clients").get<int>(),
                    (long long)row.at("cost").get<int64_t>(), opt.c_str(),
                    ratio.c_str());
    }
    os << line;
  }
  const auto& agg = report.at("aggregate");
  os << "solved " << agg.at("solved") << ", infeasible " << agg.at("infeasible");
  if (agg.contains("max_ratio"))
    os << ", max ratio " << agg.at("max_ratio").get<std::string>() << " ("
       << agg.at("max_ratio_value").get<double>() << ")";
  os << "\n";
  return os.str();
}

}  // namespace lbfl
