#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lbfl/io.hpp"
#include "lbfl/oracle.hpp"
#include "lbfl/pipeline.hpp"

using namespace lbfl;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 2 infeasible, 3 certificate violation, 4 bad input.
int exit_code(const LbflError& e) {
  switch (e.kind()) {
    case ErrorKind::infeasible:
      return 2;
    case ErrorKind::certificate_violation:
      return 3;
    default:
      return 4;
  }
}

struct ProfileFlags {
  std::string family = "plane";
  GenProfile profile;

  void attach(CLI::App* cmd) {
    cmd->add_option("--profile", family, "metric family: line, plane or graph")
        ->capture_default_str();
    cmd->add_option("--nf", profile.n_facilities, "facility count")
        ->capture_default_str();
    cmd->add_option("--nc", profile.n_clients, "client count")
        ->capture_default_str();
    cmd->add_option("--coord-range", profile.coord_range,
                    "coordinate range for line/plane");
    cmd->add_option("--cost-min", profile.cost_min, "minimum opening cost");
    cmd->add_option("--cost-max", profile.cost_max, "maximum opening cost");
    cmd->add_option("--lb-min", profile.lb_min, "minimum lower bound");
    cmd->add_option("--lb-max", profile.lb_max, "maximum lower bound");
    cmd->add_flag("--uncapped-lb,!--capped-lb", uncapped,
                  "allow lower bounds above the client count");
    cmd->add_option("--scale", profile.scale, "precision factor");
  }
  GenProfile resolve() {
    profile.family = parse_family(family);
    profile.cap_lb_to_clients = !uncapped;
    return profile;
  }
  bool uncapped = false;
};

struct PipeFlags {
  std::string beta = "2/3";
  std::string eps = "1/100";
  int64_t max_iters = 1'000'000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--beta", beta, "coverage relaxation in (1/2, 1)")
        ->capture_default_str();
    cmd->add_option("--cfl-eps", eps, "local-search improvement threshold")
        ->capture_default_str();
    cmd->add_option("--cfl-max-iters", max_iters, "local-search move cap");
  }
  PipelineOptions resolve(bool keep_stages = false) {
    PipelineOptions o;
    o.beta = Rational::parse(beta);
    o.cfl_eps = Rational::parse(eps);
    o.cfl_max_iters = max_iters;
    o.keep_stages = keep_stages;
    return o;
  }
};

void print_cost(const char* label, const CostBreakdown& cb, int64_t scale) {
  std::cout << label << ": total " << cb.total() << " (facility "
            << cb.facility_cost << ", connection " << cb.connection_cost;
  if (cb.penalty_cost) std::cout << ", penalty " << cb.penalty_cost;
  std::cout << ")";
  if (scale > 1)
    std::cout << "  [" << double(cb.total()) / double(scale) << " unscaled]";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lower-bounded facility location solver"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  uint64_t seed = 1;
  std::string out_path;
  ProfileFlags gen_profile;
  gen->add_option("--seed", seed, "rng seed")->capture_default_str();
  gen_profile.attach(gen);
  gen->add_option("--out", out_path, "output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "run the reduction pipeline");
  std::string solve_in, solve_out, report_out, stages_out;
  PipeFlags solve_pipe;
  solve->add_option("instance", solve_in, "instance file")->required();
  solve_pipe.attach(solve);
  solve->add_option("--out", solve_out, "write the solution here");
  solve->add_option("--report", report_out, "write the certificate report here");
  solve->add_option("--emit-stages", stages_out,
                    "write every derived instance and certificate here");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact optimum by enumeration");
  std::string oracle_in, oracle_out;
  int oracle_max_f = 12;
  oracle->add_option("instance", oracle_in, "instance file")->required();
  oracle->add_option("--max-facilities", oracle_max_f, "size guard")
      ->capture_default_str();
  oracle->add_option("--out", oracle_out, "write the optimal solution here");

  // check
  auto* check = app.add_subcommand("check", "validate a solution");
  std::string check_inst, check_sol;
  check->add_option("instance", check_inst, "instance file")->required();
  check->add_option("solution", check_sol, "solution file")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "seeded batch with oracle ratios");
  BenchOptions bopts;
  ProfileFlags bench_profile;
  PipeFlags bench_pipe;
  std::string bench_out;
  bench->add_option("--seed", bopts.seed_start, "first seed")
      ->capture_default_str();
  bench->add_option("--count", bopts.count, "number of instances")->required();
  bench_profile.attach(bench);
  bench_pipe.attach(bench);
  bench->add_option("--oracle-max-facilities", bopts.oracle_max_facilities,
                    "run the oracle when |F| fits");
  bench->add_flag("--timings", bopts.with_timings,
                  "include per-instance timings (report is no longer "
                  "byte-reproducible)");
  bench->add_option("--out", bench_out, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      LbflInstance inst = generate_instance(seed, gen_profile.resolve());
      save_instance(inst, out_path);
      std::cout << "wrote " << out_path << " (" << inst.nf() << " facilities, "
                << inst.nc() << " clients)\n";
      return 0;
    }

    if (*solve) {
      LbflInstance inst = load_instance(solve_in);
      PipelineResult pr = pipeline_solve(inst, solve_pipe.resolve(!stages_out.empty()));
      print_cost("solution", pr.cost, inst.scale);
      std::cout << "open facilities:";
      for (int id : pr.solution.open) std::cout << " " << id;
      std::cout << "\n";
      for (const auto& c : pr.report.checks)
        std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name
                  << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
      std::cout << "end-to-end factor ledger (local-search bound "
                << pr.report.ledger_used.alpha_cfl
                << "): " << pr.report.ledger_used.end_to_end.str() << "\n";
      if (pr.cfl_hit_iteration_cap)
        std::cerr << "warning: local search stopped at the iteration cap\n";
      if (!solve_out.empty()) save_solution(pr.solution, solve_out);
      if (!report_out.empty()) {
        json rj = pr.report.to_json();
        rj["cost"] = {{"facility", pr.cost.facility_cost},
                      {"connection", pr.cost.connection_cost},
                      {"total", pr.cost.total()},
                      {"unscaled_total",
                       double(pr.cost.total()) / double(inst.scale)}};
        std::ofstream f(report_out);
        f << rj.dump(2) << "\n";
      }
      if (!stages_out.empty() && pr.stages) {
        std::ofstream f(stages_out);
        f << pr.stages->to_json().dump(2) << "\n";
      }
      return 0;
    }

    if (*oracle) {
      LbflInstance inst = load_instance(oracle_in);
      OracleLimits limits;
      limits.max_facilities = oracle_max_f;
      auto best = brute_lbfl(inst, limits);
      if (!best) {
        std::cout << "infeasible\n";
        return 2;
      }
      LbflSolution sol = to_ids(inst, best->first);
      print_cost("optimum", cost_of(inst, sol), inst.scale);
      if (!oracle_out.empty()) save_solution(sol, oracle_out);
      return 0;
    }

    if (*check) {
      LbflInstance inst = load_instance(check_inst);
      LbflSolution sol = load_solution(check_sol);
      CheckResult cr = check_solution(inst, sol);
      if (cr.feasible) {
        print_cost("feasible", cr.cost, inst.scale);
        return 0;
      }
      for (const auto& p : cr.problems) std::cout << "problem: " << p << "\n";
      return 2;
    }

    if (*bench) {
      bopts.profile = bench_profile.resolve();
      bopts.pipe = bench_pipe.resolve();
      json report = run_bench(bopts);
      std::cout << bench_table(report);
      if (!bench_out.empty()) {
        std::ofstream f(bench_out);
        f << report.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const LbflError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
