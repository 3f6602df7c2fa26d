#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lbfl/cfl.hpp"
#include "lbfl/coverage.hpp"
#include "lbfl/generate.hpp"
#include "lbfl/instance.hpp"
#include "lbfl/rational.hpp"
#include "lbfl/reductions.hpp"

namespace lbfl {

struct CertCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // "lhs <= rhs" with exact integers
};

/// Multiplicative losses of the reduction chain, composed from the solver's
/// guarantee outward: penalty stage and transport stage share a factor, then
/// the facility unfold, the client unfold, and the coverage stage add theirs.
struct FactorLedger {
  int alpha_cfl = 0;
  Rational transport_stage;  // = 4 * alpha_cfl (rounding + supplier ladder)
  Rational penalty_stage;    // equal to transport_stage
  Rational facility_stage;   // (2b/(2b-1) + 2/b) * penalty_stage
  Rational client_stage;     // 4 * facility_stage
  Rational end_to_end;       // client_stage * (1 + 2/(1-b)) + 2/(1-b)
};

FactorLedger compute_ledger(Rational beta, int alpha_cfl);

struct CertificateReport {
  Rational beta;
  int64_t internal_scale = 1;  // extra factor applied before the reductions
  bool degenerate = false;     // single-hub shortcut taken

  // Costs of the pipeline's own artifacts, in internal_scale units.
  int64_t covered_cost = 0;  // coverage-stage solution under the input metric
  std::optional<int64_t> cost_facility_agg;   // lifted solution, aggregated metric
  std::optional<int64_t> cost_client_agg;     // lifted solution, relocated metric
  std::optional<int64_t> cost_penalty_stage;  // partial solution
  std::optional<int64_t> cost_tcsd_raw;
  std::optional<int64_t> cost_tcsd_canonical;
  std::optional<int64_t> cost_cfl;
  int64_t final_cost_scaled = 0;  // final solution, input metric, internal units

  std::vector<CertCheck> checks;
  FactorLedger ledger_used;       // alpha_cfl = 9, the implemented solver
  FactorLedger ledger_reference;  // alpha_cfl = 5, the best published constant

  bool all_pass() const;
  nlohmann::json to_json() const;
};

struct PipelineOptions {
  Rational beta{2, 3};
  Rational cfl_eps{1, 100};
  int64_t cfl_max_iters = 1'000'000;
  bool keep_stages = false;
};

/// Everything the pipeline built, for --emit-stages inspection.
struct StageDump {
  LbflInstance work;  // openable facilities only, internally rescaled
  BetaCoveredSolution covered;
  std::optional<ClientAggregation> relocated;
  std::optional<PenaltyStage> penalty;
  std::optional<TcsdInstance> tcsd;
  std::vector<std::vector<CanonicalPair>> canonical;
  std::optional<CflInstance> cfl;
  std::optional<CflSolution> cfl_solution;
  std::vector<int> canonical_choice, raw_choice;
  std::optional<TransportPlan> plan;
  std::optional<PartialSolution> partial;
  std::optional<PosSolution> lifted;
  nlohmann::json to_json() const;
};

struct PipelineResult {
  LbflSolution solution;
  CostBreakdown cost;  // on the input instance, file-scale units
  CertificateReport report;
  bool cfl_hit_iteration_cap = false;
  std::shared_ptr<StageDump> stages;  // only with keep_stages
};

/// Runs the whole reduction chain and lifts the solution back, asserting
/// every per-stage certificate on the way. Throws ErrorKind::infeasible when
/// the instance has no solution and ErrorKind::certificate_violation if any
/// certified inequality fails (a bug, by construction).
PipelineResult pipeline_solve(const LbflInstance& inst,
                              const PipelineOptions& opts = {});

struct CheckResult {
  bool feasible = false;
  CostBreakdown cost;
  std::vector<std::string> problems;
};

/// Validates an externally produced solution against the instance.
CheckResult check_solution(const LbflInstance& inst, const LbflSolution& sol);

struct BenchOptions {
  uint64_t seed_start = 1;
  int count = 0;
  GenProfile profile;
  PipelineOptions pipe;
  int oracle_max_facilities = 7;  // oracle runs when |F| fits
  bool with_timings = false;      // timings break byte-identical reports
};

/// Deterministic machine-readable report (byte-identical across runs unless
/// with_timings is set).
nlohmann::json run_bench(const BenchOptions& opts);

std::string bench_table(const nlohmann::json& report);

}  // namespace lbfl
