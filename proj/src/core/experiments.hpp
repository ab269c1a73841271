#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "core/dynamics.hpp"
#include "core/landscape.hpp"
#include "core/stats.hpp"

namespace lgcorr {

enum class GraphFamily { complete, hypercube, cycle, circulant, random_regular };

std::string graph_family_name(GraphFamily family);
GraphFamily graph_family_from_name(const std::string& name);

struct GraphSpec {
  GraphFamily family = GraphFamily::complete;
  std::int32_t n = 0;    // complete, cycle, circulant, random_regular
  std::int32_t dim = 0;  // hypercube
  std::vector<std::int32_t> offsets;  // circulant
  // random_regular: circulant base with offsets 1..degree/2 (degree even),
  // randomized by `swap_pairs` double-edge swaps (default 10 * degree).
  std::int32_t degree = 0;
  std::int64_t swap_pairs = -1;

  std::string label() const;
};

// Builds the graph; the seed only matters for random_regular.
Graph build_graph(const GraphSpec& spec, std::uint64_t seed);

struct GridPoint {
  GraphSpec graph;
  LandscapeMode mode = LandscapeMode::iid;
  double sigma_w = 1.0;
  double sigma_b = 0.0;
  double sigma_f = 0.0;
  double lambda = 1.0;      // rem
  SeparableSpec separable;  // separable (sigma carried here)
  bool symmetrize = false;

  std::string label() const;  // canonical parameter string, hashed for seeds
};

struct TrialRecord {
  GridPoint point;
  std::int32_t n = 0;
  std::int32_t degree = 0;
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  RhoReport report;
  StationaryMethod solver = StationaryMethod::closed_form;
  bool degenerate = false;
  std::string error;  // nonempty when the trial failed
  double wall_time_sec = 0.0;
};

struct SweepConfig {
  std::vector<GraphSpec> graphs;
  LandscapeMode mode = LandscapeMode::iid;
  std::vector<double> sigma_w{1.0};
  std::vector<double> sigma_b{0.0};
  std::vector<double> sigma_f{0.0};
  std::vector<double> lambda{1.0};
  SeparableSpec separable;  // slope/intercept for separable mode; sigma grid
  std::vector<double> separable_sigma{1.0};
  bool symmetrize = false;
  std::int64_t trials = 25;
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0: hardware concurrency
  SolveOptions solver;

  std::string trials_csv;      // output paths; empty = not written
  std::string aggregates_csv;
  std::string summary_json;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
std::vector<GridPoint> expand_grid(const SweepConfig& cfg);

struct PointAggregate {
  GridPoint point;
  std::int32_t n = 0;
  std::int32_t degree = 0;
  std::int64_t valid = 0;
  std::int64_t degenerate = 0;
  std::int64_t errored = 0;
  double mean_rho = 0.0;
  double sd_rho = 0.0;  // sample SD over valid trials (divisor valid-1)
};

struct SweepResult {
  std::vector<GridPoint> points;
  std::vector<TrialRecord> records;  // ordered by (point, trial)
  std::vector<PointAggregate> aggregates;
  bool any_point_without_valid_trials = false;
};

TrialRecord run_trial(const GridPoint& point, std::int64_t trial_index,
                      std::uint64_t master_seed, const SolveOptions& solver = {});

// Rebuilds the exact graph and landscape a trial draws from its derived seed
// (useful for serializing the inputs behind a recorded trial).
Landscape materialize_trial_landscape(const GridPoint& point, std::int64_t trial_index,
                                      std::uint64_t master_seed);

// Runs every (point, trial) pair, distributing trials across workers. The
// records and all emitted files are byte-identical for a given config and
// master seed regardless of the worker count.
SweepResult run_sweep(const SweepConfig& cfg);

// Header: graph,n,degree,mode,sigma_w,sigma_b,sigma_f,lambda,trial,seed,
//         rho,rho_hat,r,var_w,var_a,solver,degenerate
void write_trials_csv(std::ostream& out, const SweepResult& result);
void write_aggregates_csv(std::ostream& out, const SweepResult& result);
nlohmann::json sweep_summary_json(const SweepResult& result);
// Writes whichever of the config's output paths are set.
void write_sweep_outputs(const SweepConfig& cfg, const SweepResult& result);

struct BoundCheck {
  GridPoint point;
  std::int32_t n = 0;
  std::int64_t valid_trials = 0;
  double mean_rho = 0.0;
  double std_error = 0.0;
  double c_r = 0.0;
  double bound = 0.0;
  bool binding = false;  // bound > -1
  bool pass = false;     // mean >= bound - 3 * SE (vacuous bounds pass)
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool all_pass = false;
};

// Empirical check of the expected-correlation lower bounds over the sweep
// grid; supports iid and rem modes.
BoundReport verify_bounds(const SweepConfig& cfg);
nlohmann::json bound_report_json(const BoundReport& report);

// One trial with the per-state vectors retained for scatter output.
struct ScatterData {
  TrialRecord record;
  std::vector<double> neg_log_pi;
  std::vector<double> log_q;
  std::vector<double> wells;
  std::vector<double> barrier_lse;
};

ScatterData run_scatter_trial(const GridPoint& point, std::int64_t trial_index,
                              std::uint64_t master_seed, const SolveOptions& solver = {});
// Per-state CSV plus a JSON sidecar carrying rho and the parameters.
void write_scatter(const ScatterData& data, const std::string& csv_path,
                   const std::string& sidecar_json_path);

nlohmann::json trial_record_json(const TrialRecord& record);
nlohmann::json moment_suite_json(const MomentSuiteReport& report);

}  // namespace lgcorr
