// Command-line front end for the lgcorr shared library. Everything runs
// through the C API in lgcorr.h; this translation unit only parses flags,
// assembles JSON configs and prints results.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lgcorr.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitBoundFailure = 2;
constexpr int kExitRuntimeError = 3;

int exit_code_for(lgc_status status) {
  if (status == LGC_OK) return kExitOk;
  if (status == LGC_ERR_INVALID_ARGUMENT) return kExitConfigError;
  return kExitRuntimeError;
}

int report_failure(lgc_status status) {
  std::cerr << "error (" << lgc_status_name(status) << "): " << lgc_last_error() << '\n';
  return exit_code_for(status);
}

struct GraphFlags {
  std::string family;
  std::int32_t n = 0;
  std::int32_t dim = 0;
  std::vector<std::int32_t> offsets;
  std::int32_t degree = 0;
  std::int64_t swap_pairs = -1;

  CLI::Option* family_opt = nullptr;

  void attach(CLI::App* cmd) {
    family_opt = cmd->add_option("--family", family, "graph family")
                     ->check(CLI::IsMember(
                         {"complete", "hypercube", "cycle", "circulant", "random_regular"}));
    cmd->add_option("--n", n, "vertex count");
    cmd->add_option("--dim", dim, "hypercube dimension");
    cmd->add_option("--offsets", offsets, "circulant offsets");
    cmd->add_option("--degree", degree, "random_regular degree (even)");
    cmd->add_option("--swap-pairs", swap_pairs, "double-edge swaps (default 10*degree)");
  }

  json to_json() const {
    json g{{"family", family}};
    if (family == "hypercube") {
      g["dim"] = dim;
    } else {
      g["n"] = n;
    }
    if (family == "circulant") g["offsets"] = offsets;
    if (family == "random_regular") {
      g["degree"] = degree;
      if (swap_pairs >= 0) g["swap_pairs"] = swap_pairs;
    }
    return g;
  }
};

struct LandscapeFlags {
  std::string mode = "iid";
  double sigma_w = 1.0;
  double sigma_b = 0.0;
  double sigma_f = 0.0;
  double lambda = 1.0;
  double f_slope = 0.0;
  double f_intercept = 0.0;
  double sep_sigma = 1.0;
  bool symmetrize = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "landscape mode")
        ->check(CLI::IsMember({"iid", "rem", "separable"}));
    cmd->add_option("--sigma-w", sigma_w, "well std deviation");
    cmd->add_option("--sigma-b", sigma_b, "barrier std deviation (iid)");
    cmd->add_option("--sigma-f", sigma_f, "force std deviation (iid)");
    cmd->add_option("--lambda", lambda, "locality parameter (rem)");
    cmd->add_option("--f-slope", f_slope, "barrier trend slope (separable)");
    cmd->add_option("--f-intercept", f_intercept, "barrier trend intercept (separable)");
    cmd->add_option("--sep-sigma", sep_sigma, "residual std deviation (separable)");
    cmd->add_flag("--symmetrize", symmetrize, "average the two barrier orientations");
  }

  void fill(json& cfg) const {
    cfg["mode"] = mode;
    cfg["sigma_w"] = sigma_w;
    if (mode == "iid") {
      cfg["sigma_b"] = sigma_b;
      cfg["sigma_f"] = sigma_f;
    } else if (mode == "rem") {
      cfg["lambda"] = lambda;
    } else {
      cfg["separable"] = {{"slope", f_slope},
                          {"intercept", f_intercept},
                          {"sigma", sep_sigma},
                          {"symmetrize", symmetrize}};
    }
  }
};

// Builds a graph handle from flags via the C API; used by subcommands that
// need an actual handle rather than a config.
lgc_status build_graph_handle(const GraphFlags& flags, std::uint64_t seed, lgc_graph** out) {
  if (flags.family == "complete") return lgc_graph_complete(flags.n, out);
  if (flags.family == "hypercube") return lgc_graph_hypercube(flags.dim, out);
  if (flags.family == "cycle") return lgc_graph_cycle(flags.n, out);
  if (flags.family == "circulant")
    return lgc_graph_circulant(flags.n, flags.offsets.data(), flags.offsets.size(), out);
  // random_regular: circulant base with offsets 1..degree/2
  std::vector<std::int32_t> offsets;
  for (std::int32_t s = 1; s <= flags.degree / 2; ++s) offsets.push_back(s);
  lgc_graph* base = nullptr;
  lgc_status rc = lgc_graph_circulant(flags.n, offsets.data(), offsets.size(), &base);
  if (rc != LGC_OK) return rc;
  const std::int64_t swaps =
      flags.swap_pairs >= 0 ? flags.swap_pairs : 10 * static_cast<std::int64_t>(flags.degree);
  rc = lgc_graph_random_regular(base, swaps, seed, out);
  lgc_graph_free(base);
  return rc;
}

std::string take_string(char* owned) {
  std::string s = owned != nullptr ? owned : "";
  lgc_string_free(owned);
  return s;
}

bool load_config_file(const std::string& path, json& cfg, std::string& error) {
  std::ifstream in(path);
  if (!in) {
    error = "cannot open config file: " + path;
    return false;
  }
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    error = std::string("config parse error: ") + e.what();
    return false;
  }
  return true;
}

int run_graph(const GraphFlags& flags, std::uint64_t seed, const std::string& export_path) {
  lgc_graph* graph = nullptr;
  lgc_status rc = build_graph_handle(flags, seed, &graph);
  if (rc != LGC_OK) return report_failure(rc);

  lgc_graph_diagnostics diag{};
  rc = lgc_graph_validate(graph, &diag);
  if (rc != LGC_OK) {
    lgc_graph_free(graph);
    return report_failure(rc);
  }
  json out{{"family", flags.family},
           {"n", lgc_graph_num_vertices(graph)},
           {"edges", lgc_graph_num_edges(graph)},
           {"degree", diag.degree},
           {"simple", diag.simple != 0},
           {"regular", diag.regular != 0},
           {"connected", diag.connected != 0}};
  if (!export_path.empty()) {
    rc = lgc_graph_write_edge_list(graph, export_path.c_str());
    if (rc != LGC_OK) {
      lgc_graph_free(graph);
      return report_failure(rc);
    }
    out["edge_list"] = export_path;
  }
  lgc_graph_free(graph);
  std::cout << out.dump(2) << '\n';
  const bool ok = diag.simple && diag.regular && diag.connected;
  return ok ? kExitOk : kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-global correlation experiments on disordered energy landscapes"};
  app.require_subcommand(1);

  // ---- graph ----
  auto* graph_cmd = app.add_subcommand("graph", "build, validate and export a graph");
  GraphFlags graph_flags;
  graph_flags.attach(graph_cmd);
  graph_flags.family_opt->required();
  std::uint64_t graph_seed = 0;
  std::string export_path;
  graph_cmd->add_option("--seed", graph_seed, "seed for random_regular swaps");
  graph_cmd->add_option("--export", export_path, "write edge list to this path");

  // ---- trial ----
  auto* trial_cmd = app.add_subcommand("trial", "run a single trial, optionally with scatter dump");
  GraphFlags trial_graph;
  trial_graph.attach(trial_cmd);
  trial_graph.family_opt->required();
  LandscapeFlags trial_landscape;
  trial_landscape.attach(trial_cmd);
  std::int64_t trial_index = 0;
  std::uint64_t trial_master_seed = 0;
  std::string scatter_path, sidecar_path, landscape_json_path;
  trial_cmd->add_option("--trial", trial_index, "trial index");
  trial_cmd->add_option("--master-seed", trial_master_seed, "master seed");
  trial_cmd->add_option("--scatter", scatter_path, "per-state CSV output path");
  trial_cmd->add_option("--sidecar", sidecar_path, "JSON sidecar path for the scatter");
  trial_cmd->add_option("--landscape-json", landscape_json_path,
                        "write the sampled landscape's canonical JSON here");

  // ---- sweep / verify-bounds ----
  auto add_sweep_options = [](CLI::App* cmd, std::string& config_path, GraphFlags& gf,
                              LandscapeFlags& lf, std::vector<double>& sw,
                              std::vector<double>& sb, std::vector<double>& sf,
                              std::vector<double>& lam, std::int64_t& trials,
                              std::uint64_t& master_seed, int& workers, std::string& trials_csv,
                              std::string& aggregates_csv, std::string& summary_json) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    gf.attach(cmd);
    lf.attach(cmd);
    cmd->add_option("--sigma-w-grid", sw, "sigma_w grid");
    cmd->add_option("--sigma-b-grid", sb, "sigma_b grid");
    cmd->add_option("--sigma-f-grid", sf, "sigma_f grid");
    cmd->add_option("--lambda-grid", lam, "lambda grid");
    cmd->add_option("--trials", trials, "trials per grid point");
    cmd->add_option("--master-seed", master_seed, "master seed");
    cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
    cmd->add_option("--trials-csv", trials_csv, "trial records CSV path");
    cmd->add_option("--aggregates-csv", aggregates_csv, "per-point aggregates CSV path");
    cmd->add_option("--summary-json", summary_json, "summary JSON path");
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "run a seeded Monte Carlo grid sweep");
  std::string sweep_config_path;
  GraphFlags sweep_graph;
  LandscapeFlags sweep_landscape;
  std::vector<double> sweep_sw, sweep_sb, sweep_sf, sweep_lambda;
  std::int64_t sweep_trials = 25;
  std::uint64_t sweep_master_seed = 0;
  int sweep_workers = 0;
  std::string sweep_trials_csv, sweep_aggregates_csv, sweep_summary_json;
  add_sweep_options(sweep_cmd, sweep_config_path, sweep_graph, sweep_landscape, sweep_sw,
                    sweep_sb, sweep_sf, sweep_lambda, sweep_trials, sweep_master_seed,
                    sweep_workers, sweep_trials_csv, sweep_aggregates_csv, sweep_summary_json);

  auto* bounds_cmd =
      app.add_subcommand("verify-bounds", "sweep plus expected-correlation bound checks");
  std::string bounds_config_path;
  GraphFlags bounds_graph;
  LandscapeFlags bounds_landscape;
  std::vector<double> bounds_sw, bounds_sb, bounds_sf, bounds_lambda;
  std::int64_t bounds_trials = 25;
  std::uint64_t bounds_master_seed = 0;
  int bounds_workers = 0;
  std::string bounds_trials_csv, bounds_aggregates_csv, bounds_summary_json;
  add_sweep_options(bounds_cmd, bounds_config_path, bounds_graph, bounds_landscape, bounds_sw,
                    bounds_sb, bounds_sf, bounds_lambda, bounds_trials, bounds_master_seed,
                    bounds_workers, bounds_trials_csv, bounds_aggregates_csv,
                    bounds_summary_json);

  // ---- moments ----
  auto* moments_cmd =
      app.add_subcommand("moments", "Monte Carlo checks of the landscape moment formulas");
  GraphFlags moments_graph;
  moments_graph.attach(moments_cmd);
  moments_graph.family_opt->required();
  double moments_sigma_w = 1.0, moments_sigma_b = 1.0;
  std::int64_t moments_trials = 10000;
  std::uint64_t moments_seed = 0;
  moments_cmd->add_option("--sigma-w", moments_sigma_w, "well std deviation");
  moments_cmd->add_option("--sigma-b", moments_sigma_b, "barrier std deviation");
  moments_cmd->add_option("--trials", moments_trials, "number of sampled landscapes");
  moments_cmd->add_option("--seed", moments_seed, "seed");

  // ---- trajectory ----
  auto* traj_cmd = app.add_subcommand("trajectory", "simulate and compare local/global estimators");
  GraphFlags traj_graph;
  traj_graph.attach(traj_cmd);
  traj_graph.family_opt->required();
  LandscapeFlags traj_landscape;
  traj_landscape.attach(traj_cmd);
  std::int64_t traj_jumps = 100000;
  std::int32_t traj_start = 0;
  std::uint64_t traj_seed = 0;
  std::int64_t traj_min_visits = 10;
  std::string traj_dump;
  traj_cmd->add_option("--jumps", traj_jumps, "number of jumps");
  traj_cmd->add_option("--start", traj_start, "initial state");
  traj_cmd->add_option("--seed", traj_seed, "seed");
  traj_cmd->add_option("--min-visits", traj_min_visits, "per-state minimum visits to report");
  traj_cmd->add_option("--dump", traj_dump, "trajectory CSV dump path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (graph_cmd->parsed()) {
    return run_graph(graph_flags, graph_seed, export_path);
  }

  if (trial_cmd->parsed()) {
    json cfg{{"graph", trial_graph.to_json()}};
    trial_landscape.fill(cfg);
    cfg["trial"] = trial_index;
    cfg["master_seed"] = trial_master_seed;

    if (!landscape_json_path.empty()) {
      lgc_graph* graph = nullptr;
      lgc_status rc = build_graph_handle(trial_graph, trial_master_seed, &graph);
      if (rc != LGC_OK) return report_failure(rc);
      lgc_landscape* ls = nullptr;
      if (trial_landscape.mode == "rem") {
        rc = lgc_landscape_sample_rem(graph, trial_landscape.lambda, trial_landscape.sigma_w,
                                      trial_master_seed, &ls);
      } else if (trial_landscape.mode == "separable") {
        rc = lgc_landscape_sample_separable(graph, trial_landscape.sigma_w,
                                            trial_landscape.f_slope, trial_landscape.f_intercept,
                                            trial_landscape.sep_sigma,
                                            trial_landscape.symmetrize ? 1 : 0, trial_master_seed,
                                            &ls);
      } else {
        rc = lgc_landscape_sample_iid(graph, trial_landscape.sigma_w, trial_landscape.sigma_b,
                                      trial_landscape.sigma_f, trial_master_seed, &ls);
      }
      if (rc != LGC_OK) {
        lgc_graph_free(graph);
        return report_failure(rc);
      }
      char* payload = nullptr;
      rc = lgc_landscape_to_json(ls, &payload);
      lgc_landscape_free(ls);
      lgc_graph_free(graph);
      if (rc != LGC_OK) return report_failure(rc);
      std::ofstream out(landscape_json_path, std::ios::binary);
      out << take_string(payload) << '\n';
      if (!out) {
        std::cerr << "error: cannot write " << landscape_json_path << '\n';
        return kExitRuntimeError;
      }
    }

    char* record = nullptr;
    lgc_status rc;
    if (!scatter_path.empty()) {
      rc = lgc_trial_scatter(cfg.dump().c_str(), scatter_path.c_str(),
                             sidecar_path.empty() ? nullptr : sidecar_path.c_str(), &record);
    } else {
      rc = lgc_trial_run(cfg.dump().c_str(), &record);
    }
    if (rc != LGC_OK) return report_failure(rc);
    std::cout << take_string(record) << '\n';
    return kExitOk;
  }

  auto assemble_sweep_config =
      [&](CLI::App* cmd, const std::string& config_path, const GraphFlags& gf,
          const LandscapeFlags& lf, const std::vector<double>& sw, const std::vector<double>& sb,
          const std::vector<double>& sf, const std::vector<double>& lam, std::int64_t trials,
          std::uint64_t master_seed, int workers, const std::string& trials_csv,
          const std::string& aggregates_csv, const std::string& summary_json, json& cfg,
          std::string& error) -> bool {
    if (!config_path.empty() && !load_config_file(config_path, cfg, error)) return false;
    if (gf.family_opt->count() > 0) cfg["graph"] = gf.to_json();
    if (!cfg.contains("graph") && !cfg.contains("graphs")) {
      error = "no graph given (use --config or --family)";
      return false;
    }
    if (cmd->count("--mode") > 0) cfg["mode"] = lf.mode;
    if (cmd->count("--sigma-w-grid") > 0) cfg["sigma_w"] = sw;
    else if (cmd->count("--sigma-w") > 0) cfg["sigma_w"] = lf.sigma_w;
    if (cmd->count("--sigma-b-grid") > 0) cfg["sigma_b"] = sb;
    else if (cmd->count("--sigma-b") > 0) cfg["sigma_b"] = lf.sigma_b;
    if (cmd->count("--sigma-f-grid") > 0) cfg["sigma_f"] = sf;
    else if (cmd->count("--sigma-f") > 0) cfg["sigma_f"] = lf.sigma_f;
    if (cmd->count("--lambda-grid") > 0) cfg["lambda"] = lam;
    else if (cmd->count("--lambda") > 0) cfg["lambda"] = lf.lambda;
    if (cmd->count("--trials") > 0) cfg["trials"] = trials;
    if (cmd->count("--master-seed") > 0) cfg["master_seed"] = master_seed;
    if (cmd->count("--workers") > 0) cfg["workers"] = workers;
    json output = cfg.value("output", json::object());
    if (cmd->count("--trials-csv") > 0) output["trials_csv"] = trials_csv;
    if (cmd->count("--aggregates-csv") > 0) output["aggregates_csv"] = aggregates_csv;
    if (cmd->count("--summary-json") > 0) output["summary_json"] = summary_json;
    if (!output.empty()) cfg["output"] = output;
    return true;
  };

  if (sweep_cmd->parsed()) {
    json cfg = json::object();
    std::string error;
    if (!assemble_sweep_config(sweep_cmd, sweep_config_path, sweep_graph, sweep_landscape,
                               sweep_sw, sweep_sb, sweep_sf, sweep_lambda, sweep_trials,
                               sweep_master_seed, sweep_workers, sweep_trials_csv,
                               sweep_aggregates_csv, sweep_summary_json, cfg, error)) {
      std::cerr << "error: " << error << '\n';
      return kExitConfigError;
    }
    char* summary = nullptr;
    const lgc_status rc = lgc_sweep_run(cfg.dump().c_str(), &summary);
    if (rc != LGC_OK) return report_failure(rc);
    const std::string text = take_string(summary);
    std::cout << text << '\n';
    const json parsed = json::parse(text);
    if (parsed.value("any_point_without_valid_trials", false)) {
      std::cerr << "error: at least one grid point produced no valid trials\n";
      return kExitRuntimeError;
    }
    return kExitOk;
  }

  if (bounds_cmd->parsed()) {
    json cfg = json::object();
    std::string error;
    if (!assemble_sweep_config(bounds_cmd, bounds_config_path, bounds_graph, bounds_landscape,
                               bounds_sw, bounds_sb, bounds_sf, bounds_lambda, bounds_trials,
                               bounds_master_seed, bounds_workers, bounds_trials_csv,
                               bounds_aggregates_csv, bounds_summary_json, cfg, error)) {
      std::cerr << "error: " << error << '\n';
      return kExitConfigError;
    }
    char* report = nullptr;
    int all_passed = 0;
    const lgc_status rc = lgc_verify_bounds(cfg.dump().c_str(), &report, &all_passed);
    if (rc != LGC_OK) return report_failure(rc);
    std::cout << take_string(report) << '\n';
    return all_passed ? kExitOk : kExitBoundFailure;
  }

  if (moments_cmd->parsed()) {
    json cfg{{"graph", moments_graph.to_json()},
             {"sigma_w", moments_sigma_w},
             {"sigma_b", moments_sigma_b},
             {"trials", moments_trials},
             {"seed", moments_seed}};
    char* report = nullptr;
    int all_passed = 0;
    const lgc_status rc = lgc_moment_suite(cfg.dump().c_str(), &report, &all_passed);
    if (rc != LGC_OK) return report_failure(rc);
    std::cout << take_string(report) << '\n';
    return all_passed ? kExitOk : kExitBoundFailure;
  }

  if (traj_cmd->parsed()) {
    json cfg{{"graph", traj_graph.to_json()}};
    traj_landscape.fill(cfg);
    cfg["num_jumps"] = traj_jumps;
    cfg["start"] = traj_start;
    cfg["seed"] = traj_seed;
    cfg["min_visits"] = traj_min_visits;
    if (!traj_dump.empty()) cfg["trajectory_csv"] = traj_dump;
    char* report = nullptr;
    const lgc_status rc = lgc_trajectory_run(cfg.dump().c_str(), &report);
    if (rc != LGC_OK) return report_failure(rc);
    std::cout << take_string(report) << '\n';
    return kExitOk;
  }

  return kExitConfigError;
}
