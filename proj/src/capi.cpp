#include "lgcorr.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/experiments.hpp"
#include "core/graph.hpp"
#include "core/landscape.hpp"
#include "core/stats.hpp"
#include "core/trajectory.hpp"

struct lgc_graph {
  std::shared_ptr<const lgcorr::Graph> graph;
};

struct lgc_landscape {
  lgcorr::Landscape landscape;
};

namespace {

thread_local std::string g_last_error = "no error";

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
lgc_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    return LGC_OK;
  } catch (const lgcorr::InvalidArgument& e) {
    set_error(e.what());
    return LGC_ERR_INVALID_ARGUMENT;
  } catch (const lgcorr::InvalidState& e) {
    set_error(e.what());
    return LGC_ERR_INVALID_STATE;
  } catch (const lgcorr::ConvergenceError& e) {
    set_error(e.what());
    return LGC_ERR_NO_CONVERGENCE;
  } catch (const lgcorr::IoError& e) {
    set_error(e.what());
    return LGC_ERR_IO;
  } catch (const nlohmann::json::exception& e) {
    set_error(std::string("config: ") + e.what());
    return LGC_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return LGC_ERR_RUNTIME;
  } catch (...) {
    set_error("unknown failure");
    return LGC_ERR_RUNTIME;
  }
}

lgc_status require(bool ok, const char* message) {
  if (ok) return LGC_OK;
  set_error(message);
  return LGC_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_config(const char* config_json) {
  return nlohmann::json::parse(config_json);
}

lgcorr::GridPoint grid_point_from_config(const nlohmann::json& j) {
  // Reuse the sweep parser on a single-point view of the config.
  nlohmann::json sweep = j;
  sweep.erase("trial");
  sweep.erase("master_seed");
  lgcorr::SweepConfig cfg = lgcorr::sweep_config_from_json(sweep);
  const auto points = lgcorr::expand_grid(cfg);
  if (points.size() != 1)
    throw lgcorr::InvalidArgument("config: expected exactly one grid point, got " +
                                  std::to_string(points.size()));
  return points.front();
}

lgcorr::SolveOptions solver_from_config(const nlohmann::json& j) {
  lgcorr::SweepConfig cfg;
  if (j.contains("solver")) {
    nlohmann::json shim{{"graph", {{"family", "cycle"}, {"n", 3}}}, {"solver", j.at("solver")}};
    cfg = lgcorr::sweep_config_from_json(shim);
  }
  return cfg.solver;
}

}  // namespace

extern "C" {

const char* lgc_last_error(void) { return g_last_error.c_str(); }

const char* lgc_status_name(lgc_status status) {
  switch (status) {
    case LGC_OK: return "ok";
    case LGC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LGC_ERR_INVALID_STATE: return "invalid_state";
    case LGC_ERR_NO_CONVERGENCE: return "no_convergence";
    case LGC_ERR_IO: return "io_error";
    case LGC_ERR_RUNTIME: return "runtime_error";
  }
  return "unknown";
}

void lgc_string_free(char* str) { delete[] str; }

lgc_status lgc_graph_complete(int32_t n, lgc_graph** out) {
  if (auto rc = require(out != nullptr, "lgc_graph_complete: out is NULL")) return rc;
  return wrap([&] {
    *out = new lgc_graph{std::make_shared<const lgcorr::Graph>(lgcorr::Graph::complete(n))};
  });
}

lgc_status lgc_graph_hypercube(int32_t dim, lgc_graph** out) {
  if (auto rc = require(out != nullptr, "lgc_graph_hypercube: out is NULL")) return rc;
  return wrap([&] {
    *out = new lgc_graph{std::make_shared<const lgcorr::Graph>(lgcorr::Graph::hypercube(dim))};
  });
}

lgc_status lgc_graph_cycle(int32_t n, lgc_graph** out) {
  if (auto rc = require(out != nullptr, "lgc_graph_cycle: out is NULL")) return rc;
  return wrap([&] {
    *out = new lgc_graph{std::make_shared<const lgcorr::Graph>(lgcorr::Graph::cycle(n))};
  });
}

lgc_status lgc_graph_circulant(int32_t n, const int32_t* offsets, size_t num_offsets,
                               lgc_graph** out) {
  if (auto rc = require(out != nullptr, "lgc_graph_circulant: out is NULL")) return rc;
  if (auto rc = require(offsets != nullptr || num_offsets == 0,
                        "lgc_graph_circulant: offsets is NULL"))
    return rc;
  return wrap([&] {
    *out = new lgc_graph{std::make_shared<const lgcorr::Graph>(
        lgcorr::Graph::circulant(n, {offsets, num_offsets}))};
  });
}

lgc_status lgc_graph_random_regular(const lgc_graph* base, int64_t num_swap_pairs, uint64_t seed,
                                    lgc_graph** out) {
  if (auto rc = require(base != nullptr && out != nullptr,
                        "lgc_graph_random_regular: NULL argument"))
    return rc;
  return wrap([&] {
    *out = new lgc_graph{std::make_shared<const lgcorr::Graph>(
        lgcorr::Graph::random_regular_by_swaps(*base->graph, num_swap_pairs, seed))};
  });
}

void lgc_graph_free(lgc_graph* graph) { delete graph; }

int32_t lgc_graph_num_vertices(const lgc_graph* graph) {
  return graph ? graph->graph->num_vertices() : -1;
}

int64_t lgc_graph_num_edges(const lgc_graph* graph) {
  return graph ? graph->graph->num_edges() : -1;
}

int32_t lgc_graph_degree(const lgc_graph* graph) { return graph ? graph->graph->degree() : -1; }

lgc_status lgc_graph_validate(const lgc_graph* graph, lgc_graph_diagnostics* out) {
  if (auto rc = require(graph != nullptr && out != nullptr, "lgc_graph_validate: NULL argument"))
    return rc;
  return wrap([&] {
    const lgcorr::GraphDiagnostics d = graph->graph->validate();
    out->simple = d.simple ? 1 : 0;
    out->regular = d.regular ? 1 : 0;
    out->connected = d.connected ? 1 : 0;
    out->degree = d.degree;
  });
}

lgc_status lgc_graph_write_edge_list(const lgc_graph* graph, const char* path) {
  if (auto rc = require(graph != nullptr && path != nullptr,
                        "lgc_graph_write_edge_list: NULL argument"))
    return rc;
  return wrap([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lgcorr::IoError(std::string("cannot open output file: ") + path);
    graph->graph->write_edge_list(out);
  });
}

lgc_status lgc_landscape_sample_iid(const lgc_graph* graph, double sigma_w, double sigma_b,
                                    double sigma_f, uint64_t seed, lgc_landscape** out) {
  if (auto rc = require(graph != nullptr && out != nullptr,
                        "lgc_landscape_sample_iid: NULL argument"))
    return rc;
  return wrap([&] {
    *out = new lgc_landscape{
        lgcorr::Landscape::sample_iid(graph->graph, sigma_w, sigma_b, sigma_f, seed)};
  });
}

lgc_status lgc_landscape_sample_rem(const lgc_graph* graph, double lambda, double sigma_w,
                                    uint64_t seed, lgc_landscape** out) {
  if (auto rc = require(graph != nullptr && out != nullptr,
                        "lgc_landscape_sample_rem: NULL argument"))
    return rc;
  return wrap([&] {
    *out = new lgc_landscape{lgcorr::Landscape::sample_rem(graph->graph, lambda, sigma_w, seed)};
  });
}

lgc_status lgc_landscape_sample_separable(const lgc_graph* graph, double sigma_w, double f_slope,
                                          double f_intercept, double sigma, int symmetrize,
                                          uint64_t seed, lgc_landscape** out) {
  if (auto rc = require(graph != nullptr && out != nullptr,
                        "lgc_landscape_sample_separable: NULL argument"))
    return rc;
  return wrap([&] {
    lgcorr::SeparableSpec spec{f_slope, f_intercept, sigma};
    *out = new lgc_landscape{
        lgcorr::Landscape::sample_separable(graph->graph, sigma_w, spec, symmetrize != 0, seed)};
  });
}

void lgc_landscape_free(lgc_landscape* landscape) { delete landscape; }

lgc_status lgc_landscape_nondegenerate(const lgc_landscape* landscape, int* out) {
  if (auto rc = require(landscape != nullptr && out != nullptr,
                        "lgc_landscape_nondegenerate: NULL argument"))
    return rc;
  return wrap([&] { *out = lgcorr::exit_rates_nondegenerate(landscape->landscape) ? 1 : 0; });
}

lgc_status lgc_landscape_to_json(const lgc_landscape* landscape, char** json_out) {
  if (auto rc = require(landscape != nullptr && json_out != nullptr,
                        "lgc_landscape_to_json: NULL argument"))
    return rc;
  return wrap([&] { *json_out = copy_string(landscape->landscape.to_canonical_json()); });
}

lgc_status lgc_compute_rho(const lgc_landscape* landscape, lgc_rho_report* out) {
  if (auto rc = require(landscape != nullptr && out != nullptr,
                        "lgc_compute_rho: NULL argument"))
    return rc;
  return wrap([&] {
    const lgcorr::Landscape& ls = landscape->landscape;
    if (!lgcorr::exit_rates_nondegenerate(ls))
      throw lgcorr::InvalidState("lgc_compute_rho: degenerate exit rates");
    const lgcorr::RateMatrix rm = lgcorr::RateMatrix::build(ls);
    const bool reversible = !ls.has_forces() && ls.symmetric_barriers();
    const lgcorr::StationaryResult st =
        reversible ? lgcorr::stationary_reversible(ls) : lgcorr::stationary_general(rm);
    const std::vector<double> log_q = rm.exit_log_rates();
    const std::vector<double> a = lgcorr::barrier_functional(ls);
    const std::vector<double> wells(ls.wells().begin(), ls.wells().end());
    const lgcorr::RhoReport rep =
        lgcorr::rho_report(st.neg_log_pi, log_q, wells, a, ls.graph().degree(), reversible);
    out->rho = rep.rho;
    out->rho_hat = rep.rho_hat;
    out->r = rep.r;
    out->var_w = rep.var_w;
    out->var_a = rep.var_a;
    out->n = rep.n;
    out->degree = rep.degree;
    out->degenerate = rep.degenerate ? 1 : 0;
    std::snprintf(out->solver, sizeof(out->solver), "%s",
                  lgcorr::stationary_method_name(st.method).c_str());
  });
}

lgc_status lgc_state_table(const lgc_landscape* landscape, double* neg_log_pi, double* log_q,
                           double* wells, double* barrier_lse) {
  if (auto rc = require(landscape != nullptr, "lgc_state_table: landscape is NULL")) return rc;
  return wrap([&] {
    const lgcorr::Landscape& ls = landscape->landscape;
    const std::size_t n = static_cast<std::size_t>(ls.graph().num_vertices());
    if (neg_log_pi != nullptr || log_q != nullptr) {
      const lgcorr::RateMatrix rm = lgcorr::RateMatrix::build(ls);
      if (neg_log_pi != nullptr) {
        const bool reversible = !ls.has_forces() && ls.symmetric_barriers();
        const lgcorr::StationaryResult st =
            reversible ? lgcorr::stationary_reversible(ls) : lgcorr::stationary_general(rm);
        std::memcpy(neg_log_pi, st.neg_log_pi.data(), n * sizeof(double));
      }
      if (log_q != nullptr) {
        const std::vector<double> lq = rm.exit_log_rates();
        std::memcpy(log_q, lq.data(), n * sizeof(double));
      }
    }
    if (wells != nullptr) {
      std::memcpy(wells, ls.wells().data(), n * sizeof(double));
    }
    if (barrier_lse != nullptr) {
      const std::vector<double> a = lgcorr::barrier_functional(ls);
      std::memcpy(barrier_lse, a.data(), n * sizeof(double));
    }
  });
}

lgc_status lgc_disorder_bound(int32_t n, double sigma_b, double sigma_w, double* c_r,
                              double* bound) {
  return wrap([&] {
    const lgcorr::BoundEvaluation ev = lgcorr::disorder_bound(n, sigma_b, sigma_w);
    if (c_r != nullptr) *c_r = ev.c_r;
    if (bound != nullptr) *bound = ev.rho_lower_bound;
  });
}

lgc_status lgc_locality_bound(int32_t n, double lambda, double* c_r, double* bound) {
  return wrap([&] {
    const lgcorr::BoundEvaluation ev = lgcorr::locality_bound(n, lambda);
    if (c_r != nullptr) *c_r = ev.c_r;
    if (bound != nullptr) *bound = ev.rho_lower_bound;
  });
}

namespace {

// Optional "landscape_json" key: serialize the exact landscape the trial
// draws (same derived seed) to that path.
void maybe_dump_trial_landscape(const nlohmann::json& j, const lgcorr::GridPoint& point) {
  if (!j.contains("landscape_json")) return;
  const std::string path = j.at("landscape_json").get<std::string>();
  const lgcorr::Landscape ls = lgcorr::materialize_trial_landscape(
      point, j.value("trial", std::int64_t{0}), j.value("master_seed", std::uint64_t{0}));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lgcorr::IoError("cannot open output file: " + path);
  out << ls.to_canonical_json() << '\n';
}

}  // namespace

lgc_status lgc_trial_run(const char* config_json, char** record_json_out) {
  if (auto rc = require(config_json != nullptr && record_json_out != nullptr,
                        "lgc_trial_run: NULL argument"))
    return rc;
  return wrap([&] {
    const nlohmann::json j = parse_config(config_json);
    const lgcorr::GridPoint point = grid_point_from_config(j);
    const lgcorr::TrialRecord rec =
        lgcorr::run_trial(point, j.value("trial", std::int64_t{0}),
                          j.value("master_seed", std::uint64_t{0}), solver_from_config(j));
    maybe_dump_trial_landscape(j, point);
    *record_json_out = copy_string(lgcorr::trial_record_json(rec).dump(2));
  });
}

lgc_status lgc_trial_scatter(const char* config_json, const char* csv_path,
                             const char* sidecar_json_path, char** record_json_out) {
  if (auto rc = require(config_json != nullptr && csv_path != nullptr,
                        "lgc_trial_scatter: NULL argument"))
    return rc;
  return wrap([&] {
    const nlohmann::json j = parse_config(config_json);
    const lgcorr::GridPoint point = grid_point_from_config(j);
    const lgcorr::ScatterData data =
        lgcorr::run_scatter_trial(point, j.value("trial", std::int64_t{0}),
                                  j.value("master_seed", std::uint64_t{0}), solver_from_config(j));
    lgcorr::write_scatter(data, csv_path,
                          sidecar_json_path != nullptr ? sidecar_json_path : "");
    if (record_json_out != nullptr)
      *record_json_out = copy_string(lgcorr::trial_record_json(data.record).dump(2));
  });
}

lgc_status lgc_sweep_run(const char* config_json, char** summary_json_out) {
  if (auto rc = require(config_json != nullptr, "lgc_sweep_run: config is NULL")) return rc;
  return wrap([&] {
    const lgcorr::SweepConfig cfg = lgcorr::sweep_config_from_json(parse_config(config_json));
    const lgcorr::SweepResult result = lgcorr::run_sweep(cfg);
    lgcorr::write_sweep_outputs(cfg, result);
    if (summary_json_out != nullptr)
      *summary_json_out = copy_string(lgcorr::sweep_summary_json(result).dump(2));
  });
}

lgc_status lgc_verify_bounds(const char* config_json, char** report_json_out, int* all_passed) {
  if (auto rc = require(config_json != nullptr, "lgc_verify_bounds: config is NULL")) return rc;
  return wrap([&] {
    const lgcorr::SweepConfig cfg = lgcorr::sweep_config_from_json(parse_config(config_json));
    const lgcorr::BoundReport report = lgcorr::verify_bounds(cfg);
    if (report_json_out != nullptr)
      *report_json_out = copy_string(lgcorr::bound_report_json(report).dump(2));
    if (all_passed != nullptr) *all_passed = report.all_pass ? 1 : 0;
  });
}

lgc_status lgc_moment_suite(const char* config_json, char** report_json_out, int* all_passed) {
  if (auto rc = require(config_json != nullptr, "lgc_moment_suite: config is NULL")) return rc;
  return wrap([&] {
    const nlohmann::json j = parse_config(config_json);
    nlohmann::json shim{{"graph", j.at("graph")}};
    lgcorr::SweepConfig cfg = lgcorr::sweep_config_from_json(shim);
    const lgcorr::Graph graph = lgcorr::build_graph(cfg.graphs.front(), j.value("seed", std::uint64_t{0}));
    const lgcorr::MomentSuiteReport report = lgcorr::empirical_moment_suite(
        graph, j.value("sigma_w", 1.0), j.value("sigma_b", 1.0),
        j.value("trials", std::int64_t{10000}), j.value("seed", std::uint64_t{0}));
    if (report_json_out != nullptr)
      *report_json_out = copy_string(lgcorr::moment_suite_json(report).dump(2));
    if (all_passed != nullptr) *all_passed = report.all_pass ? 1 : 0;
  });
}

lgc_status lgc_trajectory_run(const char* config_json, char** report_json_out) {
  if (auto rc = require(config_json != nullptr, "lgc_trajectory_run: config is NULL")) return rc;
  return wrap([&] {
    const nlohmann::json j = parse_config(config_json);
    const lgcorr::GridPoint point = grid_point_from_config(j);
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    const std::int64_t num_jumps = j.value("num_jumps", std::int64_t{100000});
    const std::int64_t min_visits = j.value("min_visits", std::int64_t{10});

    auto graph = std::make_shared<const lgcorr::Graph>(
        lgcorr::build_graph(point.graph, lgcorr::substream_seed(seed, "graph")));
    lgcorr::Landscape ls = [&]() -> lgcorr::Landscape {
      const std::uint64_t ls_seed = lgcorr::substream_seed(seed, "landscape");
      switch (point.mode) {
        case lgcorr::LandscapeMode::rem:
          return lgcorr::Landscape::sample_rem(graph, point.lambda, point.sigma_w, ls_seed);
        case lgcorr::LandscapeMode::separable:
          return lgcorr::Landscape::sample_separable(graph, point.sigma_w, point.separable,
                                                     point.symmetrize, ls_seed);
        default:
          return lgcorr::Landscape::sample_iid(graph, point.sigma_w, point.sigma_b,
                                               point.sigma_f, ls_seed);
      }
    }();

    const lgcorr::RateMatrix rm = lgcorr::RateMatrix::build(ls);
    const lgcorr::Trajectory traj =
        lgcorr::simulate(rm, j.value("start", std::int32_t{0}), num_jumps,
                         lgcorr::substream_seed(seed, "trajectory"));
    if (j.contains("trajectory_csv")) {
      const std::string path = j.at("trajectory_csv").get<std::string>();
      std::ofstream out(path, std::ios::binary);
      if (!out) throw lgcorr::IoError("cannot open output file: " + path);
      lgcorr::write_trajectory_csv(out, traj);
    }

    const auto n = graph->num_vertices();
    const lgcorr::ExitRateEstimates qhat = lgcorr::estimate_exit_rates(traj, n, min_visits);
    const lgcorr::OccupationEstimates pihat = lgcorr::estimate_occupation(traj, n, min_visits);

    // Compare against the exact chain.
    const std::vector<double> log_q = rm.exit_log_rates();
    const bool reversible = !ls.has_forces() && ls.symmetric_barriers();
    const lgcorr::StationaryResult st =
        reversible ? lgcorr::stationary_reversible(ls) : lgcorr::stationary_general(rm);

    std::vector<double> rel_errors;
    std::vector<double> est_neg_log_pi, est_log_q, exact_neg_log_pi, exact_log_q;
    double l1 = 0.0;
    std::int64_t reported = 0;
    for (std::int32_t s = 0; s < n; ++s) {
      const double exact_q = std::exp(log_q[static_cast<std::size_t>(s)]);
      const double pi_exact = std::exp(-st.neg_log_pi[static_cast<std::size_t>(s)]);
      l1 += std::abs(pihat.time_share[static_cast<std::size_t>(s)] - pi_exact);
      const double q_est = qhat.q_hat[static_cast<std::size_t>(s)];
      if (!std::isnan(q_est)) {
        ++reported;
        rel_errors.push_back(std::abs(q_est - exact_q) / exact_q);
        if (pihat.time_share[static_cast<std::size_t>(s)] > 0.0) {
          est_neg_log_pi.push_back(-std::log(pihat.time_share[static_cast<std::size_t>(s)]));
          est_log_q.push_back(std::log(q_est));
          exact_neg_log_pi.push_back(st.neg_log_pi[static_cast<std::size_t>(s)]);
          exact_log_q.push_back(log_q[static_cast<std::size_t>(s)]);
        }
      }
    }
    double median_rel_error = std::numeric_limits<double>::quiet_NaN();
    if (!rel_errors.empty()) {
      std::sort(rel_errors.begin(), rel_errors.end());
      median_rel_error = rel_errors[rel_errors.size() / 2];
    }
    double rho_est = std::numeric_limits<double>::quiet_NaN();
    double rho_exact = std::numeric_limits<double>::quiet_NaN();
    if (est_neg_log_pi.size() >= 2) {
      rho_est = lgcorr::pearson(est_neg_log_pi, est_log_q).value_or(rho_est);
      rho_exact = lgcorr::pearson(exact_neg_log_pi, exact_log_q).value_or(rho_exact);
    }

    nlohmann::json rep{{"point", point.label()},
                       {"n", n},
                       {"num_jumps", num_jumps},
                       {"seed", seed},
                       {"total_time", traj.total_time},
                       {"min_visits", min_visits},
                       {"states_reported", reported},
                       {"median_rel_error_q", median_rel_error},
                       {"l1_occupation_error", l1},
                       {"rho_from_estimates", rho_est},
                       {"rho_exact_on_reported", rho_exact}};
    if (report_json_out != nullptr) *report_json_out = copy_string(rep.dump(2));
  });
}

}  // extern "C"
