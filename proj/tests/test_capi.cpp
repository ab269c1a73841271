// Exercises the shared-library surface end to end: handles, error codes,
// JSON entry points and file outputs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lgcorr.h"

namespace {

std::string take(char* owned) {
  std::string s = owned != nullptr ? owned : "";
  lgc_string_free(owned);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("graph handles") {
  lgc_graph* g = nullptr;
  REQUIRE(lgc_graph_hypercube(10, &g) == LGC_OK);
  CHECK(lgc_graph_num_vertices(g) == 1024);
  CHECK(lgc_graph_num_edges(g) == 5120);
  CHECK(lgc_graph_degree(g) == 10);

  lgc_graph_diagnostics diag{};
  REQUIRE(lgc_graph_validate(g, &diag) == LGC_OK);
  CHECK(diag.simple == 1);
  CHECK(diag.regular == 1);
  CHECK(diag.connected == 1);
  CHECK(diag.degree == 10);
  lgc_graph_free(g);

  lgc_graph* bad = nullptr;
  CHECK(lgc_graph_complete(1, &bad) == LGC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(lgc_last_error()).find("n must be >= 2") != std::string::npos);
  CHECK(lgc_graph_cycle(2, &bad) == LGC_ERR_INVALID_ARGUMENT);
  CHECK(lgc_graph_hypercube(0, &bad) == LGC_ERR_INVALID_ARGUMENT);
  CHECK(lgc_graph_complete(4, nullptr) == LGC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("circulant and random regular handles") {
  const int32_t offsets[2] = {1, 2};
  lgc_graph* base = nullptr;
  REQUIRE(lgc_graph_circulant(64, offsets, 2, &base) == LGC_OK);
  CHECK(lgc_graph_degree(base) == 4);

  lgc_graph* shuffled = nullptr;
  REQUIRE(lgc_graph_random_regular(base, 40, 99, &shuffled) == LGC_OK);
  lgc_graph_diagnostics diag{};
  REQUIRE(lgc_graph_validate(shuffled, &diag) == LGC_OK);
  CHECK(diag.regular == 1);
  CHECK(diag.connected == 1);
  CHECK(diag.degree == 4);
  lgc_graph_free(shuffled);

  const int32_t disconnected[1] = {2};
  lgc_graph* bad = nullptr;
  CHECK(lgc_graph_circulant(8, disconnected, 1, &bad) == LGC_ERR_INVALID_ARGUMENT);
  lgc_graph_free(base);
}

TEST_CASE("edge list export") {
  lgc_graph* g = nullptr;
  REQUIRE(lgc_graph_cycle(4, &g) == LGC_OK);
  const std::string path = "capi_edges.txt";
  REQUIRE(lgc_graph_write_edge_list(g, path.c_str()) == LGC_OK);
  CHECK(read_file(path) == "0 1\n0 3\n1 2\n2 3\n");
  std::remove(path.c_str());
  lgc_graph_free(g);
}

TEST_CASE("landscapes and rho through the C surface") {
  lgc_graph* g = nullptr;
  REQUIRE(lgc_graph_hypercube(6, &g) == LGC_OK);

  SUBCASE("barrier-free iid landscape is perfectly collinear") {
    lgc_landscape* ls = nullptr;
    REQUIRE(lgc_landscape_sample_iid(g, 1.0, 0.0, 0.0, 42, &ls) == LGC_OK);
    int nondegenerate = 0;
    REQUIRE(lgc_landscape_nondegenerate(ls, &nondegenerate) == LGC_OK);
    CHECK(nondegenerate == 1);

    lgc_rho_report report{};
    REQUIRE(lgc_compute_rho(ls, &report) == LGC_OK);
    CHECK(report.rho == 1.0);
    CHECK(report.r == 0.0);
    CHECK(report.n == 64);
    CHECK(report.degree == 6);
    CHECK(std::string(report.solver) == "closed_form");
    lgc_landscape_free(ls);
  }

  SUBCASE("rem landscape serializes canonically") {
    lgc_landscape* ls = nullptr;
    REQUIRE(lgc_landscape_sample_rem(g, 0.5, 1.0, 7, &ls) == LGC_OK);
    char* json_text = nullptr;
    REQUIRE(lgc_landscape_to_json(ls, &json_text) == LGC_OK);
    const std::string a = take(json_text);
    CHECK(a.find("\"lambda\":0.5") != std::string::npos);

    lgc_landscape* again = nullptr;
    REQUIRE(lgc_landscape_sample_rem(g, 0.5, 1.0, 7, &again) == LGC_OK);
    char* json_again = nullptr;
    REQUIRE(lgc_landscape_to_json(again, &json_again) == LGC_OK);
    CHECK(a == take(json_again));
    lgc_landscape_free(again);
    lgc_landscape_free(ls);
  }

  SUBCASE("state table buffers") {
    lgc_landscape* ls = nullptr;
    REQUIRE(lgc_landscape_sample_iid(g, 1.0, 0.5, 0.0, 3, &ls) == LGC_OK);
    std::vector<double> nlp(64), lq(64), w(64), a(64);
    REQUIRE(lgc_state_table(ls, nlp.data(), lq.data(), w.data(), a.data()) == LGC_OK);
    for (int i = 0; i < 64; ++i) {
      CHECK(std::abs(lq[i] - w[i] - a[i]) <= 1e-12);  // reversible identity
    }
    lgc_landscape_free(ls);
  }

  SUBCASE("invalid parameters surface as status codes") {
    lgc_landscape* ls = nullptr;
    CHECK(lgc_landscape_sample_iid(g, 0.0, 1.0, 0.0, 1, &ls) == LGC_ERR_INVALID_ARGUMENT);
    CHECK(lgc_landscape_sample_rem(g, 2.0, 1.0, 1, &ls) == LGC_ERR_INVALID_ARGUMENT);
    CHECK(lgc_landscape_sample_separable(g, 1.0, 0.0, 0.0, 0.0, 0, 1, &ls) ==
          LGC_ERR_INVALID_ARGUMENT);
  }

  lgc_graph_free(g);
}

TEST_CASE("bound evaluators") {
  double c_r = 0.0, bound = 0.0;
  REQUIRE(lgc_disorder_bound(1024, 0.1, 1.0, &c_r, &bound) == LGC_OK);
  CHECK(std::abs(c_r - 6.6177947689506939) <= 1e-12);
  CHECK(std::abs(bound - 0.86764410462098612) <= 1e-12);

  REQUIRE(lgc_locality_bound(1024, 0.9, &c_r, &bound) == LGC_OK);
  CHECK(std::abs(bound - 0.73528820924197224) <= 1e-12);

  CHECK(lgc_disorder_bound(5, 0.1, 1.0, &c_r, &bound) == LGC_ERR_INVALID_ARGUMENT);
  CHECK(lgc_locality_bound(1024, 1.5, &c_r, &bound) == LGC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("trial and scatter entry points") {
  const char* cfg = R"({
    "graph": {"family": "hypercube", "dim": 6},
    "mode": "iid", "sigma_w": 1.0, "sigma_b": 0.0, "sigma_f": 0.0,
    "trial": 0, "master_seed": 11
  })";
  char* record = nullptr;
  REQUIRE(lgc_trial_run(cfg, &record) == LGC_OK);
  const nlohmann::json j = nlohmann::json::parse(take(record));
  CHECK(j.at("rho").get<double>() == 1.0);
  CHECK(j.at("solver").get<std::string>() == "closed_form");

  const std::string csv_path = "capi_scatter.csv";
  const std::string sidecar_path = "capi_scatter.json";
  char* record2 = nullptr;
  REQUIRE(lgc_trial_scatter(cfg, csv_path.c_str(), sidecar_path.c_str(), &record2) == LGC_OK);
  take(record2);
  const std::string csv = read_file(csv_path);
  CHECK(csv.rfind("state,neg_log_pi,log_q,W,A\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);  // header + 64 states
  const nlohmann::json sidecar = nlohmann::json::parse(read_file(sidecar_path));
  CHECK(sidecar.at("rho").get<double>() == 1.0);
  std::remove(csv_path.c_str());
  std::remove(sidecar_path.c_str());

  char* bad = nullptr;
  CHECK(lgc_trial_run("{not json", &bad) == LGC_ERR_INVALID_ARGUMENT);
  CHECK(lgc_trial_run(R"({"graph": {"family": "cycle", "n": 2}})", &bad) ==
        LGC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sweep, bounds, moments and trajectory entry points") {
  SUBCASE("sweep writes deterministic CSVs") {
    const std::string trials_path = "capi_trials.csv";
    const auto config = [&](int workers) {
      nlohmann::json cfg{
          {"graph", {{"family", "hypercube"}, {"dim", 5}}},
          {"mode", "iid"},
          {"sigma_w", 1.0},
          {"sigma_b", {0.0, 1.0}},
          {"trials", 5},
          {"master_seed", 31},
          {"workers", workers},
          {"output", {{"trials_csv", trials_path}}}};
      return cfg.dump();
    };
    char* summary = nullptr;
    REQUIRE(lgc_sweep_run(config(1).c_str(), &summary) == LGC_OK);
    const nlohmann::json s = nlohmann::json::parse(take(summary));
    CHECK(s.at("points").size() == 2);
    const std::string serial = read_file(trials_path);

    char* summary2 = nullptr;
    REQUIRE(lgc_sweep_run(config(3).c_str(), &summary2) == LGC_OK);
    take(summary2);
    CHECK(read_file(trials_path) == serial);
    std::remove(trials_path.c_str());
  }

  SUBCASE("verify bounds") {
    nlohmann::json cfg{{"graph", {{"family", "hypercube"}, {"dim", 8}}},
                       {"mode", "rem"},
                       {"lambda", {0.95, 1.0}},
                       {"trials", 8},
                       {"master_seed", 5}};
    char* report = nullptr;
    int all_passed = 0;
    REQUIRE(lgc_verify_bounds(cfg.dump().c_str(), &report, &all_passed) == LGC_OK);
    const nlohmann::json r = nlohmann::json::parse(take(report));
    CHECK(all_passed == 1);
    CHECK(r.at("checks").size() == 2);
  }

  SUBCASE("moment suite") {
    nlohmann::json cfg{{"graph", {{"family", "hypercube"}, {"dim", 6}}},
                       {"sigma_w", 1.0},
                       {"sigma_b", 1.0},
                       {"trials", 500},
                       {"seed", 13}};
    char* report = nullptr;
    int all_passed = 0;
    REQUIRE(lgc_moment_suite(cfg.dump().c_str(), &report, &all_passed) == LGC_OK);
    const nlohmann::json r = nlohmann::json::parse(take(report));
    CHECK(r.at("checks").size() == 4);
    CHECK(all_passed == 1);
  }

  SUBCASE("trajectory report") {
    nlohmann::json cfg{{"graph", {{"family", "hypercube"}, {"dim", 5}}},
                       {"mode", "iid"},
                       {"sigma_w", 0.5},
                       {"sigma_b", 0.5},
                       {"sigma_f", 0.0},
                       {"num_jumps", 200000},
                       {"seed", 77}};
    char* report = nullptr;
    REQUIRE(lgc_trajectory_run(cfg.dump().c_str(), &report) == LGC_OK);
    const nlohmann::json r = nlohmann::json::parse(take(report));
    CHECK(r.at("median_rel_error_q").get<double>() < 0.1);
    CHECK(r.at("l1_occupation_error").get<double>() < 0.1);
    CHECK(r.at("states_reported").get<int>() == 32);
  }
}

TEST_CASE("status names") {
  CHECK(std::string(lgc_status_name(LGC_OK)) == "ok");
  CHECK(std::string(lgc_status_name(LGC_ERR_INVALID_ARGUMENT)) == "invalid_argument");
  CHECK(std::string(lgc_status_name(LGC_ERR_NO_CONVERGENCE)) == "no_convergence");
}
