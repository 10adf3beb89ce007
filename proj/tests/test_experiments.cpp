#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nsvfp/experiments.hpp"

using namespace nsvfp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentPlan tiny_conservation(const std::string& root) {
  ExperimentPlan plan;
  plan.preset = "conservation";
  plan.out_root = root;
  plan.emit_plots = false;
  plan.fixed_dirname = true;
  plan.config = preset_config("conservation");
  plan.config.grid = SpectralGrid{8, 4};
  plan.config.t_end = 0.5;
  plan.config.sample_stride = 2;
  return plan;
}

}  // namespace

TEST_CASE("conservation preset: artifacts, schema, and verdict") {
  const std::string root = "/tmp/nsvfp_exp_smoke";
  fs::remove_all(root);
  const ExperimentSummary sum = run_experiment(tiny_conservation(root));
  CHECK(sum.preset == "conservation");
  CHECK(sum.out_dir == root + "/conservation_000000");
  REQUIRE(fs::exists(sum.out_dir + "/series_main.csv"));
  REQUIRE(fs::exists(sum.out_dir + "/summary.json"));

  const std::string csv = slurp(sum.out_dir + "/series_main.csv");
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "t,E_s0,G1,sum_G2,mass_res_max,mom_res,ubar_res,hypo_pair_sum,hypo_bracket_sum,"
        "E_tilde,hydro_res_max");

  const auto js = nlohmann::json::parse(slurp(sum.out_dir + "/summary.json"));
  CHECK(js.at("preset") == "conservation");
  CHECK(js.at("pass").is_boolean());
  CHECK(js.at("config").at("epsilon").get<double>() == 0.1);
  CHECK(js.at("config").at("n_x").get<int>() == 8);
  REQUIRE(js.at("checks").is_array());
  REQUIRE(js.at("checks").size() == 3);
  CHECK(js.at("checks")[0].at("name") == "mass_residual");

  // the invariants hold at any resolution, so the downsized run must pass
  CHECK(sum.pass);
  REQUIRE(sum.checks.size() == 3);
  for (const auto& ck : sum.checks) {
    CAPTURE(ck.name);
    CHECK(ck.pass);
  }
  fs::remove_all(root);
}

TEST_CASE("relaxation preset passes as shipped") {
  ExperimentPlan plan;
  plan.preset = "relaxation";
  plan.out_root = "/tmp/nsvfp_exp_relax";
  fs::remove_all(plan.out_root);
  plan.emit_plots = false;
  plan.fixed_dirname = true;
  plan.config = preset_config("relaxation");
  const ExperimentSummary sum = run_experiment(plan);
  REQUIRE(sum.checks.size() == 2);
  for (const auto& ck : sum.checks) {
    CAPTURE(ck.name);
    CAPTURE(ck.value);
    CHECK(ck.pass);
  }
  CHECK(sum.pass);
  CHECK(fs::exists(sum.out_dir + "/series_eps1.csv"));
  CHECK(fs::exists(sum.out_dir + "/series_eps0.01.csv"));
  fs::remove_all(plan.out_root);
}

TEST_CASE("repeat runs produce byte-identical series") {
  const std::string r1 = "/tmp/nsvfp_exp_det1", r2 = "/tmp/nsvfp_exp_det2";
  fs::remove_all(r1);
  fs::remove_all(r2);
  const ExperimentSummary a = run_experiment(tiny_conservation(r1));
  const ExperimentSummary b = run_experiment(tiny_conservation(r2));
  CHECK(slurp(a.out_dir + "/series_main.csv") == slurp(b.out_dir + "/series_main.csv"));
  fs::remove_all(r1);
  fs::remove_all(r2);
}

TEST_CASE("worker count does not change the results") {
  auto make = [](const std::string& root, int threads) {
    ExperimentPlan plan;
    plan.preset = "hydro_sweep";
    plan.out_root = root;
    plan.emit_plots = false;
    plan.fixed_dirname = true;
    plan.threads = threads;
    plan.config = preset_config("hydro_sweep");
    plan.config.grid = SpectralGrid{8, 4};
    plan.config.t_end = 0.4;
    plan.config.sample_stride = 4;
    return plan;
  };
  const std::string r1 = "/tmp/nsvfp_exp_t1", r2 = "/tmp/nsvfp_exp_t2";
  fs::remove_all(r1);
  fs::remove_all(r2);
  const ExperimentSummary a = run_experiment(make(r1, 1));
  const ExperimentSummary b = run_experiment(make(r2, 2));
  REQUIRE(a.checks.size() == b.checks.size());
  for (size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].value == b.checks[i].value);
  }
  for (const auto& entry : fs::directory_iterator(a.out_dir)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path other = fs::path(b.out_dir) / entry.path().filename();
    CAPTURE(entry.path().string());
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
  fs::remove_all(r1);
  fs::remove_all(r2);
}
