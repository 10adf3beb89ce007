#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsvfp/experiments.hpp"
#include "nsvfp/gpc.hpp"
#include "nsvfp/solver.hpp"

namespace {

using namespace nsvfp;

RunConfig assemble_config(const std::string& preset, const std::string& config_path,
                          const std::vector<std::string>& sets) {
  RunConfig rc = preset_config(preset);
  if (!config_path.empty()) rc = load_run_config(config_path, rc);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    apply_config_entry(rc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return rc;
}

int cmd_run(const std::string& preset, const RunConfig& rc, const std::string& out_root,
            int threads, bool plots, bool fixed_dirname) {
  ExperimentPlan plan;
  plan.preset = preset;
  plan.out_root = out_root;
  plan.threads = threads;
  plan.emit_plots = plots;
  plan.fixed_dirname = fixed_dirname;
  plan.config = rc;
  const ExperimentSummary s = run_experiment(plan);
  for (const auto& ck : s.checks)
    std::printf("[%s] %-32s value=%.6g threshold=%.6g\n", ck.pass ? "PASS" : "FAIL",
                ck.name.c_str(), ck.value, ck.threshold);
  std::printf("%s: %s (outputs in %s)\n", preset.c_str(), s.pass ? "all checks passed" : "FAILED",
              s.out_dir.c_str());
  return s.pass ? 0 : 1;
}

int cmd_validate(const RunConfig& rc) {
  validate_params(rc.params, rc.grid);
  const Config c = Config::make(rc.params, rc.grid);
  std::printf("dim=%d n_x=%d n_v=%d modes=%d herms=%d species=%d\n", c.p.dim, c.g.n_x, c.g.n_v,
              c.lay.modes, c.lay.herms, c.n_species());
  std::printf("beta=%.12g sum_cbrt=%.12g volume=%.12g\n", c.beta, c.sum_cbrt, c.volume);
  for (int i = 0; i < c.n_species(); ++i)
    std::printf("species %d: size=%g sigma=%.12g gamma_fp=%.12g force=%.12g drag=%.12g\n", i,
                double(c.p.sizes[i]), c.sigma[i], c.gamma_fp[i], c.c_force[i], c.d_drag[i]);
  const double bound = transport_bound(c);
  const double dt = rc.dt > 0 ? rc.dt : default_dt(c, rc.t_end);
  std::printf("transport_bound=%.6g dt=%.6g dt*bound=%.6g\n", bound, dt, dt * bound);
  if (dt * bound > 1.0) {
    std::printf("configuration rejected: explicit step too large for the transport spectrum\n");
    return 1;
  }
  std::printf("configuration ok\n");
  return 0;
}

int cmd_dump_tensor(const std::string& measure, int K, int Q, const std::string& out_path) {
  Measure m = measure == "chebyshev" ? Measure::chebyshev() : Measure::uniform();
  if (measure != "chebyshev" && measure != "uniform")
    throw std::invalid_argument("unknown measure '" + measure + "'");
  const GpcBasis b = build_basis(m, K, Q);
  const TripleTensor t = triple_products(b);
  std::ofstream file;
  std::ostream* os = nullptr;
  if (out_path.empty() || out_path == "-") {
    os = nullptr;
  } else {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    os = &file;
  }
  auto emit = [&](const char* line) {
    if (os)
      (*os) << line << '\n';
    else
      std::printf("%s\n", line);
  };
  emit("j,l,k,value");
  char buf[96];
  for (const auto& e : t.unique_nonzeros()) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g", e.j, e.l, e.k, e.value);
    emit(buf);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral simulator for a multi-size kinetic-fluid perturbation system"};
  app.require_subcommand(1);

  std::string preset, config_path, out_root = "runs";
  std::vector<std::string> sets;
  int threads = 1;
  bool no_plots = false, fixed_dirname = false;
  auto* run = app.add_subcommand("run", "run an experiment preset and evaluate its checks");
  run->add_option("preset", preset, "relaxation|conservation|decay|k_sweep|eps_sweep|hydro_sweep")
      ->required();
  run->add_option("--config", config_path, "key = value file layered over the preset defaults");
  run->add_option("--set", sets, "inline override key=value (repeatable)");
  run->add_option("--threads", threads, "workers for independent sweep points");
  run->add_option("--out", out_root, "output root directory");
  run->add_flag("--no-plots", no_plots, "skip SVG output");
  run->add_flag("--fixed-dirname", fixed_dirname, "name the run dir <preset>_000000");

  std::string vpreset = "conservation", vconfig;
  std::vector<std::string> vsets;
  auto* val = app.add_subcommand("validate", "check a configuration, print derived constants");
  val->add_option("--preset", vpreset, "preset supplying the defaults");
  val->add_option("--config", vconfig, "key = value file layered over the preset defaults");
  val->add_option("--set", vsets, "inline override key=value (repeatable)");

  std::string measure = "uniform", tensor_out;
  int K = 5, Q = 0;
  auto* dump = app.add_subcommand("dump-tensor", "print the triple-product tensor as CSV");
  dump->add_option("--measure", measure, "uniform|chebyshev");
  dump->add_option("-K,--order", K, "basis size");
  dump->add_option("-Q,--quad", Q, "Gauss points (0 = default 2K)");
  dump->add_option("--out", tensor_out, "file path ('-' for stdout)");

  auto* ver = app.add_subcommand("version", "print the library version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ver->parsed()) {
      std::printf("nsvfp 0.1.0\n");
      return 0;
    }
    if (dump->parsed()) return cmd_dump_tensor(measure, K, Q, tensor_out);
    if (val->parsed()) return cmd_validate(assemble_config(vpreset, vconfig, vsets));
    if (run->parsed())
      return cmd_run(preset, assemble_config(preset, config_path, sets), out_root, threads,
                     !no_plots, fixed_dirname);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
