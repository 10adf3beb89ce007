#include <benchmark/benchmark.h>

#include "nsvfp/diagnostics.hpp"
#include "nsvfp/initial.hpp"
#include "nsvfp/sg.hpp"

using namespace nsvfp;

namespace {

Config bench_cfg(int dim, int n_x, int n_v) {
  ModelParams p;
  p.dim = dim;
  p.sizes = {1, 2};
  p.epsilon = 0.1;
  return Config::make(p, SpectralGrid{n_x, n_v});
}

SimState bench_state(const Config& c) {
  InitialSpec spec;
  spec.profile = c.lay.dim > 1 ? InitialSpec::Profile::shear_kinetic
                               : InitialSpec::Profile::mixed;
  spec.amplitude = 0.05;
  return make_initial_state(spec, c, 0.0);
}

void solver_step(benchmark::State& state) {
  const Config c = bench_cfg(int(state.range(0)), int(state.range(1)), int(state.range(2)));
  SimState s = bench_state(c);
  Solver solver(c, 0.5 * default_dt(c, 10.0));
  for (auto _ : state) {
    solver.step(s);
    benchmark::DoNotOptimize(s.u_hat[0][0]);
  }
}
BENCHMARK(solver_step)->Args({1, 32, 16})->Args({2, 12, 8})->Args({2, 16, 8})
    ->Unit(benchmark::kMillisecond);

void sg_step(benchmark::State& state) {
  const Config c = bench_cfg(2, 12, 8);
  const GpcBasis b = build_basis(Measure::uniform(), int(state.range(0)));
  InitialSpec spec;
  spec.profile = InitialSpec::Profile::shear_kinetic;
  spec.amplitude = 0.04;
  spec.z_form = InitialSpec::ZForm::linear;
  spec.z_coupling = 0.3;
  SgInit init = expand_initial(spec, c, b);
  SgSolver solver(c, b, 0.5 * default_dt(c, 10.0));
  for (auto _ : state) {
    solver.step(init.state);
    benchmark::DoNotOptimize(init.state.blocks[0].u_hat[0][0]);
  }
}
BENCHMARK(sg_step)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void padded_product(benchmark::State& state) {
  const Config c = bench_cfg(2, int(state.range(0)), 4);
  PaddedFft fft(c);
  std::vector<cplx> a(c.lay.modes), b(c.lay.modes), out(c.lay.modes);
  for (int m = 0; m < c.lay.modes; ++m) {
    a[m] = cplx{1.0 / (1.0 + m), 0.5};
    b[m] = cplx{0.3, 1.0 / (2.0 + m)};
  }
  for (auto _ : state) {
    fft.product(a, b, out);
    benchmark::DoNotOptimize(out[0]);
  }
}
BENCHMARK(padded_product)->Arg(12)->Arg(16)->Arg(32);

void stiff_build(benchmark::State& state) {
  const Config c = bench_cfg(2, int(state.range(0)), 8);
  for (auto _ : state) {
    StiffPropagator prop(c, 1e-3);
    benchmark::DoNotOptimize(prop.dt());
  }
}
BENCHMARK(stiff_build)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void energy_norm(benchmark::State& state) {
  const Config c = bench_cfg(2, 16, 8);
  const SimState s = bench_state(c);
  for (auto _ : state) {
    const EnergyBreakdown e = energy(c, s, 2);
    benchmark::DoNotOptimize(e.total);
  }
}
BENCHMARK(energy_norm);

void triple_contraction(benchmark::State& state) {
  const GpcBasis b = build_basis(Measure::uniform(), int(state.range(0)));
  const TripleTensor t = triple_products(b);
  std::vector<cplx> x(size_t(b.K)), y(size_t(b.K));
  for (int k = 0; k < b.K; ++k) {
    x[k] = cplx{1.0 / (1 + k), 0.2};
    y[k] = cplx{0.4, 1.0 / (2 + k)};
  }
  for (auto _ : state) {
    auto out = galerkin_product(x, y, t);
    benchmark::DoNotOptimize(out[0]);
  }
}
BENCHMARK(triple_contraction)->Arg(4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
