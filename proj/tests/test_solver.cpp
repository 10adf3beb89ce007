#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nsvfp/diagnostics.hpp"
#include "nsvfp/initial.hpp"
#include "nsvfp/phase_space.hpp"
#include "nsvfp/solver.hpp"

using namespace nsvfp;

namespace {

Config make_cfg(int dim, int n_x, int n_v, std::vector<int> sizes, double eps, double kappa = 1.0,
                double theta = 1.0, double L = two_pi) {
  ModelParams p;
  p.dim = dim;
  p.sizes = std::move(sizes);
  p.epsilon = eps;
  p.kappa = kappa;
  p.theta_bar = theta;
  p.domain_length = L;
  return Config::make(p, SpectralGrid{n_x, n_v});
}

// Independent dense matrix exponential: scaling and squaring over a plain
// Taylor series (plenty for the well-conditioned test blocks).
std::vector<double> taylor_expm(std::vector<double> A, int n) {
  double norm = 0.0;
  for (double v : A) norm = std::max(norm, std::abs(v));
  int s = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++s;
  }
  const double sc = std::ldexp(1.0, -s);
  for (double& v : A) v *= sc;
  std::vector<double> E(size_t(n) * n, 0.0), term(size_t(n) * n, 0.0), next(size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    E[size_t(i) * n + i] = 1.0;
    term[size_t(i) * n + i] = 1.0;
  }
  for (int k = 1; k <= 24; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += term[size_t(i) * n + l] * A[size_t(l) * n + j];
        next[size_t(i) * n + j] = acc / k;
      }
    term = next;
    for (size_t q = 0; q < E.size(); ++q) E[q] += term[q];
  }
  for (int r = 0; r < s; ++r) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += E[size_t(i) * n + l] * E[size_t(l) * n + j];
        next[size_t(i) * n + j] = acc;
      }
    E = next;
  }
  return E;
}

double momentum_functional(const Config& c, const SimState& s, int a, int m) {
  const int h0 = c.lay.herm_index({0, 0, 0});
  const int ha = c.lay.herm_shift(h0, a, +1);
  double acc = s.u_hat[a][m].real();
  for (int i = 0; i < c.n_species(); ++i)
    acc += c.p.kappa * c.beta * c.p.sizes[i] * c.sigma[i] * s.f(i, ha, m, c).real();
  return acc;
}

double max_coeff_diff(const SimState& a, const SimState& b) {
  double worst = 0.0;
  for (size_t j = 0; j < a.u_hat.size(); ++j)
    for (size_t m = 0; m < a.u_hat[j].size(); ++m)
      worst = std::max(worst, std::abs(a.u_hat[j][m] - b.u_hat[j][m]));
  for (size_t i = 0; i < a.f_hat.size(); ++i)
    for (size_t q = 0; q < a.f_hat[i].size(); ++q)
      worst = std::max(worst, std::abs(a.f_hat[i][q] - b.f_hat[i][q]));
  return worst;
}

}  // namespace

TEST_CASE("transport bound, default step, and the solver guard") {
  const Config c = make_cfg(2, 8, 6, {1, 2}, 0.5, 1.0, 1.3, 4.0);
  double smax = 0.0;
  for (double s : c.sigma) smax = std::max(smax, s);
  const double expect = 2.0 * smax * std::sqrt(6.0) * (two_pi / 4.0) * 4.0 * 2.0;
  CHECK(transport_bound(c) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(default_dt(c, 100.0) == doctest::Approx(0.5 / expect).epsilon(1e-14));
  CHECK(default_dt(c, 1e-4) == doctest::Approx(1e-4 / 200.0).epsilon(1e-14));
  CHECK_THROWS_AS(Solver(c, 10.0 / expect), std::invalid_argument);
  CHECK_THROWS_AS(Solver(c, -0.1), std::invalid_argument);
}

TEST_CASE("stiff generator entries match the written-out block") {
  const Config c = make_cfg(2, 8, 4, {1, 2}, 0.3, 1.1, 0.9, two_pi);
  const int d = 2, N = 2, bs = d + N * d;
  const int m = c.lay.mode_index({1, 2, 0});
  const std::vector<double> G = stiff_generator(c, m);
  REQUIRE(int(G.size()) == bs * bs);
  const double k2 = 1.0 + 4.0;  // k_scale = 1 here
  const double drag = c.p.kappa * c.beta * c.beta * c.sum_cbrt / c.p.epsilon;
  double P[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double xi[2] = {1.0, 2.0};
      P[a][b] = (a == b ? 1.0 : 0.0) - xi[a] * xi[b] / k2;
    }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      CHECK(G[size_t(a) * bs + b] ==
            doctest::Approx(a == b ? -(k2 + drag) : 0.0).epsilon(1e-14));
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        CHECK(G[size_t(a) * bs + (d + i * d + b)] ==
              doctest::Approx(c.d_drag[i] * c.sigma[i] * c.beta * P[a][b]).epsilon(1e-13));
        const size_t r = size_t(d + i * d + b);
        CHECK(G[r * bs + a] == doctest::Approx(a == b ? c.c_force[i] * c.sigma[i] * c.beta : 0.0)
                                   .epsilon(1e-13));
      }
  for (int i = 0; i < N; ++i)
    for (int b = 0; b < d; ++b) {
      const size_t r = size_t(d + i * d + b);
      CHECK(G[r * bs + r] == doctest::Approx(-c.gamma_fp[i]).epsilon(1e-14));
    }
  // mean mode: no viscosity, full (unprojected) couplings
  const std::vector<double> G0 = stiff_generator(c, c.lay.mode_index({0, 0, 0}));
  CHECK(G0[0] == doctest::Approx(-drag).epsilon(1e-14));
  CHECK(G0[size_t(0) * bs + d] ==
        doctest::Approx(c.d_drag[0] * c.sigma[0] * c.beta).epsilon(1e-14));
  CHECK(G0[size_t(0) * bs + d + 1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("stiff propagator equals an independent matrix exponential, slot by slot") {
  const Config c = make_cfg(2, 4, 4, {1, 3}, 0.4, 0.8, 1.2, 5.0);
  const int d = 2, N = 2, bs = d + N * d;
  const double dt = 0.07;
  const StiffPropagator prop(c, dt);
  const int h0 = c.lay.herm_index({0, 0, 0});
  const int band[2] = {c.lay.herm_shift(h0, 0, +1), c.lay.herm_shift(h0, 1, +1)};
  for (int m : {0, 1, 5, 10}) {
    std::vector<double> G = stiff_generator(c, m);
    for (double& v : G) v *= dt;
    const std::vector<double> E = taylor_expm(G, bs);
    for (int col = 0; col < bs; ++col) {
      SimState s = SimState::zero(c);
      if (col < d)
        s.u_hat[col][m] = cplx{1.0, -0.5};
      else
        s.f((col - d) / d, band[(col - d) % d], m, c) = cplx{1.0, -0.5};
      prop.apply(s);
      for (int row = 0; row < bs; ++row) {
        const cplx got = row < d ? s.u_hat[row][m] : s.f((row - d) / d, band[(row - d) % d], m, c);
        const cplx expect = E[size_t(row) * bs + col] * cplx{1.0, -0.5};
        CHECK(std::abs(got - expect) <= 1e-12 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("stiff flow: invariant mass band, scalar decay above, conserved momentum") {
  const Config c = make_cfg(2, 6, 4, {1, 2}, 0.2, 1.4, 1.0, two_pi);
  const double dt = 0.05;
  const StiffPropagator prop(c, dt);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SimState s = SimState::zero(c);
  for (auto& comp : s.u_hat)
    for (auto& z : comp) z = cplx{dist(gen), dist(gen)};
  for (auto& blk : s.f_hat)
    for (auto& z : blk) z = cplx{dist(gen), dist(gen)};
  const SimState before = s;
  const int h0 = c.lay.herm_index({0, 0, 0});
  std::array<double, 2> m_before{momentum_functional(c, s, 0, 0),
                                 momentum_functional(c, s, 1, 0)};
  prop.apply(s);
  for (int i = 0; i < 2; ++i)
    for (int m = 0; m < c.lay.modes; ++m) CHECK(s.f(i, h0, m, c) == before.f(i, h0, m, c));
  for (int i = 0; i < 2; ++i)
    for (int h = 0; h < c.lay.herms; ++h) {
      if (c.lay.habs[h] < 2) continue;
      const double fac = std::exp(-c.gamma_fp[i] * c.lay.habs[h] * dt);
      for (int m = 0; m < c.lay.modes; ++m) {
        const cplx expect = fac * before.f(i, h, m, c);
        CHECK(std::abs(s.f(i, h, m, c) - expect) <= 1e-15);
      }
    }
  CHECK(std::abs(momentum_functional(c, s, 0, 0) - m_before[0]) <= 1e-13);
  CHECK(std::abs(momentum_functional(c, s, 1, 0) - m_before[1]) <= 1e-13);
}

TEST_CASE("explicit rhs: convection is energy-neutral and leaves the mean alone") {
  const Config c = make_cfg(2, 12, 2, {1}, 1.0, 0.0, 1.0, two_pi);
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SimState s = SimState::zero(c);
  const int cut = c.g.dealias_cut();
  for (int m = 1; m < c.lay.modes; ++m) {
    const int mc = c.lay.conj_mode(m);
    bool keep = mc > m;  // fill each conjugate pair once, keeping the field real
    for (int j = 0; j < 2; ++j) keep = keep && std::abs(c.lay.wave[m][j]) <= cut;
    if (!keep) continue;
    for (int j = 0; j < 2; ++j) {
      s.u_hat[j][m] = cplx{dist(gen), dist(gen)};
      s.u_hat[j][mc] = std::conj(s.u_hat[j][m]);
    }
  }
  leray_project(c, s.u_hat);
  REQUIRE(reality_defect(c, s) <= 1e-15);
  ExplicitRhs rhs(c);
  std::vector<SimState> in{s}, out{SimState::zero(c)};
  rhs.eval(in, out);
  double scale = 0.0, pairing = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int m = 0; m < c.lay.modes; ++m) {
      scale += std::norm(s.u_hat[j][m]) + std::norm(out[0].u_hat[j][m]);
      pairing += (std::conj(s.u_hat[j][m]) * out[0].u_hat[j][m]).real();
    }
  CHECK(std::abs(pairing) <= 1e-13 * scale);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(out[0].u_hat[j][0]) <= 1e-14);
}

TEST_CASE("explicit rhs: kinetic product against a hand convolution") {
  const Config c = make_cfg(1, 12, 4, {2}, 0.6, 1.0, 1.3, two_pi);
  SimState s = SimState::zero(c);
  const int mp = c.lay.mode_index({1, 0, 0});
  const cplx uval{0.35, -0.1};
  s.u_hat[0][mp] = uval;
  const int h0 = 0;
  const cplx fval{-0.4, 0.22};
  s.f(0, h0, mp, c) = fval;
  ExplicitRhs rhs(c);
  std::vector<SimState> in{s}, out{SimState::zero(c)};
  rhs.eval(in, out);
  // band e_0 at xi = 2 receives only c_force sigma sqrt(1) beta u(1) f(1)
  const int e0 = c.lay.herm_index({1, 0, 0});
  const cplx expect = c.c_force[0] * c.sigma[0] * c.beta * uval * fval;
  const cplx got = out[0].f(0, e0, c.lay.mode_index({2, 0, 0}), c);
  CHECK(std::abs(got - expect) <= 1e-13 * (1.0 + std::abs(expect)));
  // and the transport image sits at xi = 1 on the same band
  const cplx trans = -cplx{0.0, 1.0 * c.lay.k_scale} * c.sigma[0] * fval;
  const cplx got1 = out[0].f(0, e0, mp, c);
  CHECK(std::abs(got1 - trans) <= 1e-13 * (1.0 + std::abs(trans)));
}

TEST_CASE("explicit rhs: the momentum functional is in its kernel") {
  const Config c = make_cfg(2, 8, 4, {1, 2}, 0.5, 1.2, 1.1, two_pi);
  InitialSpec spec;
  spec.profile = InitialSpec::Profile::mixed;
  spec.amplitude = 0.3;  // large data: stresses the nonlinear cancellation
  const SimState s = make_initial_state(spec, c, 0.0);
  ExplicitRhs rhs(c);
  std::vector<SimState> in{s}, out{SimState::zero(c)};
  rhs.eval(in, out);
  for (int a = 0; a < 2; ++a) CHECK(std::abs(momentum_functional(c, out[0], a, 0)) <= 1e-14);
  // species mass is untouched at the mean mode (transport moves it elsewhere)
  const int h0 = c.lay.herm_index({0, 0, 0});
  for (int i = 0; i < 2; ++i) CHECK(std::abs(out[0].f(i, h0, 0, c)) == 0.0);
}

TEST_CASE("full step preserves reality, divergence, and the invariants") {
  const Config c = make_cfg(2, 8, 4, {1, 2}, 0.3, 1.0, 1.0, two_pi);
  InitialSpec spec;
  spec.profile = InitialSpec::Profile::mixed;
  spec.amplitude = 0.05;
  SimState s = make_initial_state(spec, c, 0.0);
  Solver solver(c, 0.8 * default_dt(c, 10.0));
  const int h0 = c.lay.herm_index({0, 0, 0});
  for (int n = 0; n < 25; ++n) solver.step(s);
  CHECK(reality_defect(c, s) <= 1e-13);
  CHECK(divergence_defect(c, s) <= 1e-12);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(s.f(i, h0, 0, c)) == 0.0);
  for (int a = 0; a < 2; ++a) CHECK(std::abs(momentum_functional(c, s, a, 0)) <= 1e-12);
  CHECK(s.time == doctest::Approx(25 * solver.dt()).epsilon(1e-12));
}

TEST_CASE("energy is non-increasing for small data") {
  const Config c = make_cfg(2, 8, 4, {1, 2}, 0.5, 1.0, 1.0, two_pi);
  InitialSpec spec;
  spec.profile = InitialSpec::Profile::mixed;
  spec.amplitude = 0.02;
  SimState s = make_initial_state(spec, c, 0.0);
  Solver solver(c, 0.8 * default_dt(c, 10.0));
  double prev = energy(c, s, 2).total;
  for (int n = 0; n < 40; ++n) {
    solver.step(s);
    const double e = energy(c, s, 2).total;
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("second-order convergence of the split step") {
  const Config c = make_cfg(1, 8, 6, {1}, 0.6, 1.0, 1.0, two_pi);
  InitialSpec spec;
  spec.profile = InitialSpec::Profile::mixed;
  spec.amplitude = 0.2;
  const SimState s0 = make_initial_state(spec, c, 0.0);
  const double T = 0.4;
  auto run = [&](double dt) {
    SimState s = s0;
    Solver solver(c, dt);
    const int steps = int(std::lround(T / dt));
    for (int n = 0; n < steps; ++n) solver.step(s);
    return s;
  };
  const SimState ref = run(T / 512);
  const double e1 = max_coeff_diff(run(T / 16), ref);
  const double e2 = max_coeff_diff(run(T / 32), ref);
  const double e3 = max_coeff_diff(run(T / 64), ref);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.2);
  CHECK(e2 / e3 > 3.0);
  CHECK(e2 / e3 < 5.2);
}

TEST_CASE("stepping is deterministic") {
  const Config c = make_cfg(2, 6, 4, {1, 2}, 0.4, 1.0, 1.0, two_pi);
  InitialSpec spec;
  spec.profile = InitialSpec::Profile::mixed;
  spec.amplitude = 0.03;
  SimState a = make_initial_state(spec, c, 0.0);
  SimState b = a;
  Solver s1(c, 0.5 * default_dt(c, 1.0));
  Solver s2(c, 0.5 * default_dt(c, 1.0));
  for (int n = 0; n < 10; ++n) {
    s1.step(a);
    s2.step(b);
  }
  for (int j = 0; j < 2; ++j) CHECK(a.u_hat[j] == b.u_hat[j]);
  for (int i = 0; i < 2; ++i) CHECK(a.f_hat[i] == b.f_hat[i]);
}
