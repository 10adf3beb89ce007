#include "nsvfp/state.hpp"

#include <cmath>
#include <stdexcept>

namespace nsvfp {

SimState SimState::zero(const Config& c) {
  SimState s;
  s.u_hat.assign(c.p.dim, std::vector<cplx>(c.lay.modes, cplx{0.0, 0.0}));
  s.f_hat.assign(c.n_species(),
                 std::vector<cplx>(static_cast<size_t>(c.lay.herms) * c.lay.modes, cplx{0.0, 0.0}));
  return s;
}

void axpy(double a, const SimState& x, SimState& y) {
  for (size_t j = 0; j < y.u_hat.size(); ++j)
    for (size_t m = 0; m < y.u_hat[j].size(); ++m) y.u_hat[j][m] += a * x.u_hat[j][m];
  for (size_t i = 0; i < y.f_hat.size(); ++i)
    for (size_t m = 0; m < y.f_hat[i].size(); ++m) y.f_hat[i][m] += a * x.f_hat[i][m];
}

void scale(SimState& s, double a) {
  for (auto& comp : s.u_hat)
    for (auto& z : comp) z *= a;
  for (auto& blk : s.f_hat)
    for (auto& z : blk) z *= a;
}

double reality_defect(const Config& c, const SimState& s) {
  double worst = 0.0;
  for (int m = 0; m < c.lay.modes; ++m) {
    const int mc = c.lay.conj_mode(m);
    for (int j = 0; j < c.p.dim; ++j) worst = std::max(worst, std::abs(std::conj(s.u_hat[j][mc]) - s.u_hat[j][m]));
    for (int i = 0; i < c.n_species(); ++i)
      for (int h = 0; h < c.lay.herms; ++h)
        worst = std::max(worst, std::abs(std::conj(s.f(i, h, mc, c)) - s.f(i, h, m, c)));
  }
  return worst;
}

double divergence_defect(const Config& c, const SimState& s) {
  double worst = 0.0;
  for (int m = 0; m < c.lay.modes; ++m) {
    const std::array<double, 3> kw = c.lay.phys_wave(m);
    cplx div{0.0, 0.0};
    for (int j = 0; j < c.p.dim; ++j) div += kw[j] * s.u_hat[j][m];
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

std::vector<double> hermite_functions(double v, double sigma, int count) {
  // psi_n(v) = He_n(v/sigma)/sqrt(n!) * (2 pi sigma^2)^{-1/4} exp(-v^2/(4 sigma^2)),
  // generated by the stable normalized recurrence
  //   psi_{n+1} = (z psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1),  z = v/sigma.
  std::vector<double> psi(count);
  if (count == 0) return psi;
  const double z = v / sigma;
  psi[0] = std::pow(two_pi * sigma * sigma, -0.25) * std::exp(-z * z / 4.0);
  if (count > 1) psi[1] = z * psi[0];
  for (int n = 1; n + 1 < count; ++n) psi[n + 1] = (z * psi[n] - std::sqrt(double(n)) * psi[n - 1]) / std::sqrt(double(n + 1));
  return psi;
}

namespace {

// e_xi(x) for flat mode m (orthonormal plane wave)
cplx plane_wave(const Config& c, int m, const std::array<double, 3>& x) {
  const std::array<double, 3> kw = c.lay.phys_wave(m);
  double phase = 0.0;
  for (int j = 0; j < c.p.dim; ++j) phase += kw[j] * x[j];
  return c.beta * std::exp(cplx{0.0, phase});
}

}  // namespace

std::array<double, 3> eval_u(const Config& c, const SimState& s, const std::array<double, 3>& x) {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  for (int m = 0; m < c.lay.modes; ++m) {
    const cplx e = plane_wave(c, m, x);
    for (int j = 0; j < c.p.dim; ++j) u[j] += (s.u_hat[j][m] * e).real();
  }
  return u;
}

double eval_f(const Config& c, const SimState& s, int species, const std::array<double, 3>& x,
              const std::array<double, 3>& v) {
  const double sigma = c.sigma[species];
  for (int j = 0; j < c.p.dim; ++j)
    if (std::abs(v[j]) > 8.0 * sigma) throw std::invalid_argument("eval_f: velocity outside resolved window");
  std::array<std::vector<double>, 3> psi;
  for (int j = 0; j < c.p.dim; ++j) psi[j] = hermite_functions(v[j], sigma, c.g.n_v);
  double val = 0.0;
  for (int m = 0; m < c.lay.modes; ++m) {
    const cplx e = plane_wave(c, m, x);
    for (int h = 0; h < c.lay.herms; ++h) {
      double pv = 1.0;
      for (int j = 0; j < c.p.dim; ++j) pv *= psi[j][c.lay.hmi[h][j]];
      val += (s.f(species, h, m, c) * e).real() * pv;
    }
  }
  return val;
}

}  // namespace nsvfp
