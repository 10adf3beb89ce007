#include "nsvfp/solver.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nsvfp/phase_space.hpp"

namespace nsvfp {

double transport_bound(const Config& c) {
  double sigma_max = 0.0;
  for (double s : c.sigma) sigma_max = std::max(sigma_max, s);
  const double xi_max = c.lay.k_scale * (c.g.n_x / 2);
  return 2.0 * sigma_max * std::sqrt(double(c.g.n_v)) * xi_max * c.lay.dim;
}

double default_dt(const Config& c, double t_end) {
  return std::min(0.5 / transport_bound(c), t_end / 200.0);
}

std::vector<double> stiff_generator(const Config& c, int m) {
  const int d = c.lay.dim;
  const int N = c.n_species();
  const int bs = d + N * d;
  std::vector<double> G(static_cast<size_t>(bs) * bs, 0.0);
  const auto kw = c.lay.phys_wave(m);
  const double k2 = kw[0] * kw[0] + kw[1] * kw[1] + kw[2] * kw[2];

  double P[3][3];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      P[a][b] = (a == b ? 1.0 : 0.0) - (k2 > 0.0 ? kw[a] * kw[b] / k2 : 0.0);

  // velocity rows: viscosity, mean drag, and the moment-recovery coupling
  const double drag = c.p.kappa * c.beta * c.beta * c.sum_cbrt / c.p.epsilon;
  for (int a = 0; a < d; ++a) {
    G[static_cast<size_t>(a) * bs + a] = -(k2 + drag);
    for (int i = 0; i < N; ++i)
      for (int b = 0; b < d; ++b)
        G[static_cast<size_t>(a) * bs + (d + i * d + b)] =
            c.d_drag[i] * c.sigma[i] * c.beta * P[a][b];
  }
  // first-band rows: forcing from u plus the unit Fokker-Planck rate
  for (int i = 0; i < N; ++i)
    for (int b = 0; b < d; ++b) {
      const size_t r = static_cast<size_t>(d + i * d + b);
      G[r * bs + b] = c.c_force[i] * c.sigma[i] * c.beta;
      G[r * bs + r] = -c.gamma_fp[i];
    }
  return G;
}

StiffPropagator::StiffPropagator(const Config& c, double dt) : c_(c), dt_(dt) {
  const int d = c.lay.dim;
  const int N = c.n_species();
  bs_ = d + N * d;
  block_.resize(c.lay.modes);
  for (int m = 0; m < c.lay.modes; ++m) {
    const std::vector<double> G = stiff_generator(c, m);
    Eigen::MatrixXd A(bs_, bs_);
    for (int r = 0; r < bs_; ++r)
      for (int s = 0; s < bs_; ++s) A(r, s) = G[static_cast<size_t>(r) * bs_ + s] * dt;
    const Eigen::MatrixXd E = A.exp();
    block_[m].resize(static_cast<size_t>(bs_) * bs_);
    for (int r = 0; r < bs_; ++r)
      for (int s = 0; s < bs_; ++s) block_[m][static_cast<size_t>(r) * bs_ + s] = E(r, s);
  }
  herm_.resize(N);
  const int max_abs = d * (c.g.n_v - 1);
  for (int i = 0; i < N; ++i) {
    herm_[i].resize(max_abs + 1);
    for (int a = 0; a <= max_abs; ++a) herm_[i][a] = std::exp(-c.gamma_fp[i] * a * dt);
  }
}

void StiffPropagator::apply(SimState& s) const {
  const Layout& lay = c_.lay;
  const int d = lay.dim;
  const int N = c_.n_species();
  const int modes = lay.modes;

  int band[3];
  for (int b = 0; b < d; ++b) {
    std::array<int, 3> e{0, 0, 0};
    e[b] = 1;
    band[b] = lay.herm_index(e);
  }

  std::vector<double> xr(bs_), xi(bs_), yr(bs_), yi(bs_);
  for (int m = 0; m < modes; ++m) {
    for (int a = 0; a < d; ++a) {
      xr[a] = s.u_hat[a][m].real();
      xi[a] = s.u_hat[a][m].imag();
    }
    for (int i = 0; i < N; ++i)
      for (int b = 0; b < d; ++b) {
        const cplx v = s.f(i, band[b], m, c_);
        xr[d + i * d + b] = v.real();
        xi[d + i * d + b] = v.imag();
      }
    const double* E = block_[m].data();
    for (int r = 0; r < bs_; ++r) {
      double ar = 0.0, ai = 0.0;
      const double* row = E + static_cast<size_t>(r) * bs_;
      for (int q = 0; q < bs_; ++q) {
        ar += row[q] * xr[q];
        ai += row[q] * xi[q];
      }
      yr[r] = ar;
      yi[r] = ai;
    }
    for (int a = 0; a < d; ++a) s.u_hat[a][m] = cplx{yr[a], yi[a]};
    for (int i = 0; i < N; ++i)
      for (int b = 0; b < d; ++b)
        s.f(i, band[b], m, c_) = cplx{yr[d + i * d + b], yi[d + i * d + b]};
  }

  // remaining Hermite bands: pure scalar Fokker-Planck decay
  for (int i = 0; i < N; ++i)
    for (int h = 0; h < lay.herms; ++h) {
      if (lay.habs[h] < 2) continue;
      const double fac = herm_[i][lay.habs[h]];
      cplx* row = s.f_hat[i].data() + static_cast<size_t>(h) * modes;
      for (int m = 0; m < modes; ++m) row[m] *= fac;
    }
}

namespace {

void zero_fill(SimState& s) {
  for (auto& v : s.u_hat) std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
  for (auto& v : s.f_hat) std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
}

}  // namespace

ExplicitRhs::ExplicitRhs(const Config& c) : c_(c), K_(1), fft_(c) {
  table_.assign(1, {TripleTensor::Term{1, 1, 1.0}});
}

ExplicitRhs::ExplicitRhs(const Config& c, const TripleTensor& t) : c_(c), K_(t.K), fft_(c) {
  table_ = t.contraction_table();
}

void ExplicitRhs::eval(const std::vector<SimState>& blocks, std::vector<SimState>& out) {
  if (static_cast<int>(blocks.size()) != K_ || out.size() != blocks.size())
    throw std::invalid_argument("ExplicitRhs::eval: block count mismatch");
  const Layout& lay = c_.lay;
  const int d = lay.dim;
  const int N = c_.n_species();
  const int modes = lay.modes;
  const int herms = lay.herms;
  const int grid = fft_.grid_points();

  if (static_cast<int>(up_.size()) != K_) {
    up_.assign(K_, std::vector<std::vector<cplx>>(d));
    gradup_.assign(K_, std::vector<std::vector<cplx>>(static_cast<size_t>(d) * d));
    fp_.assign(K_, std::vector<std::vector<cplx>>(static_cast<size_t>(N) * herms));
  }
  acc_.resize(grid);
  coef_.resize(modes);
  der_.resize(modes);

  for (int k = 0; k < K_; ++k) zero_fill(out[k]);

  // linear free transport (coefficient space, block-diagonal in k and i)
  for (int k = 0; k < K_; ++k)
    for (int i = 0; i < N; ++i) {
      transport_term(c_, i, blocks[k].f_hat[i], der_);
      // der_ was sized modes; transport_term resized it to the block
      cplx* dst = out[k].f_hat[i].data();
      const cplx* src = der_.data();
      const size_t n = out[k].f_hat[i].size();
      for (size_t q = 0; q < n; ++q) dst[q] -= src[q];
    }
  der_.resize(modes);

  // physical-space copies of everything the products need
  for (int k = 0; k < K_; ++k) {
    for (int a = 0; a < d; ++a) {
      fft_.to_phys(blocks[k].u_hat[a], up_[k][a]);
      for (int b = 0; b < d; ++b) {
        for (int m = 0; m < modes; ++m)
          der_[m] = cplx{0.0, lay.k_scale * lay.wave[m][b]} * blocks[k].u_hat[a][m];
        fft_.to_phys(der_, gradup_[k][static_cast<size_t>(a) * d + b]);
      }
    }
    for (int i = 0; i < N; ++i)
      for (int h = 0; h < herms; ++h) {
        const cplx* row = blocks[k].f_hat[i].data() + static_cast<size_t>(h) * modes;
        coef_.assign(row, row + modes);
        fft_.to_phys(coef_, fp_[k][static_cast<size_t>(i) * herms + h]);
      }
  }

  // drag mixture field sum_i (kappa i^{1/3}/eps) beta c_i(x, n=0), per block
  std::vector<std::vector<cplx>> mix(K_, std::vector<cplx>(grid));
  for (int k = 0; k < K_; ++k) {
    std::fill(mix[k].begin(), mix[k].end(), cplx{0.0, 0.0});
    for (int i = 0; i < N; ++i) {
      const double w = c_.d_drag[i] * c_.beta;
      const cplx* f0 = fp_[k][static_cast<size_t>(i) * herms].data();
      for (int g = 0; g < grid; ++g) mix[k][g] += w * f0[g];
    }
  }

  // velocity products: -(u . grad u)_a - u_a sum_i (kappa i^{1/3}/eps)(u m_i)
  for (int k = 0; k < K_; ++k) {
    for (int a = 0; a < d; ++a) {
      std::fill(acc_.begin(), acc_.end(), cplx{0.0, 0.0});
      for (const auto& t : table_[k]) {
        const auto& uj = up_[t.j - 1];
        const auto& gl = gradup_[t.l - 1];
        const cplx* ua = uj[a].data();
        const cplx* ml = mix[t.l - 1].data();
        for (int g = 0; g < grid; ++g) {
          cplx conv{0.0, 0.0};
          for (int b = 0; b < d; ++b) conv += uj[b][g] * gl[static_cast<size_t>(a) * d + b][g];
          acc_[g] -= t.s * (conv + ua[g] * ml[g]);
        }
      }
      fft_.from_phys(acc_, coef_);
      for (int m = 0; m < modes; ++m) out[k].u_hat[a][m] += coef_[m];
    }
    leray_project(c_, out[k].u_hat);
  }

  // kinetic product + (i^{1/3}/(theta eps)) u . K* f, band by band
  for (int k = 0; k < K_; ++k)
    for (int i = 0; i < N; ++i)
      for (int h = 1; h < herms; ++h) {
        bool touched = false;
        for (int a = 0; a < d; ++a) {
          const int hs = lay.herm_shift(h, a, -1);
          if (hs < 0) continue;
          if (!touched) std::fill(acc_.begin(), acc_.end(), cplx{0.0, 0.0});
          touched = true;
          const double fac = c_.sigma[i] * std::sqrt(double(lay.hmi[h][a]));
          for (const auto& t : table_[k]) {
            const cplx* uu = up_[t.j - 1][a].data();
            const cplx* ff = fp_[t.l - 1][static_cast<size_t>(i) * herms + hs].data();
            const double w = fac * t.s;
            for (int g = 0; g < grid; ++g) acc_[g] += w * uu[g] * ff[g];
          }
        }
        if (!touched) continue;
        fft_.from_phys(acc_, coef_);
        cplx* dst = out[k].f_hat[i].data() + static_cast<size_t>(h) * modes;
        for (int m = 0; m < modes; ++m) dst[m] += c_.c_force[i] * coef_[m];
      }
}

Solver::Solver(const Config& c, double dt)
    : c_(c), dt_(dt), half_(c, dt / 2.0), rhs_(c) {
  if (!(dt > 0.0)) throw std::invalid_argument("Solver: dt must be positive");
  const double theta = dt * transport_bound(c);
  if (theta > 1.0) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "Solver: dt=%.6g exceeds the transport step guard; need dt <= %.6g",
                  dt, 1.0 / transport_bound(c));
    throw std::invalid_argument(msg);
  }
}

void Solver::step(SimState& s) {
  if (cur_.empty()) {
    cur_.assign(1, s);
    mid_.assign(1, s);
    k1_.assign(1, SimState::zero(c_));
    k2_.assign(1, SimState::zero(c_));
  }
  const double t0 = s.time;
  half_.apply(s);
  cur_[0] = s;
  rhs_.eval(cur_, k1_);
  mid_[0] = s;
  axpy(dt_, k1_[0], mid_[0]);
  rhs_.eval(mid_, k2_);
  axpy(dt_ / 2.0, k1_[0], s);
  axpy(dt_ / 2.0, k2_[0], s);
  half_.apply(s);
  s.time = t0 + dt_;
}

}  // namespace nsvfp
