#include "nsvfp/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace nsvfp {

std::vector<std::vector<cplx>> apply_ladder(const Config& c, int species, LadderOp which,
                                            const std::vector<cplx>& f) {
  const Layout& lay = c.lay;
  const double sigma = c.sigma[species];
  const size_t block = static_cast<size_t>(lay.herms) * lay.modes;
  if (f.size() != block) throw std::invalid_argument("apply_ladder: wrong block size");

  const int nout = (which == LadderOp::number) ? 1 : c.p.dim;
  std::vector<std::vector<cplx>> out(nout, std::vector<cplx>(block, cplx{0.0, 0.0}));

  if (which == LadderOp::number) {
    for (int h = 0; h < lay.herms; ++h) {
      const double lam = sigma * sigma * lay.habs[h];
      for (int m = 0; m < lay.modes; ++m) out[0][static_cast<size_t>(h) * lay.modes + m] = lam * f[static_cast<size_t>(h) * lay.modes + m];
    }
    return out;
  }

  for (int j = 0; j < c.p.dim; ++j) {
    switch (which) {
      case LadderOp::lower:
        for (int h = 0; h < lay.herms; ++h) {
          const int src = lay.herm_shift(h, j, +1);
          if (src < 0) continue;
          const double fac = sigma * std::sqrt(double(lay.hmi[h][j] + 1));
          for (int m = 0; m < lay.modes; ++m)
            out[j][static_cast<size_t>(h) * lay.modes + m] = fac * f[static_cast<size_t>(src) * lay.modes + m];
        }
        break;
      case LadderOp::raise:
        for (int h = 0; h < lay.herms; ++h) {
          const int src = lay.herm_shift(h, j, -1);
          if (src < 0) continue;
          const double fac = sigma * std::sqrt(double(lay.hmi[h][j]));
          for (int m = 0; m < lay.modes; ++m)
            out[j][static_cast<size_t>(h) * lay.modes + m] = fac * f[static_cast<size_t>(src) * lay.modes + m];
        }
        break;
      case LadderOp::spatial: {
        const double pref = c.p.theta_bar * c.p.theta_bar / (double(c.p.sizes[species]) * c.p.sizes[species]);
        for (int m = 0; m < lay.modes; ++m) {
          const cplx der = cplx{0.0, pref * lay.k_scale * lay.wave[m][j]};
          for (int h = 0; h < lay.herms; ++h)
            out[j][static_cast<size_t>(h) * lay.modes + m] = der * f[static_cast<size_t>(h) * lay.modes + m];
        }
        break;
      }
      case LadderOp::number:
        break;  // handled above
    }
  }
  return out;
}

void transport_term(const Config& c, int species, const std::vector<cplx>& f, std::vector<cplx>& out) {
  const Layout& lay = c.lay;
  const double sigma = c.sigma[species];
  out.assign(f.size(), cplx{0.0, 0.0});
  for (int h = 0; h < lay.herms; ++h) {
    for (int j = 0; j < c.p.dim; ++j) {
      const int up = lay.herm_shift(h, j, +1);    // n + e_j
      const int down = lay.herm_shift(h, j, -1);  // n - e_j
      const double fup = sigma * std::sqrt(double(lay.hmi[h][j] + 1));
      const double fdown = sigma * std::sqrt(double(lay.hmi[h][j]));
      for (int m = 0; m < lay.modes; ++m) {
        const cplx der{0.0, lay.k_scale * lay.wave[m][j]};
        cplx acc{0.0, 0.0};
        if (up >= 0) acc += fup * f[static_cast<size_t>(up) * lay.modes + m];
        if (down >= 0) acc += fdown * f[static_cast<size_t>(down) * lay.modes + m];
        out[static_cast<size_t>(h) * lay.modes + m] += der * acc;
      }
    }
  }
}

void fokker_planck_term(const Config& c, int species, const std::vector<cplx>& f, std::vector<cplx>& out) {
  const Layout& lay = c.lay;
  out.resize(f.size());
  for (int h = 0; h < lay.herms; ++h) {
    const double rate = -c.gamma_fp[species] * lay.habs[h];
    for (int m = 0; m < lay.modes; ++m)
      out[static_cast<size_t>(h) * lay.modes + m] = rate * f[static_cast<size_t>(h) * lay.modes + m];
  }
}

void leray_project(const Config& c, std::vector<std::vector<cplx>>& u_hat) {
  const Layout& lay = c.lay;
  for (int m = 0; m < lay.modes; ++m) {
    double norm2 = 0.0;
    for (int j = 0; j < c.p.dim; ++j) norm2 += double(lay.wave[m][j]) * lay.wave[m][j];
    if (norm2 == 0.0) continue;
    cplx dot{0.0, 0.0};
    for (int j = 0; j < c.p.dim; ++j) dot += double(lay.wave[m][j]) * u_hat[j][m];
    dot /= norm2;
    for (int j = 0; j < c.p.dim; ++j) u_hat[j][m] -= double(lay.wave[m][j]) * dot;
  }
}

Moments moments(const Config& c, const SimState& s, int species) {
  const Layout& lay = c.lay;
  const double sigma = c.sigma[species];
  Moments mom;
  mom.mass.resize(lay.modes);
  mom.momentum.assign(c.p.dim, std::vector<cplx>(lay.modes, cplx{0.0, 0.0}));
  mom.stress.assign(static_cast<size_t>(c.p.dim) * c.p.dim, std::vector<cplx>(lay.modes, cplx{0.0, 0.0}));

  std::array<int, 3> n{0, 0, 0};
  const int h0 = lay.herm_index(n);
  for (int m = 0; m < lay.modes; ++m) mom.mass[m] = c.beta * s.f(species, h0, m, c);

  for (int j = 0; j < c.p.dim; ++j) {
    const int hj = lay.herm_shift(h0, j, +1);
    if (hj >= 0)
      for (int m = 0; m < lay.modes; ++m) mom.momentum[j][m] = c.beta * sigma * s.f(species, hj, m, c);
  }

  // v_j v_l sqrt(mu) moments: beta sigma^2 c(xi, e_j+e_l) for j != l;
  // beta sigma^2 (c(xi,0) + sqrt(2) c(xi, 2e_j)) on the diagonal
  for (int j = 0; j < c.p.dim; ++j)
    for (int l = 0; l < c.p.dim; ++l) {
      auto& dst = mom.stress[static_cast<size_t>(j) * c.p.dim + l];
      const int h1 = lay.herm_shift(h0, j, +1);
      if (j == l) {
        const int h2 = (h1 >= 0) ? lay.herm_shift(h1, j, +1) : -1;
        for (int m = 0; m < lay.modes; ++m) {
          cplx val = s.f(species, h0, m, c);
          if (h2 >= 0) val += std::sqrt(2.0) * s.f(species, h2, m, c);
          dst[m] = c.beta * sigma * sigma * val;
        }
      } else {
        const int hjl = (h1 >= 0) ? lay.herm_shift(h1, l, +1) : -1;
        if (hjl >= 0)
          for (int m = 0; m < lay.modes; ++m) dst[m] = c.beta * sigma * sigma * s.f(species, hjl, m, c);
      }
    }
  return mom;
}

void dealiased_product(PaddedFft& fft, const std::vector<cplx>& a, const std::vector<cplx>& b,
                       std::vector<cplx>& out) {
  fft.product(a, b, out);
}

}  // namespace nsvfp
