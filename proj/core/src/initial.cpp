#include "nsvfp/initial.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "nsvfp/phase_space.hpp"

namespace nsvfp {

double InitialSpec::z_factor(double z) const {
  switch (z_form) {
    case ZForm::none:
      return 1.0;
    case ZForm::linear:
      return 1.0 + z_coupling * z;
    case ZForm::quadratic: {
      const double w = 1.0 + z_coupling * z;
      return w * w;
    }
    case ZForm::exponential:
      return std::exp(z_coupling * z);
  }
  return 1.0;
}

namespace {

// Determinstic uniform in [-1,1] (explicit bit mapping: portable sequences).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double sym() { return 2.0 * (double(gen_() >> 11) * 0x1.0p-53) - 1.0; }
  cplx sym_c() {
    const double re = sym();
    return cplx{re, sym()};
  }

 private:
  std::mt19937_64 gen_;
};

int wavenumber_sup(const Config& c, int m) {
  int sup = 0;
  for (int j = 0; j < c.p.dim; ++j) sup = std::max(sup, std::abs(c.lay.wave[m][j]));
  return sup;
}

void fill_mixed(const InitialSpec& spec, const Config& c, SimState& s) {
  Rng rng(spec.seed);
  if (c.p.dim >= 2)
    for (int m = 0; m < c.lay.modes; ++m) {
      const int sup = wavenumber_sup(c, m);
      if (sup < 1 || sup > 2) continue;
      for (int j = 0; j < c.p.dim; ++j) s.u_hat[j][m] = rng.sym_c();
    }
  for (int i = 0; i < c.n_species(); ++i) {
    const double species_w = 1.0 / (1.0 + i);
    for (int h = 0; h < c.lay.herms; ++h) {
      if (c.lay.habs[h] > 2) continue;
      for (int m = 0; m < c.lay.modes; ++m) {
        const int sup = wavenumber_sup(c, m);
        if (sup > 2) continue;
        s.f(i, h, m, c) = species_w / (1.0 + c.lay.habs[h] + sup) * rng.sym_c();
      }
    }
  }
}

void fill_shear_velocity(const Config& c, SimState& s) {
  // u_0(x) = cos(2 pi x_{d-1}/L) + cos(4 pi x_{d-1}/L)/4, other components 0
  const int axis = c.p.dim - 1;
  std::array<int, 3> xi{0, 0, 0};
  for (int k = 1; k <= 2; ++k) {
    if (k > c.g.n_x / 2 - 1) break;
    const double w = (k == 1) ? 0.5 : 0.125;  // half-amplitude per conjugate pair
    xi[axis] = k;
    s.u_hat[0][c.lay.mode_index(xi)] = w;
    xi[axis] = -k;
    s.u_hat[0][c.lay.mode_index(xi)] = w;
  }
}

void fill_shear_kinetic_bands(const Config& c, SimState& s) {
  // bands n = e_0 + r e_{d-1} at modes k e_{d-1}: the sector transport,
  // forcing and drag keep invariant for shear data
  const int axis = c.p.dim - 1;
  for (int i = 0; i < c.n_species(); ++i) {
    const double species_w = 1.0 / (1.0 + i);
    for (int r = 0; r <= 1; ++r) {
      std::array<int, 3> n{0, 0, 0};
      n[0] = 1;
      n[axis] += r;
      if (n[axis] >= c.g.n_v || n[0] >= c.g.n_v) continue;
      const int h = c.lay.herm_index(n);
      for (int k = -1; k <= 1; ++k) {
        std::array<int, 3> xi{0, 0, 0};
        xi[axis] = k;
        const double w = species_w / ((1.0 + r) * (1.0 + std::abs(k)));
        s.f(i, h, c.lay.mode_index(xi), c) += 0.5 * w;
      }
    }
  }
}

void fill_kinetic_bands(const Config& c, SimState& s) {
  std::array<int, 3> zero{0, 0, 0};
  const int m0 = c.lay.mode_index(zero);
  for (int i = 0; i < c.n_species(); ++i)
    for (int h = 0; h < c.lay.herms; ++h) {
      if (c.lay.habs[h] == 0) continue;
      s.f(i, h, m0, c) = 1.0 / ((1.0 + i) * (1.0 + c.lay.habs[h]));
    }
}

void symmetrize_reality(const Config& c, SimState& s) {
  const auto fix = [&](std::vector<cplx>& field, size_t offset) {
    for (int m = 0; m < c.lay.modes; ++m) {
      const int mc = c.lay.conj_mode(m);
      if (mc < m) continue;
      const cplx avg = 0.5 * (field[offset + m] + std::conj(field[offset + mc]));
      field[offset + m] = avg;
      field[offset + mc] = std::conj(avg);
      if (mc == m) field[offset + m] = cplx{avg.real(), 0.0};
    }
  };
  for (int j = 0; j < c.p.dim; ++j) fix(s.u_hat[j], 0);
  for (int i = 0; i < c.n_species(); ++i)
    for (int h = 0; h < c.lay.herms; ++h) fix(s.f_hat[i], static_cast<size_t>(h) * c.lay.modes);
}

}  // namespace

SimState make_initial_state(const InitialSpec& spec, const Config& c, double z) {
  SimState s = SimState::zero(c);
  switch (spec.profile) {
    case InitialSpec::Profile::mixed:
      fill_mixed(spec, c, s);
      break;
    case InitialSpec::Profile::shear:
      if (c.p.dim < 2) throw std::invalid_argument("shear profile requires dim >= 2");
      fill_shear_velocity(c, s);
      break;
    case InitialSpec::Profile::shear_kinetic:
      if (c.p.dim < 2) throw std::invalid_argument("shear_kinetic profile requires dim >= 2");
      fill_shear_velocity(c, s);
      fill_shear_kinetic_bands(c, s);
      break;
    case InitialSpec::Profile::kinetic_bands:
      fill_kinetic_bands(c, s);
      break;
  }

  const double scale = spec.amplitude * spec.z_factor(z);
  nsvfp::scale(s, scale);

  symmetrize_reality(c, s);
  leray_project(c, s.u_hat);

  // zero species mass: c_i(xi=0, n=0) = 0
  std::array<int, 3> zero{0, 0, 0};
  const int m0 = c.lay.mode_index(zero);
  const int h0 = c.lay.herm_index(zero);
  for (int i = 0; i < c.n_species(); ++i) s.f(i, h0, m0, c) = cplx{0.0, 0.0};

  // zero total momentum: the flow conserves u_a(0) + kappa beta sum_i i sigma_i c_i(0, e_a)
  for (int a = 0; a < c.p.dim; ++a) {
    const int ha = c.lay.herm_shift(h0, a, +1);
    double part = 0.0;
    for (int i = 0; i < c.n_species(); ++i)
      part += c.p.sizes[i] * c.sigma[i] * s.f(i, ha, m0, c).real();
    s.u_hat[a][m0] = cplx{-c.p.kappa * c.beta * part, 0.0};
  }
  return s;
}

}  // namespace nsvfp
