#include "nsvfp/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsvfp {

std::vector<std::string> validate_params(const ModelParams& p, const SpectralGrid& g) {
  std::vector<std::string> bad;
  auto flag = [&bad](const std::string& m) { bad.push_back(m); };

  if (!(p.epsilon > 0.0)) flag("epsilon must be > 0");
  if (p.epsilon > 1.0) flag("epsilon must be <= 1");
  if (!(p.kappa >= 0.0)) flag("kappa must be >= 0");
  if (!(p.theta_bar > 0.0)) flag("theta_bar must be > 0");
  if (!(p.domain_length > 0.0)) flag("domain_length must be > 0");
  if (p.dim < 1 || p.dim > 3) flag("dim must be 1, 2 or 3");

  if (p.sizes.empty()) flag("sizes must be non-empty");
  int prev = 0;
  for (int s : p.sizes) {
    if (s < 1) {
      flag("sizes must be positive integers");
      break;
    }
    if (s <= prev) {
      flag("sizes must be strictly increasing");
      break;
    }
    prev = s;
  }

  if (g.n_x < 4) flag("n_x must be >= 4");
  if (g.n_x % 2 != 0) flag("n_x must be even");
  if (g.n_v < 2) flag("n_v must be >= 2");

  return bad;
}

Layout Layout::make(const ModelParams& p, const SpectralGrid& g) {
  Layout L;
  L.dim = p.dim;
  L.n_x = g.n_x;
  L.n_v = g.n_v;
  L.k_scale = two_pi / p.domain_length;

  L.modes = 1;
  L.herms = 1;
  for (int j = 0; j < p.dim; ++j) {
    L.modes *= g.n_x;
    L.herms *= g.n_v;
  }

  L.wave.resize(L.modes);
  for (int m = 0; m < L.modes; ++m) {
    std::array<int, 3> w{0, 0, 0};
    int rem = m;
    for (int j = 0; j < p.dim; ++j) {
      int k = rem % g.n_x;
      rem /= g.n_x;
      w[j] = (k <= g.n_x / 2) ? k : k - g.n_x;
    }
    L.wave[m] = w;
  }

  L.hmi.resize(L.herms);
  L.habs.resize(L.herms);
  for (int h = 0; h < L.herms; ++h) {
    std::array<int, 3> n{0, 0, 0};
    int rem = h;
    int ab = 0;
    for (int j = 0; j < p.dim; ++j) {
      n[j] = rem % g.n_v;
      rem /= g.n_v;
      ab += n[j];
    }
    L.hmi[h] = n;
    L.habs[h] = ab;
  }
  return L;
}

int Layout::mode_index(const std::array<int, 3>& xi) const {
  int idx = 0;
  int stride = 1;
  for (int j = 0; j < dim; ++j) {
    int k = xi[j] >= 0 ? xi[j] : xi[j] + n_x;
    idx += stride * k;
    stride *= n_x;
  }
  return idx;
}

int Layout::herm_index(const std::array<int, 3>& n) const {
  int idx = 0;
  int stride = 1;
  for (int j = 0; j < dim; ++j) {
    idx += stride * n[j];
    stride *= n_v;
  }
  return idx;
}

int Layout::herm_shift(int h, int j, int delta) const {
  int nj = hmi[h][j] + delta;
  if (nj < 0 || nj >= n_v) return -1;
  int stride = 1;
  for (int l = 0; l < j; ++l) stride *= n_v;
  return h + delta * stride;
}

int Layout::conj_mode(int m) const {
  std::array<int, 3> w = wave[m];
  std::array<int, 3> neg{0, 0, 0};
  for (int j = 0; j < dim; ++j) {
    int x = -w[j];
    if (x == -n_x / 2) x = n_x / 2;  // Nyquist pairs with itself
    neg[j] = x;
  }
  return mode_index(neg);
}

bool Layout::is_nyquist(int m) const {
  for (int j = 0; j < dim; ++j)
    if (wave[m][j] == n_x / 2) return true;
  return false;
}

std::array<double, 3> Layout::phys_wave(int m) const {
  return {k_scale * wave[m][0], k_scale * wave[m][1], k_scale * wave[m][2]};
}

Config Config::make(ModelParams p, SpectralGrid g) {
  auto bad = validate_params(p, g);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& m : bad) os << "\n  - " << m;
    throw std::invalid_argument(os.str());
  }

  Config c;
  c.p = std::move(p);
  c.g = g;
  c.lay = Layout::make(c.p, c.g);

  c.volume = 1.0;
  for (int j = 0; j < c.p.dim; ++j) c.volume *= c.p.domain_length;
  c.beta = 1.0 / std::sqrt(c.volume);

  const int N = c.n_species();
  c.sigma.resize(N);
  c.gamma_fp.resize(N);
  c.c_force.resize(N);
  c.d_drag.resize(N);
  c.cbrt_size.resize(N);
  c.sum_cbrt = 0.0;
  for (int i = 0; i < N; ++i) {
    const double sz = static_cast<double>(c.p.sizes[i]);
    const double cb = std::cbrt(sz);
    c.cbrt_size[i] = cb;
    c.sigma[i] = std::sqrt(c.p.theta_bar / sz);
    c.gamma_fp[i] = 1.0 / (cb * cb * c.p.epsilon);
    c.c_force[i] = cb / (c.p.theta_bar * c.p.epsilon);
    c.d_drag[i] = c.p.kappa * cb / c.p.epsilon;
    c.sum_cbrt += cb;
  }
  return c;
}

}  // namespace nsvfp
