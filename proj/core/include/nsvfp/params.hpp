#pragma once
// Model parameters and spectral discretization layout for the multi-size
// fluid/kinetic perturbation system (incompressible Navier-Stokes coupled to
// size-indexed Vlasov-Fokker-Planck equations, written for the fluctuation
// f_i around the global Maxwellian mu_i and solved in a Fourier x Hermite
// coefficient space).

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace nsvfp {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

struct ModelParams {
  double epsilon = 1.0;      // Knudsen number, in (0, 1]
  double kappa = 1.0;        // fluid/particle coupling strength, >= 0
  double theta_bar = 1.0;    // background temperature, > 0
  std::vector<int> sizes = {1};  // particle sizes i, strictly increasing, >= 1
  int dim = 1;               // spatial/velocity dimension, 1..3
  double domain_length = two_pi;  // torus side L
};

struct SpectralGrid {
  int n_x = 16;  // Fourier modes per dimension (even, >= 4)
  int n_v = 8;   // Hermite functions per velocity dimension (>= 2)

  // largest retained wavenumber after a dealiased product (2/3 rule)
  int dealias_cut() const { return n_x / 3; }
  // padded transform size per dimension used for products (3/2 rule)
  int padded() const { return 3 * n_x / 2; }
};

// Returns one message per violated constraint; empty means valid.
std::vector<std::string> validate_params(const ModelParams& p, const SpectralGrid& g);

// Flattened index bookkeeping shared by every module.
//
// Fourier modes are stored in FFT order per dimension: slot k in [0, n_x)
// holds the signed wavenumber xi = k for k <= n_x/2, else k - n_x.
// Hermite multi-indices n in [0, n_v)^dim flatten little-endian.
// Unused dimensions (j >= dim) have extent 1.
struct Layout {
  int dim = 1;
  int n_x = 0, n_v = 0;
  int modes = 0;  // n_x^dim
  int herms = 0;  // n_v^dim
  double k_scale = 1.0;  // 2*pi / L: physical wavenumber = k_scale * xi

  std::vector<std::array<int, 3>> wave;  // signed integer wavenumber per flat mode
  std::vector<std::array<int, 3>> hmi;   // Hermite multi-index per flat index
  std::vector<int> habs;                 // |n|_1 per flat Hermite index

  static Layout make(const ModelParams& p, const SpectralGrid& g);

  int mode_index(const std::array<int, 3>& xi) const;  // signed wavenumber -> flat
  int herm_index(const std::array<int, 3>& n) const;
  // flat Hermite neighbor n + delta*e_j, or -1 when outside the truncation
  int herm_shift(int h, int j, int delta) const;
  // index of the conjugate mode -xi (Nyquist maps to itself)
  int conj_mode(int m) const;
  bool is_nyquist(int m) const;
  std::array<double, 3> phys_wave(int m) const;  // k_scale * wave[m]
};

// Validated parameter set plus derived per-species constants.
struct Config {
  ModelParams p;
  SpectralGrid g;
  Layout lay;

  std::vector<double> sigma;      // sqrt(theta_bar / i)
  std::vector<double> gamma_fp;   // 1 / (i^{2/3} eps): Fokker-Planck unit rate
  std::vector<double> c_force;    // i^{1/3} / (theta_bar eps)
  std::vector<double> d_drag;     // kappa i^{1/3} / eps
  std::vector<double> cbrt_size;  // i^{1/3}
  double beta = 1.0;              // L^{-d/2}, the weight sqrt(mu_i) carries
  double sum_cbrt = 0.0;          // sum_i i^{1/3}
  double volume = 1.0;            // L^d

  int n_species() const { return static_cast<int>(p.sizes.size()); }

  // Throws std::invalid_argument listing every violated constraint.
  static Config make(ModelParams p, SpectralGrid g);
};

}  // namespace nsvfp
