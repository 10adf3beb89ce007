#pragma once
// Coefficient-space state of one deterministic solve.
//
// Bases are orthonormal throughout:
//   x: e_xi(x) = L^{-d/2} exp(i xi . x 2pi/L)
//   v: psi_n^{(i)}(v) = He_n(v/sigma_i)/sqrt(n!) (2 pi sigma_i^2)^{-1/4}
//      exp(-v^2/(4 sigma_i^2)), tensorized per component
// so sqrt(mu_i) = L^{-d/2} Psi_0^{(i)} and every L^2 norm is a plain sum of
// squared coefficients.

#include <cstddef>

#include "nsvfp/params.hpp"

namespace nsvfp {

struct SimState {
  double time = 0.0;
  // u_hat[j][m]: Fourier coefficient of velocity component j at flat mode m
  std::vector<std::vector<cplx>> u_hat;
  // f_hat[i][h*modes + m]: species i, flat Hermite index h, flat mode m
  std::vector<std::vector<cplx>> f_hat;

  static SimState zero(const Config& c);
  cplx& f(int i, int h, int m, const Config& c) {
    return f_hat[i][static_cast<std::size_t>(h) * c.lay.modes + m];
  }
  const cplx& f(int i, int h, int m, const Config& c) const {
    return f_hat[i][static_cast<std::size_t>(h) * c.lay.modes + m];
  }
};

// y += a*x (all coefficient blocks); shapes must match.
void axpy(double a, const SimState& x, SimState& y);
void scale(SimState& s, double a);

// max |conj(c(-xi)) - c(xi)| over all stored fields (0 for real-valued fields)
double reality_defect(const Config& c, const SimState& s);
// max |xi_phys . u_hat(xi)| (0 for divergence-free velocity)
double divergence_defect(const Config& c, const SimState& s);

// Physical-space reconstruction by direct summation (diagnostic-grade).
// v components beyond |v_j| > 8 max_i sigma_i are rejected: the Hermite
// window does not resolve values out there.
std::array<double, 3> eval_u(const Config& c, const SimState& s, const std::array<double, 3>& x);
double eval_f(const Config& c, const SimState& s, int species, const std::array<double, 3>& x,
              const std::array<double, 3>& v);

// One-dimensional orthonormal Hermite functions psi_0..psi_{count-1} at v
// for scale sigma (building block of eval_f and of test oracles).
std::vector<double> hermite_functions(double v, double sigma, int count);

}  // namespace nsvfp
