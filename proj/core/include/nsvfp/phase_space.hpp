#pragma once
// Spectral realizations of the model's phase-space operators: the ladder
// operators attached to each species Maxwellian, the Fokker-Planck number
// operator, the commutator S, free transport, Leray projection, velocity
// moments, and dealiased products.
//
// All operators act on one species block f (layout [herms x modes], see
// SimState) and are exact on coefficients except where raising past the
// Hermite truncation drops the overflow (closure by truncation).

#include <vector>

#include "nsvfp/fourier.hpp"
#include "nsvfp/state.hpp"

namespace nsvfp {

enum class LadderOp {
  lower,    // K_i = (theta/i) grad_v + v/2: out_j(xi,n) = sigma sqrt(n_j+1) c(xi, n+e_j)
  raise,    // K_i* = -(theta/i) grad_v + v/2: out_j(xi,n) = sigma sqrt(n_j) c(xi, n-e_j)
  number,   // K_i* . K_i: out(xi,n) = sigma^2 |n|_1 c(xi,n)
  spatial,  // S_ij = (theta^2/i^2) d/dx_j: out_j(xi,n) = (theta^2/i^2) i xi_j' c(xi,n)
};

// Vector-valued ops return dim blocks; `number` returns one.
std::vector<std::vector<cplx>> apply_ladder(const Config& c, int species, LadderOp which,
                                            const std::vector<cplx>& f);

// coefficients of v . grad_x f (couples n to n +- e_j with i xi_j' sigma factors)
void transport_term(const Config& c, int species, const std::vector<cplx>& f, std::vector<cplx>& out);

// diagonal Fokker-Planck action: out(xi,n) = -|n|_1 / (i^{2/3} eps) f(xi,n)
void fokker_planck_term(const Config& c, int species, const std::vector<cplx>& f, std::vector<cplx>& out);

// u_hat(xi) <- (I - xi xi^T/|xi|^2) u_hat(xi) for xi != 0; mean mode untouched
void leray_project(const Config& c, std::vector<std::vector<cplx>>& u_hat);

// Velocity moments of sqrt(mu_i) f_i, as Fourier coefficient fields over x.
struct Moments {
  std::vector<cplx> mass;                   // int sqrt(mu_i) f_i dv
  std::vector<std::vector<cplx>> momentum;  // [j]: int v_j sqrt(mu_i) f_i dv
  std::vector<std::vector<cplx>> stress;    // [j*dim+l]: int v_j v_l sqrt(mu_i) f_i dv
};
Moments moments(const Config& c, const SimState& s, int species);

// out = dealiased (a*b); thin wrapper kept for naming symmetry with PaddedFft
void dealiased_product(PaddedFft& fft, const std::vector<cplx>& a, const std::vector<cplx>& b,
                       std::vector<cplx>& out);

}  // namespace nsvfp
