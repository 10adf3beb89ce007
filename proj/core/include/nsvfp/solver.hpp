#pragma once
// Time integration: Strang splitting between the exact flow of the stiff
// linear part (viscosity, drag exchange, Fokker-Planck, forcing) and a Heun
// step for the rest (free transport and the pseudospectral products).
//
// The stiff part acts per Fourier mode. It couples the velocity components
// to the first Hermite band of every species through a dense
// (d + N d)-square generator whose exact exponential is precomputed; all
// higher Hermite indices relax by scalar Fokker-Planck factors, and the
// (xi=0, n=0) coefficients are exactly invariant (mass conservation).

#include <vector>

#include "nsvfp/fourier.hpp"
#include "nsvfp/gpc.hpp"
#include "nsvfp/state.hpp"

namespace nsvfp {

// Spectral-radius bound of the explicit transport term; steps must satisfy
// dt * transport_bound <= 0.5 (refused at 1.0).
double transport_bound(const Config& c);
// min(0.5/transport_bound, t_end/200)
double default_dt(const Config& c, double t_end);

// Dense generator of the coupled stiff block at Fourier mode m, row-major
// (d + N d) square; variable order u_0..u_{d-1}, then species-major
// c_i(e_0)..c_i(e_{d-1}).
std::vector<double> stiff_generator(const Config& c, int m);

// Exact stiff flow over a fixed increment. apply() is const and safe to
// share across threads and gPC blocks (the stiff part is z-independent).
class StiffPropagator {
 public:
  StiffPropagator(const Config& c, double dt);
  void apply(SimState& s) const;
  double dt() const { return dt_; }

 private:
  Config c_;
  double dt_;
  int bs_;                                  // d + N d
  std::vector<std::vector<double>> block_;  // per mode: row-major exp(G dt)
  std::vector<std::vector<double>> herm_;   // per species: exp(-gamma |n| dt) by |n|
};

// Explicit-part right-hand side for K Galerkin-coupled blocks (K = 1 is the
// deterministic system): free transport, convection, the kinetic product
// u . K* f and the drag product u m_i, all products dealiased and contracted
// through the triple-product table. Owns FFT plans and scratch; one instance
// per thread.
class ExplicitRhs {
 public:
  explicit ExplicitRhs(const Config& c);               // K = 1
  ExplicitRhs(const Config& c, const TripleTensor& t); // gPC-coupled
  void eval(const std::vector<SimState>& blocks, std::vector<SimState>& out);
  int block_count() const { return K_; }

 private:
  Config c_;
  int K_;
  std::vector<std::vector<TripleTensor::Term>> table_;
  PaddedFft fft_;
  std::vector<std::vector<std::vector<cplx>>> up_;      // [k][a]: u_a on the padded grid
  std::vector<std::vector<std::vector<cplx>>> gradup_;  // [k][a*d+b]: d_b u_a
  std::vector<std::vector<std::vector<cplx>>> fp_;      // [k][i*herms+h]: f slice
  std::vector<cplx> acc_, coef_, der_;
};

class Solver {
 public:
  // throws std::invalid_argument when dt violates the step guard
  Solver(const Config& c, double dt);
  void step(SimState& s);
  const Config& config() const { return c_; }
  double dt() const { return dt_; }

 private:
  Config c_;
  double dt_;
  StiffPropagator half_;
  ExplicitRhs rhs_;
  std::vector<SimState> cur_, mid_, k1_, k2_;
};

}  // namespace nsvfp
