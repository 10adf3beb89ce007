#pragma once
// Stochastic-Galerkin (gPC) layer: the K-block coupled system obtained by
// projecting the model onto an orthonormal polynomial basis in the random
// parameter z, plus the collocation ensemble used as a reference and the
// z-integrated energies of the theory.

#include <vector>

#include "nsvfp/gpc.hpp"
#include "nsvfp/initial.hpp"
#include "nsvfp/solver.hpp"

namespace nsvfp {

struct SgState {
  double time = 0.0;
  std::vector<SimState> blocks;  // K coefficient states, phi_1..phi_K
};

struct SgInit {
  SgState state;
  // max over quadrature nodes of the max-abs coefficient mismatch between
  // the K-term reconstruction and the exact initial state at that node
  double projection_residual = 0.0;
};

// Gauss-projects z -> initial state onto the basis (uses the basis's own rule).
SgInit expand_initial(const InitialSpec& spec, const Config& c, const GpcBasis& b);

// sum_k phi_k(z) blocks[k]; throws std::domain_error outside the support
SimState reconstruct_at(const SgState& s, const GpcBasis& b, double z);

class SgSolver {
 public:
  SgSolver(const Config& c, const GpcBasis& b, double dt);
  void step(SgState& s);
  double dt() const { return dt_; }

 private:
  Config c_;
  double dt_;
  TripleTensor tensor_;
  StiffPropagator half_;
  ExplicitRhs rhs_;
  std::vector<SimState> k1_, k2_, mid_;
};

// Collocation reference: independent deterministic solves at Gauss nodes,
// advanced in lockstep with the Galerkin run.
struct Ensemble {
  std::vector<double> nodes, weights;
  std::vector<SimState> members;
  double time = 0.0;
};

Ensemble make_ensemble(const InitialSpec& spec, const Config& c, const QuadRule& rule);
// advances every member by one solver step; a non-finite member state aborts
// with the node id in the message
void step_ensemble(Solver& solver, Ensemble& e);

// z-integrated squared Sobolev energy of the truncation error,
// sum_q w_q E_{s,0}[reconstruction(z_q) - member_q]
double sg_error(const Config& c, const SgState& sg, const GpcBasis& b, const Ensemble& ref,
                int s_order);

// sum_k k^{2q} E_{s,0}[block_k]: the index-weighted Galerkin energy whose
// boundedness encodes spectral-in-K accuracy
double weighted_energy_k(const Config& c, const SgState& sg, int s_order, double q);

// sum_{gamma <= r} sum_k E_{s,0}[(D^gamma block)_k]: Sobolev-in-z energy.
// Requires r < K.
double energy_sr(const Config& c, const SgState& sg, const GpcBasis& b, int s_order, int r_order);

}  // namespace nsvfp
