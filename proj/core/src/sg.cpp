#include "nsvfp/sg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nsvfp/diagnostics.hpp"

namespace nsvfp {

namespace {

double max_abs_diff(const SimState& a, const SimState& b) {
  double worst = 0.0;
  for (size_t j = 0; j < a.u_hat.size(); ++j)
    for (size_t m = 0; m < a.u_hat[j].size(); ++m)
      worst = std::max(worst, std::abs(a.u_hat[j][m] - b.u_hat[j][m]));
  for (size_t i = 0; i < a.f_hat.size(); ++i)
    for (size_t q = 0; q < a.f_hat[i].size(); ++q)
      worst = std::max(worst, std::abs(a.f_hat[i][q] - b.f_hat[i][q]));
  return worst;
}

SimState zeros_shaped(const SimState& like) {
  SimState out = like;
  out.time = 0.0;
  for (auto& v : out.u_hat) std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
  for (auto& v : out.f_hat) std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
  return out;
}

bool probe_finite(const Config& c, const SimState& s) {
  for (int a = 0; a < c.lay.dim; ++a)
    if (!std::isfinite(s.u_hat[a][0].real()) || !std::isfinite(s.u_hat[a][0].imag()))
      return false;
  for (int i = 0; i < c.n_species(); ++i) {
    const cplx v = s.f_hat[i][0];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    // first band at the mean mode catches blow-ups fed through the products
    for (int h = 0; h < c.lay.herms; ++h)
      if (c.lay.habs[h] == 1) {
        const cplx b = s.f(i, h, 0, c);
        if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) return false;
      }
  }
  return true;
}

}  // namespace

SgInit expand_initial(const InitialSpec& spec, const Config& c, const GpcBasis& b) {
  SgInit out;
  out.state.time = 0.0;
  out.state.blocks.assign(b.K, SimState::zero(c));

  // node states and basis values, then one quadrature pass per block
  std::vector<SimState> at_node;
  std::vector<std::vector<double>> phi;
  at_node.reserve(b.quad.nodes.size());
  phi.reserve(b.quad.nodes.size());
  for (double z : b.quad.nodes) {
    at_node.push_back(make_initial_state(spec, c, z));
    phi.push_back(b.eval(z));
  }
  for (int k = 0; k < b.K; ++k)
    for (size_t q = 0; q < b.quad.nodes.size(); ++q)
      axpy(b.quad.weights[q] * phi[q][k], at_node[q], out.state.blocks[k]);

  for (size_t q = 0; q < b.quad.nodes.size(); ++q) {
    SimState recon = SimState::zero(c);
    for (int k = 0; k < b.K; ++k) axpy(phi[q][k], out.state.blocks[k], recon);
    out.projection_residual = std::max(out.projection_residual, max_abs_diff(recon, at_node[q]));
  }
  return out;
}

SimState reconstruct_at(const SgState& s, const GpcBasis& b, double z) {
  const std::vector<double> phi = b.eval(z);  // throws outside the support
  SimState out = zeros_shaped(s.blocks.at(0));
  for (size_t k = 0; k < s.blocks.size(); ++k) axpy(phi[k], s.blocks[k], out);
  out.time = s.time;
  return out;
}

SgSolver::SgSolver(const Config& c, const GpcBasis& b, double dt)
    : c_(c), dt_(dt), tensor_(triple_products(b)), half_(c, dt / 2.0), rhs_(c, tensor_) {
  if (!(dt > 0.0)) throw std::invalid_argument("SgSolver: dt must be positive");
  if (dt * transport_bound(c) > 1.0)
    throw std::invalid_argument("SgSolver: dt exceeds the transport step guard");
}

void SgSolver::step(SgState& s) {
  const int K = rhs_.block_count();
  if (static_cast<int>(s.blocks.size()) != K)
    throw std::invalid_argument("SgSolver::step: block count mismatch");
  if (k1_.empty()) {
    k1_.assign(K, SimState::zero(c_));
    k2_.assign(K, SimState::zero(c_));
    mid_ = s.blocks;
  }
  for (auto& blk : s.blocks) half_.apply(blk);
  rhs_.eval(s.blocks, k1_);
  mid_ = s.blocks;
  for (int k = 0; k < K; ++k) axpy(dt_, k1_[k], mid_[k]);
  rhs_.eval(mid_, k2_);
  for (int k = 0; k < K; ++k) {
    axpy(dt_ / 2.0, k1_[k], s.blocks[k]);
    axpy(dt_ / 2.0, k2_[k], s.blocks[k]);
    half_.apply(s.blocks[k]);
  }
  s.time += dt_;
}

Ensemble make_ensemble(const InitialSpec& spec, const Config& c, const QuadRule& rule) {
  Ensemble e;
  e.nodes = rule.nodes;
  e.weights = rule.weights;
  e.members.reserve(rule.nodes.size());
  for (double z : rule.nodes) e.members.push_back(make_initial_state(spec, c, z));
  return e;
}

void step_ensemble(Solver& solver, Ensemble& e) {
  for (size_t q = 0; q < e.members.size(); ++q) {
    solver.step(e.members[q]);
    if (!probe_finite(solver.config(), e.members[q])) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "collocation node %zu diverged (non-finite state)", q);
      throw std::runtime_error(msg);
    }
  }
  e.time += solver.dt();
}

double sg_error(const Config& c, const SgState& sg, const GpcBasis& b, const Ensemble& ref,
                int s_order) {
  double acc = 0.0;
  for (size_t q = 0; q < ref.nodes.size(); ++q) {
    SimState diff = reconstruct_at(sg, b, ref.nodes[q]);
    axpy(-1.0, ref.members[q], diff);
    acc += ref.weights[q] * energy(c, diff, s_order).total;
  }
  return acc;
}

double weighted_energy_k(const Config& c, const SgState& sg, int s_order, double q) {
  double acc = 0.0;
  for (size_t k = 0; k < sg.blocks.size(); ++k) {
    const double kw = std::pow(double(k + 1), 2.0 * q);
    acc += kw * energy(c, sg.blocks[k], s_order).total;
  }
  return acc;
}

double energy_sr(const Config& c, const SgState& sg, const GpcBasis& b, int s_order,
                 int r_order) {
  const int K = static_cast<int>(sg.blocks.size());
  if (r_order >= K)
    throw std::invalid_argument("energy_sr: z-derivative order must be < K");
  const auto D = b.derivative_matrix();
  std::vector<SimState> cur = sg.blocks;
  double acc = 0.0;
  for (int g = 0;; ++g) {
    for (const auto& blk : cur) acc += energy(c, blk, s_order).total;
    if (g == r_order) break;
    std::vector<SimState> next(K, SimState::zero(c));
    for (int m = 0; m < K; ++m)
      for (int k = 0; k < K; ++k)
        if (D[m][k] != 0.0) axpy(D[m][k], cur[k], next[m]);
    cur = std::move(next);
  }
  return acc;
}

}  // namespace nsvfp
