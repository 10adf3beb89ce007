#include "nsvfp/gpc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsvfp {

Measure Measure::uniform() {
  Measure m;
  m.kind = Kind::uniform;
  return m;
}

Measure Measure::chebyshev() {
  Measure m;
  m.kind = Kind::chebyshev;
  return m;
}

Measure Measure::custom(std::function<double(double)> density, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("custom measure: need lo < hi");
  if (!density) throw std::invalid_argument("custom measure: missing density");
  Measure m;
  m.kind = Kind::custom;
  m.lo = lo;
  m.hi = hi;
  m.density = std::move(density);
  return m;
}

namespace {

QuadRule gauss_from_recurrence(const Recurrence& rec, int Q) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Q, Q);
  for (int k = 0; k < Q; ++k) J(k, k) = rec.a[k];
  for (int k = 1; k < Q; ++k) {
    const double off = std::sqrt(rec.b[k]);
    J(k, k - 1) = off;
    J(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule q;
  q.nodes.resize(Q);
  q.weights.resize(Q);
  for (int i = 0; i < Q; ++i) {
    q.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    q.weights[i] = rec.b[0] * v0 * v0;
  }
  return q;
}

// Discrete measure (points, weights) supporting the Stieltjes procedure.
struct DiscreteMeasure {
  std::vector<double> z, w;
};

// Composite Gauss-Legendre rule for integrals against a custom density:
// `panels` panels of `per_panel` nodes each.
DiscreteMeasure composite_rule(const Measure& m, int panels, int per_panel) {
  Recurrence leg;  // Legendre on [-1,1], weight 1 (mass 2)
  leg.a.assign(per_panel, 0.0);
  leg.b.resize(per_panel);
  leg.b[0] = 2.0;
  for (int k = 1; k < per_panel; ++k) leg.b[k] = double(k) * k / (4.0 * k * k - 1.0);
  const QuadRule unit = gauss_from_recurrence(leg, per_panel);

  DiscreteMeasure d;
  d.z.reserve(static_cast<size_t>(panels) * per_panel);
  d.w.reserve(static_cast<size_t>(panels) * per_panel);
  const double h = (m.hi - m.lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = m.lo + (p + 0.5) * h;
    for (int q = 0; q < per_panel; ++q) {
      const double z = mid + 0.5 * h * unit.nodes[q];
      const double rho = m.density(z);
      if (rho < -1e-14) throw std::invalid_argument("custom measure: negative density at z=" + std::to_string(z));
      d.z.push_back(z);
      d.w.push_back(0.5 * h * unit.weights[q] * std::max(rho, 0.0));
    }
  }
  return d;
}

Recurrence stieltjes(const DiscreteMeasure& d, int n) {
  const size_t np = d.z.size();
  Recurrence rec;
  rec.a.resize(n);
  rec.b.resize(n);
  std::vector<double> pm(np, 0.0), pk(np, 1.0);  // pi_{k-1}, pi_k at the points
  double nrm_prev = 0.0;
  for (int k = 0; k < n; ++k) {
    double nrm = 0.0, zavg = 0.0;
    for (size_t i = 0; i < np; ++i) {
      const double t = d.w[i] * pk[i] * pk[i];
      nrm += t;
      zavg += t * d.z[i];
    }
    if (!(nrm > 0.0)) throw std::invalid_argument("custom measure: degenerate (zero norm) at degree " + std::to_string(k));
    rec.a[k] = zavg / nrm;
    rec.b[k] = (k == 0) ? nrm : nrm / nrm_prev;
    nrm_prev = nrm;
    for (size_t i = 0; i < np; ++i) {
      const double next = (d.z[i] - rec.a[k]) * pk[i] - rec.b[k] * pm[i];
      pm[i] = pk[i];
      pk[i] = next;
    }
  }
  return rec;
}

}  // namespace

Recurrence recurrence_coeffs(const Measure& m, int n) {
  if (n < 1) throw std::invalid_argument("recurrence_coeffs: need n >= 1");
  Recurrence rec;
  switch (m.kind) {
    case Measure::Kind::uniform:
      rec.a.assign(n, 0.0);
      rec.b.resize(n);
      rec.b[0] = 1.0;
      for (int k = 1; k < n; ++k) rec.b[k] = double(k) * k / (4.0 * k * k - 1.0);
      return rec;
    case Measure::Kind::chebyshev:
      rec.a.assign(n, 0.0);
      rec.b.resize(n);
      rec.b[0] = 1.0;
      for (int k = 1; k < n; ++k) rec.b[k] = (k == 1) ? 0.5 : 0.25;
      return rec;
    case Measure::Kind::custom: {
      const DiscreteMeasure d = composite_rule(m, 256, 16);
      double mass = 0.0;
      for (double w : d.w) mass += w;
      if (std::abs(mass - 1.0) > 1e-10)
        throw std::invalid_argument("custom measure: density integrates to " + std::to_string(mass) +
                                    ", expected 1");
      return stieltjes(d, n);
    }
  }
  throw std::logic_error("recurrence_coeffs: unknown measure kind");
}

QuadRule gauss_rule(const Measure& m, int Q) {
  if (Q < 1) throw std::invalid_argument("gauss_rule: need Q >= 1");
  return gauss_from_recurrence(recurrence_coeffs(m, Q), Q);
}

std::vector<double> GpcBasis::eval(double z) const {
  if (!measure.in_support(z)) throw std::domain_error("gpc eval: z outside measure support");
  std::vector<double> phi(K);
  phi[0] = 1.0 / std::sqrt(rec.b[0]);
  if (K > 1) phi[1] = (z - rec.a[0]) * phi[0] / std::sqrt(rec.b[1]);
  for (int k = 1; k + 1 < K; ++k)
    phi[k + 1] = ((z - rec.a[k]) * phi[k] - std::sqrt(rec.b[k]) * phi[k - 1]) / std::sqrt(rec.b[k + 1]);
  return phi;
}

void GpcBasis::eval_with_deriv(double z, std::vector<double>& phi, std::vector<double>& dphi) const {
  phi = eval(z);
  dphi.assign(K, 0.0);
  if (K > 1) dphi[1] = phi[0] / std::sqrt(rec.b[1]);
  for (int k = 1; k + 1 < K; ++k)
    dphi[k + 1] =
        ((z - rec.a[k]) * dphi[k] + phi[k] - std::sqrt(rec.b[k]) * dphi[k - 1]) / std::sqrt(rec.b[k + 1]);
}

double GpcBasis::ortho_defect() const {
  const int nq = static_cast<int>(quad.nodes.size());
  std::vector<std::vector<double>> vals(nq);
  for (int q = 0; q < nq; ++q) vals[q] = eval(quad.nodes[q]);
  double worst = 0.0;
  for (int j = 0; j < K; ++j)
    for (int l = j; l < K; ++l) {
      double g = 0.0;
      for (int q = 0; q < nq; ++q) g += quad.weights[q] * vals[q][j] * vals[q][l];
      worst = std::max(worst, std::abs(g - (j == l ? 1.0 : 0.0)));
    }
  return worst;
}

std::vector<std::vector<double>> GpcBasis::derivative_matrix() const {
  const int nq = static_cast<int>(quad.nodes.size());
  std::vector<std::vector<double>> d(K, std::vector<double>(K, 0.0));
  std::vector<double> phi, dphi;
  for (int q = 0; q < nq; ++q) {
    eval_with_deriv(quad.nodes[q], phi, dphi);
    for (int m = 0; m < K; ++m)
      for (int k = 0; k < K; ++k) d[m][k] += quad.weights[q] * dphi[k] * phi[m];
  }
  // deg phi_k' = k-2, so entries with m >= k are pure quadrature noise
  for (int m = 0; m < K; ++m)
    for (int k = 0; k <= m; ++k) d[m][k] = 0.0;
  return d;
}

GpcBasis build_basis(const Measure& m, int K, int Q) {
  if (K < 1) throw std::invalid_argument("build_basis: need K >= 1");
  const int q = (Q == 0) ? 2 * K : Q;
  const int qmin = (3 * K - 1) / 2;  // ceil((3K-2)/2)
  if (q < qmin)
    throw std::invalid_argument("build_basis: Q=" + std::to_string(q) + " too small for K=" +
                                std::to_string(K) + "; need Q >= " + std::to_string(qmin));
  GpcBasis b;
  b.K = K;
  b.Q = q;
  b.measure = m;
  b.rec = recurrence_coeffs(m, std::max(K, q));
  b.quad = gauss_from_recurrence(b.rec, q);
  const double defect = b.ortho_defect();
  if (defect > 1e-10)
    throw std::logic_error("build_basis: orthonormality defect " + std::to_string(defect));
  const GrowthFit fit = estimate_growth_exponent(b);
  b.p_hat = fit.p_hat;
  b.p_hat_degenerate = fit.degenerate;
  return b;
}

GrowthFit estimate_growth_exponent(const GpcBasis& b, int grid_points) {
  if (grid_points < 1000) throw std::invalid_argument("estimate_growth_exponent: need >= 1000 grid points");
  GrowthFit fit;
  if (b.K < 2) {
    fit.degenerate = true;
    return fit;
  }
  std::vector<double> maxabs(b.K, 0.0);
  for (int g = 0; g < grid_points; ++g) {
    const double z = b.measure.lo + (b.measure.hi - b.measure.lo) * g / (grid_points - 1);
    const std::vector<double> phi = b.eval(z);
    for (int k = 0; k < b.K; ++k) maxabs[k] = std::max(maxabs[k], std::abs(phi[k]));
  }
  if (b.K == 2) {
    fit.p_hat = std::log(maxabs[1]) / std::log(2.0);
    fit.degenerate = true;
    return fit;
  }
  // least squares y = c + p x over k = 2..K with x = log k, y = log max|phi_k|
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const int n = b.K - 1;
  for (int k = 2; k <= b.K; ++k) {
    const double x = std::log(double(k));
    const double y = std::log(maxabs[k - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.p_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

namespace {

// 0-based simplex packing for sorted triples a <= b <= c
inline size_t simplex_index(int a, int b, int c) {
  return static_cast<size_t>(c) * (c + 1) * (c + 2) / 6 + static_cast<size_t>(b) * (b + 1) / 2 + a;
}

}  // namespace

double TripleTensor::operator()(int j, int l, int k) const {
  int t[3] = {j - 1, l - 1, k - 1};
  std::sort(t, t + 3);
  return packed[simplex_index(t[0], t[1], t[2])];
}

std::vector<std::vector<TripleTensor::Term>> TripleTensor::contraction_table(double tol) const {
  std::vector<std::vector<Term>> table(K);
  for (int k = 1; k <= K; ++k)
    for (int j = 1; j <= K; ++j)
      for (int l = 1; l <= K; ++l) {
        const double s = (*this)(j, l, k);
        if (std::abs(s) > tol) table[k - 1].push_back({j, l, s});
      }
  return table;
}

std::vector<TripleTensor::Entry> TripleTensor::unique_nonzeros(double tol) const {
  std::vector<Entry> out;
  for (int j = 1; j <= K; ++j)
    for (int l = j; l <= K; ++l)
      for (int k = l; k <= K; ++k) {
        const double s = (*this)(j, l, k);
        if (std::abs(s) > tol) out.push_back({j, l, k, s});
      }
  return out;
}

TripleTensor triple_products(const GpcBasis& b) {
  TripleTensor t;
  t.K = b.K;
  t.packed.assign(simplex_index(b.K - 1, b.K - 1, b.K - 1) + 1, 0.0);
  const int nq = static_cast<int>(b.quad.nodes.size());
  std::vector<std::vector<double>> vals(nq);
  for (int q = 0; q < nq; ++q) vals[q] = b.eval(b.quad.nodes[q]);
  for (int a = 0; a < b.K; ++a)
    for (int bb = a; bb < b.K; ++bb)
      for (int c = bb; c < b.K; ++c) {
        double s = 0.0;
        for (int q = 0; q < nq; ++q) s += b.quad.weights[q] * vals[q][a] * vals[q][bb] * vals[q][c];
        t.packed[simplex_index(a, bb, c)] = s;
      }
  return t;
}

namespace {

template <class T>
std::vector<T> product_impl(const std::vector<T>& a, const std::vector<T>& b, const TripleTensor& t) {
  if (static_cast<int>(a.size()) != t.K || static_cast<int>(b.size()) != t.K)
    throw std::invalid_argument("galerkin_product: size mismatch with tensor K");
  std::vector<T> c(t.K, T{});
  for (int k = 1; k <= t.K; ++k) {
    T acc{};
    for (int j = 1; j <= t.K; ++j)
      for (int l = 1; l <= t.K; ++l) acc += t(j, l, k) * a[j - 1] * b[l - 1];
    c[k - 1] = acc;
  }
  return c;
}

}  // namespace

std::vector<double> galerkin_product(const std::vector<double>& a, const std::vector<double>& b,
                                     const TripleTensor& t) {
  return product_impl(a, b, t);
}

std::vector<cplx> galerkin_product(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                   const TripleTensor& t) {
  return product_impl(a, b, t);
}

}  // namespace nsvfp
