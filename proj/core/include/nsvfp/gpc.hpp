#pragma once
// Orthonormal polynomial machinery for one scalar random variable z:
// measures, three-term recurrences, Gauss rules (Golub-Welsch), the triple
// product tensor S_jlk = <phi_j phi_l phi_k>, Galerkin products, and the
// growth exponent of max|phi_k|.
//
// Basis indexing follows the 1-based convention phi_1..phi_K with
// deg phi_k = k-1 and phi_1 == 1; vectors store phi_k at slot k-1.

#include <functional>
#include <vector>

#include "nsvfp/params.hpp"

namespace nsvfp {

struct Measure {
  enum class Kind { uniform, chebyshev, custom };
  Kind kind = Kind::uniform;
  double lo = -1.0, hi = 1.0;
  // custom only; probability density on [lo, hi] (must integrate to 1)
  std::function<double(double)> density;

  static Measure uniform();
  static Measure chebyshev();
  static Measure custom(std::function<double(double)> density, double lo, double hi);
  bool in_support(double z) const { return z >= lo && z <= hi; }
};

// Monic three-term recurrence pi_{k+1}(z) = (z - a[k]) pi_k(z) - b[k] pi_{k-1}(z)
// with pi_0 = 1; b[0] stores the measure's total mass.
struct Recurrence {
  std::vector<double> a, b;
};

// First n coefficient pairs: closed forms for uniform/chebyshev, discrete
// Stieltjes on a 4096-point composite Gauss rule for custom densities.
// Checks the custom density is nonnegative and has unit mass.
Recurrence recurrence_coeffs(const Measure& m, int n);

struct QuadRule {
  std::vector<double> nodes, weights;
};

// Q-point Gauss rule for the measure; exact for degree <= 2Q-1.
QuadRule gauss_rule(const Measure& m, int Q);

struct GrowthFit {
  double p_hat = 0.0;
  // K < 3: slope comes from the single segment k=1 -> k=2 (or is 0 for K=1)
  bool degenerate = false;
};

struct GpcBasis {
  int K = 1;
  int Q = 2;
  Measure measure;
  Recurrence rec;  // at least max(K, Q) coefficient pairs
  QuadRule quad;   // Q-point Gauss rule
  double p_hat = 0.0;
  bool p_hat_degenerate = false;

  // phi_1(z)..phi_K(z); throws std::domain_error outside the support
  std::vector<double> eval(double z) const;
  // phi and dphi/dz together (differentiated recurrence)
  void eval_with_deriv(double z, std::vector<double>& phi, std::vector<double>& dphi) const;
  // max_{j,l <= K} |<phi_j, phi_l> - delta_jl| under the stored rule
  double ortho_defect() const;
  // D[m-1][k-1] = <phi_k', phi_m>: applying D to gPC coefficients
  // differentiates the reconstruction in z
  std::vector<std::vector<double>> derivative_matrix() const;
};

// Q = 0 selects the default 2K. Requires Q >= ceil((3K-2)/2) so products of
// three basis polynomials are integrated exactly; verifies orthonormality to
// 1e-10 before returning and fills the growth-exponent estimate.
GpcBasis build_basis(const Measure& m, int K, int Q = 0);

// Least-squares slope of log max_z|phi_k| against log k over k = 2..K on an
// equispaced grid (>= 1000 points, endpoints included).
GrowthFit estimate_growth_exponent(const GpcBasis& b, int grid_points = 1024);

struct TripleTensor {
  int K = 0;
  // values for 1 <= j <= l <= k <= K in simplex packing (permutation symmetry
  // holds by construction)
  std::vector<double> packed;

  double operator()(int j, int l, int k) const;  // 1-based, any index order

  struct Term {
    int j, l;
    double s;
  };
  // table[k-1]: every ordered pair (j,l) with |S_jlk| > tol, row-major in (j,l)
  std::vector<std::vector<Term>> contraction_table(double tol = 1e-12) const;

  struct Entry {
    int j, l, k;
    double value;
  };
  std::vector<Entry> unique_nonzeros(double tol = 1e-12) const;  // j <= l <= k
};

// S_jlk by the basis's own Gauss rule (exact by the build_basis precondition).
TripleTensor triple_products(const GpcBasis& b);

// c_k = sum_{j,l} S_jlk a_j b_l
std::vector<double> galerkin_product(const std::vector<double>& a, const std::vector<double>& b,
                                     const TripleTensor& t);
std::vector<cplx> galerkin_product(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                   const TripleTensor& t);

}  // namespace nsvfp
