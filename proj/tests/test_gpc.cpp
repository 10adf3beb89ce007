#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "nsvfp/gpc.hpp"

using namespace nsvfp;

namespace {

// Oracle integration, independent of the library's Gauss machinery.
// uniform: composite Simpson against density 1/2 on [-1,1].
double integrate_uniform(const std::function<double(double)>& f) {
  const int n = 4000;  // panels (even); h^4 error ~ 1e-12 for these degrees
  const double h = 2.0 / n;
  double acc = f(-1.0) + f(1.0);
  for (int i = 1; i < n; ++i) acc += f(-1.0 + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0 * 0.5;
}

// chebyshev: z = cos(theta) turns the weight into (1/pi) d(theta); the
// trapezoid rule on a periodic-extendable smooth integrand is spectrally
// accurate (exact for trig polynomials of degree < n).
double integrate_chebyshev(const std::function<double(double)>& f) {
  const int n = 8192;
  double acc = 0.5 * (f(std::cos(0.0)) + f(std::cos(pi)));
  for (int i = 1; i < n; ++i) acc += f(std::cos(pi * i / n));
  return acc / n;
}

double integrate(const Measure& m, const std::function<double(double)>& f) {
  return m.kind == Measure::Kind::chebyshev ? integrate_chebyshev(f) : integrate_uniform(f);
}

// Textbook normalized Legendre via the Bonnet recurrence.
double legendre_phi(int k, double z) {
  double pm = 1.0, pk = z;
  if (k == 1) return 1.0;
  for (int n = 1; n < k - 1; ++n) {
    const double next = ((2 * n + 1) * z * pk - n * pm) / (n + 1);
    pm = pk;
    pk = next;
  }
  return std::sqrt(2.0 * k - 1.0) * pk;
}

double cheb_phi(int k, double z) {
  if (k == 1) return 1.0;
  return std::sqrt(2.0) * std::cos((k - 1) * std::acos(std::min(1.0, std::max(-1.0, z))));
}

}  // namespace

TEST_CASE("recurrence coefficients match the closed forms") {
  const Recurrence ru = recurrence_coeffs(Measure::uniform(), 8);
  CHECK(ru.b[0] == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 1; k < 8; ++k) {
    CHECK(ru.a[k] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ru.b[k] == doctest::Approx(double(k) * k / (4.0 * k * k - 1.0)).epsilon(1e-15));
  }
  const Recurrence rc = recurrence_coeffs(Measure::chebyshev(), 8);
  CHECK(rc.b[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rc.b[1] == doctest::Approx(0.5).epsilon(1e-15));
  for (int k = 2; k < 8; ++k) CHECK(rc.b[k] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("basis evaluation matches textbook Legendre and Chebyshev forms") {
  const GpcBasis bu = build_basis(Measure::uniform(), 7);
  const GpcBasis bc = build_basis(Measure::chebyshev(), 7);
  for (double z : {-1.0, -0.62, -0.3, 0.0, 0.41, 0.7, 1.0}) {
    const std::vector<double> pu = bu.eval(z);
    const std::vector<double> pc = bc.eval(z);
    for (int k = 1; k <= 7; ++k) {
      CHECK(pu[k - 1] == doctest::Approx(legendre_phi(k, z)).epsilon(1e-12));
      CHECK(pc[k - 1] == doctest::Approx(cheb_phi(k, z)).epsilon(1e-11));
    }
  }
  // frozen spot values: phi_2 = sqrt(3) z, phi_3 = sqrt(5)(3z^2-1)/2, phi_5(1) = 3
  const std::vector<double> p = bu.eval(0.7);
  CHECK(p[1] == doctest::Approx(std::sqrt(3.0) * 0.7).epsilon(1e-14));
  CHECK(p[2] == doctest::Approx(std::sqrt(5.0) * (3 * 0.49 - 1) / 2).epsilon(1e-14));
  CHECK(bu.eval(1.0)[4] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK_THROWS_AS((void)bu.eval(1.5), std::domain_error);
}

TEST_CASE("orthonormality under the independent quadrature oracle") {
  for (const Measure& m : {Measure::uniform(), Measure::chebyshev()}) {
    const GpcBasis b = build_basis(m, 6);
    CHECK(b.ortho_defect() <= 1e-10);
    for (int j = 1; j <= 6; ++j)
      for (int l = j; l <= 6; ++l) {
        const double g = integrate(m, [&](double z) {
          const std::vector<double> phi = b.eval(z);
          return phi[j - 1] * phi[l - 1];
        });
        CHECK(g == doctest::Approx(j == l ? 1.0 : 0.0).epsilon(1e-9));
      }
  }
}

TEST_CASE("custom measure: Stieltjes recurrence for density 3/4 (1-z^2)") {
  const Measure m =
      Measure::custom([](double z) { return 0.75 * (1.0 - z * z); }, -1.0, 1.0);
  const Recurrence rec = recurrence_coeffs(m, 5);
  CHECK(rec.b[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.b[1] == doctest::Approx(0.2).epsilon(1e-10));  // <z^2> = 1/5
  for (int k = 0; k < 5; ++k) CHECK(std::abs(rec.a[k]) <= 1e-12);
  const GpcBasis b = build_basis(m, 5);
  CHECK(b.ortho_defect() <= 1e-10);
  for (int j = 1; j <= 4; ++j) {
    const double g = integrate_uniform([&](double z) {
      // fold the density into the uniform oracle (factor 2 undoes its 1/2)
      const std::vector<double> phi = b.eval(z);
      return 2.0 * 0.75 * (1.0 - z * z) * phi[j - 1] * phi[j];
    });
    CHECK(std::abs(g) <= 1e-9);
  }
  CHECK_THROWS_AS(recurrence_coeffs(Measure::custom([](double z) { return z; }, -1.0, 1.0), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(recurrence_coeffs(Measure::custom([](double) { return 2.0; }, -1.0, 1.0), 3),
                  std::invalid_argument);
}

TEST_CASE("Gauss rules: support, positivity, unit mass, exactness") {
  for (const Measure& m : {Measure::uniform(), Measure::chebyshev()}) {
    const QuadRule q = gauss_rule(m, 6);
    REQUIRE(q.nodes.size() == 6);
    double mass = 0.0;
    for (size_t i = 0; i < q.nodes.size(); ++i) {
      CHECK(m.in_support(q.nodes[i]));
      CHECK(q.weights[i] > 0.0);
      mass += q.weights[i];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    for (int p = 0; p <= 11; ++p) {  // exact through degree 2Q-1
      double qsum = 0.0;
      for (size_t i = 0; i < q.nodes.size(); ++i) qsum += q.weights[i] * std::pow(q.nodes[i], p);
      const double ref = integrate(m, [&](double z) { return std::pow(z, p); });
      CHECK(qsum == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("triple products against the oracle; frozen entries") {
  const GpcBasis b = build_basis(Measure::uniform(), 5);
  const TripleTensor t = triple_products(b);
  for (int j = 1; j <= 5; ++j)
    for (int l = 1; l <= 5; ++l)
      for (int k = 1; k <= 5; ++k) {
        const double ref = integrate_uniform([&](double z) {
          const std::vector<double> phi = b.eval(z);
          return phi[j - 1] * phi[l - 1] * phi[k - 1];
        });
        CHECK(t(j, l, k) == doctest::Approx(ref).epsilon(1e-9));
        // permutation symmetry is exact by the packed storage
        CHECK(t(j, l, k) == t(l, j, k));
        CHECK(t(j, l, k) == t(k, l, j));
        CHECK(t(j, l, k) == t(j, k, l));
      }
  for (int l = 1; l <= 5; ++l)
    for (int k = 1; k <= 5; ++k)
      CHECK(t(1, l, k) == doctest::Approx(l == k ? 1.0 : 0.0).epsilon(1e-12));
  CHECK(t(2, 2, 3) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(t(2, 2, 3) == doctest::Approx(0.8944271909999159).epsilon(1e-12));
}

TEST_CASE("contraction table and unique nonzeros agree with the dense tensor") {
  const GpcBasis b = build_basis(Measure::uniform(), 6);
  const TripleTensor t = triple_products(b);
  const auto table = t.contraction_table(1e-12);
  REQUIRE(table.size() == 6);
  for (int k = 1; k <= 6; ++k) {
    double dense = 0.0, sparse = 0.0;
    // contract against a fixed rank-1 pair to compare the two representations
    for (int j = 1; j <= 6; ++j)
      for (int l = 1; l <= 6; ++l) dense += t(j, l, k) * j * (l + 0.5);
    for (const auto& term : table[k - 1]) sparse += term.s * term.j * (term.l + 0.5);
    CHECK(sparse == doctest::Approx(dense).epsilon(1e-13));
  }
  for (const auto& e : t.unique_nonzeros(1e-12)) {
    CHECK(e.j <= e.l);
    CHECK(e.l <= e.k);
    CHECK(e.value == t(e.j, e.l, e.k));
    CHECK(std::abs(e.value) > 1e-12);
  }
  // parity: S_jlk = 0 when j+l+k is even (degrees sum odd) for symmetric measures
  for (const auto& e : t.unique_nonzeros(1e-12)) CHECK((e.j + e.l + e.k) % 2 == 1);
}

TEST_CASE("Galerkin products: K=2 closed form and quadrature cross-check") {
  const GpcBasis b2 = build_basis(Measure::uniform(), 2);
  const TripleTensor t2 = triple_products(b2);
  const std::vector<double> a{1.3, -0.7}, bb{0.4, 2.1};
  const std::vector<double> c = galerkin_product(a, bb, t2);
  // phi_1 = 1, phi_2 = sqrt(3) z: (ab)_1 = a1 b1 + a2 b2, (ab)_2 = a1 b2 + a2 b1
  CHECK(c[0] == doctest::Approx(a[0] * bb[0] + a[1] * bb[1]).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(a[0] * bb[1] + a[1] * bb[0]).epsilon(1e-14));

  const GpcBasis b = build_basis(Measure::uniform(), 5);
  const TripleTensor t = triple_products(b);
  const std::vector<double> x{0.9, -0.2, 0.31, 0.05, -0.13};
  const std::vector<double> y{-0.4, 0.8, -0.07, 0.22, 0.011};
  const std::vector<double> p = galerkin_product(x, y, t);
  for (int k = 1; k <= 5; ++k) {
    const double ref = integrate_uniform([&](double z) {
      const std::vector<double> phi = b.eval(z);
      double fx = 0.0, fy = 0.0;
      for (int j = 0; j < 5; ++j) {
        fx += x[j] * phi[j];
        fy += y[j] * phi[j];
      }
      return fx * fy * phi[k - 1];
    });
    CHECK(p[k - 1] == doctest::Approx(ref).epsilon(1e-9));
  }

  const std::vector<cplx> cx{{1.0, 0.5}, {0.0, -0.3}, {0.2, 0.0}, {0.0, 0.0}, {-0.1, 0.1}};
  const std::vector<cplx> cy{{0.3, 0.0}, {0.7, 0.2}, {0.0, 0.0}, {0.1, -0.4}, {0.0, 0.2}};
  const std::vector<cplx> cp = galerkin_product(cx, cy, t);
  // complex product = bilinear combination of the four real/imag real products
  std::vector<double> xr(5), xi(5), yr(5), yi(5);
  for (int j = 0; j < 5; ++j) {
    xr[j] = cx[j].real();
    xi[j] = cx[j].imag();
    yr[j] = cy[j].real();
    yi[j] = cy[j].imag();
  }
  const auto rr = galerkin_product(xr, yr, t);
  const auto ii = galerkin_product(xi, yi, t);
  const auto ri = galerkin_product(xr, yi, t);
  const auto ir = galerkin_product(xi, yr, t);
  for (int k = 0; k < 5; ++k) {
    CHECK(cp[k].real() == doctest::Approx(rr[k] - ii[k]).epsilon(1e-13));
    CHECK(cp[k].imag() == doctest::Approx(ri[k] + ir[k]).epsilon(1e-13));
  }
  CHECK_THROWS_AS((void)galerkin_product(std::vector<double>{1.0}, x, t), std::invalid_argument);
}

TEST_CASE("derivatives: eval_with_deriv and the spectral derivative matrix") {
  const GpcBasis b = build_basis(Measure::uniform(), 6);
  std::vector<double> phi, dphi;
  for (double z : {-0.8, -0.25, 0.0, 0.33, 0.9}) {
    b.eval_with_deriv(z, phi, dphi);
    const double h = 1e-6;
    const std::vector<double> pp = b.eval(z + h);
    const std::vector<double> pm = b.eval(z - h);
    for (int k = 0; k < 6; ++k)
      CHECK(dphi[k] == doctest::Approx((pp[k] - pm[k]) / (2 * h)).epsilon(1e-6));
  }
  const auto D = b.derivative_matrix();
  for (int m = 0; m < 6; ++m)
    for (int k = 0; k <= m; ++k) CHECK(D[m][k] == 0.0);
  const std::vector<double> coef{0.2, -1.1, 0.7, 0.33, -0.08, 0.5};
  std::vector<double> dcoef(6, 0.0);
  for (int m = 0; m < 6; ++m)
    for (int k = 0; k < 6; ++k) dcoef[m] += D[m][k] * coef[k];
  for (double z : {-0.6, 0.1, 0.75}) {
    b.eval_with_deriv(z, phi, dphi);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 0; k < 6; ++k) {
      lhs += dcoef[k] * phi[k];
      rhs += coef[k] * dphi[k];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("growth exponents: Legendre ~ 1/2, Chebyshev ~ 0") {
  const GpcBasis bu = build_basis(Measure::uniform(), 10);
  CHECK(bu.p_hat > 0.4);
  CHECK(bu.p_hat < 0.6);
  CHECK_FALSE(bu.p_hat_degenerate);
  const GpcBasis bc = build_basis(Measure::chebyshev(), 10);
  CHECK(std::abs(bc.p_hat) < 0.05);
  const GpcBasis b1 = build_basis(Measure::uniform(), 1);
  CHECK(b1.p_hat_degenerate);
  CHECK(b1.p_hat == 0.0);
  const GpcBasis b2 = build_basis(Measure::uniform(), 2);
  CHECK(b2.p_hat_degenerate);
  CHECK(b2.p_hat == doctest::Approx(std::log(std::sqrt(3.0)) / std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS((void)estimate_growth_exponent(bu, 10), std::invalid_argument);
}

TEST_CASE("build_basis guards") {
  CHECK_THROWS_AS((void)build_basis(Measure::uniform(), 0), std::invalid_argument);
  CHECK_THROWS_AS((void)build_basis(Measure::uniform(), 5, 3), std::invalid_argument);
  // minimal admissible quadrature still yields an orthonormal basis
  const GpcBasis b = build_basis(Measure::uniform(), 5, 7);
  CHECK(b.Q == 7);
  CHECK(b.ortho_defect() <= 1e-10);
  CHECK_THROWS_AS((void)gauss_rule(Measure::uniform(), 0), std::invalid_argument);
}
