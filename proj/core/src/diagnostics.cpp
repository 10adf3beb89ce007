#include "nsvfp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nsvfp/phase_space.hpp"

namespace nsvfp {

namespace {

double weight_tail(const double* q, int j, int dim, int budget) {
  if (j == dim) return 1.0;
  double sum = 0.0, pw = 1.0;
  for (int a = 0; a <= budget; ++a) {
    sum += pw * weight_tail(q, j + 1, dim, budget - a);
    pw *= q[j];
  }
  return sum;
}

// weighted squared norm of one [herms x modes] block
double wnorm2(const std::vector<cplx>& f, const std::vector<double>& w, int modes) {
  double acc = 0.0;
  const int rows = static_cast<int>(f.size()) / modes;
  for (int h = 0; h < rows; ++h) {
    const cplx* row = f.data() + static_cast<size_t>(h) * modes;
    for (int m = 0; m < modes; ++m) acc += w[m] * std::norm(row[m]);
  }
  return acc;
}

double wdot_re(const std::vector<cplx>& a, const std::vector<cplx>& b,
               const std::vector<double>& w, int modes) {
  double acc = 0.0;
  const int rows = static_cast<int>(a.size()) / modes;
  for (int h = 0; h < rows; ++h) {
    const cplx* ra = a.data() + static_cast<size_t>(h) * modes;
    const cplx* rb = b.data() + static_cast<size_t>(h) * modes;
    for (int m = 0; m < modes; ++m)
      acc += w[m] * (ra[m].real() * rb[m].real() + ra[m].imag() * rb[m].imag());
  }
  return acc;
}

}  // namespace

std::vector<double> sobolev_weights(const Config& c, int s_order) {
  const Layout& lay = c.lay;
  std::vector<double> w(lay.modes);
  for (int m = 0; m < lay.modes; ++m) {
    const auto kw = lay.phys_wave(m);
    const double q[3] = {kw[0] * kw[0], kw[1] * kw[1], kw[2] * kw[2]};
    w[m] = weight_tail(q, 0, lay.dim, s_order);
  }
  return w;
}

EnergyBreakdown energy(const Config& c, const SimState& s, int s_order) {
  const std::vector<double> w = sobolev_weights(c, s_order);
  const int modes = c.lay.modes;
  EnergyBreakdown e;
  for (int a = 0; a < c.lay.dim; ++a) {
    for (int m = 0; m < modes; ++m) e.fluid += w[m] * std::norm(s.u_hat[a][m]);
    e.mean += c.beta * c.beta * std::norm(s.u_hat[a][0]);
  }
  for (int i = 0; i < c.n_species(); ++i) e.kinetic += wnorm2(s.f_hat[i], w, modes);
  e.kinetic *= c.p.kappa * c.p.theta_bar;
  e.total = e.fluid + e.kinetic + e.mean;
  return e;
}

DissipationReport dissipation(const Config& c, const SimState& s, int s_order) {
  const std::vector<double> w = sobolev_weights(c, s_order);
  const Layout& lay = c.lay;
  const int modes = lay.modes;
  DissipationReport r;

  double ubar2 = 0.0;
  for (int a = 0; a < lay.dim; ++a) {
    for (int m = 0; m < modes; ++m) {
      const auto kw = lay.phys_wave(m);
      const double k2 = kw[0] * kw[0] + kw[1] * kw[1] + kw[2] * kw[2];
      r.g1 += w[m] * k2 * std::norm(s.u_hat[a][m]);
    }
    ubar2 += c.beta * c.beta * std::norm(s.u_hat[a][0]);
  }
  r.ubar_term_vanishes = std::abs(c.sum_cbrt - 1.0) < 1e-14;
  r.g1 += c.p.kappa / c.p.epsilon * (c.sum_cbrt - 1.0) * ubar2;

  r.g2.assign(c.n_species(), 0.0);
  r.total = r.g1;
  for (int i = 0; i < c.n_species(); ++i) {
    double acc = 0.0;
    for (int h = 0; h < lay.herms; ++h)
      for (int j = 0; j < lay.dim; ++j) {
        const int up = lay.herm_shift(h, j, +1);
        const double fac = c.sigma[i] * std::sqrt(double(lay.hmi[h][j] + 1));
        for (int m = 0; m < modes; ++m) {
          cplx val{0.0, 0.0};
          if (up >= 0) val = -fac * s.f(i, up, m, c);
          if (h == 0) val += c.beta * s.u_hat[j][m];
          acc += w[m] * std::norm(val);
        }
      }
    r.g2[i] = acc;
    r.total += c.p.kappa / c.p.epsilon * c.cbrt_size[i] * acc;
  }
  return r;
}

HypoReport hypo_functionals(const Config& c, const SimState& s, int s_order, double lambda4) {
  const std::vector<double> w = sobolev_weights(c, s_order);
  const int modes = c.lay.modes;
  const int d = c.lay.dim;
  const double eps = c.p.epsilon;
  HypoReport rep;
  rep.pair_form.resize(c.n_species());
  rep.bracket_form.resize(c.n_species());

  for (int i = 0; i < c.n_species(); ++i) {
    const auto kf = apply_ladder(c, i, LadderOp::lower, s.f_hat[i]);
    const auto sf = apply_ladder(c, i, LadderOp::spatial, s.f_hat[i]);
    double k2 = 0.0, s2 = 0.0, cross = 0.0, kk2 = 0.0, ks2 = 0.0;
    for (int j = 0; j < d; ++j) {
      k2 += wnorm2(kf[j], w, modes);
      s2 += wnorm2(sf[j], w, modes);
      cross += wdot_re(kf[j], sf[j], w, modes);
      const auto kkf = apply_ladder(c, i, LadderOp::lower, kf[j]);
      const auto ksf = apply_ladder(c, i, LadderOp::lower, sf[j]);
      for (int l = 0; l < d; ++l) {
        kk2 += wnorm2(kkf[l], w, modes);
        ks2 += wnorm2(ksf[l], w, modes);
      }
    }
    rep.pair_form[i] =
        (2.0 * k2 + 2.0 * eps * eps * cross + eps * eps * eps * s2) / c.cbrt_size[i];
    rep.bracket_form[i] =
        k2 + eps * eps * eps * eps * s2 + eps * eps * kk2 + eps * eps * eps * eps * ks2;
    rep.pair_sum += rep.pair_form[i];
    rep.bracket_sum += rep.bracket_form[i];
  }
  rep.e_tilde = energy(c, s, s_order).total +
                lambda4 * c.p.kappa * c.p.theta_bar * rep.pair_sum;
  return rep;
}

ConservationReport conservation_report(const Config& c, const SimState& s) {
  const Layout& lay = c.lay;
  ConservationReport r;
  r.mass_abs.resize(c.n_species());
  for (int i = 0; i < c.n_species(); ++i) r.mass_abs[i] = std::abs(s.f(i, 0, 0, c));

  for (int a = 0; a < lay.dim; ++a) {
    std::array<int, 3> e{0, 0, 0};
    e[a] = 1;
    const int h = lay.herm_index(e);
    double part = 0.0;
    double part_im = 0.0;
    for (int i = 0; i < c.n_species(); ++i) {
      part += c.p.sizes[i] * c.sigma[i] * s.f(i, h, 0, c).real();
      part_im += c.p.sizes[i] * c.sigma[i] * s.f(i, h, 0, c).imag();
    }
    const cplx m = s.u_hat[a][0] + cplx{c.p.kappa * c.beta * part, c.p.kappa * c.beta * part_im};
    r.momentum[a] = std::abs(m);
    r.momentum_max_abs = std::max(r.momentum_max_abs, r.momentum[a]);
    const cplx ub = c.beta * s.u_hat[a][0] +
                    cplx{c.p.kappa / c.volume * part, c.p.kappa / c.volume * part_im};
    r.ubar_residual = std::max(r.ubar_residual, std::abs(ub));
  }
  return r;
}

std::vector<double> hydro_residual(const Config& c, PaddedFft& fft, const SimState& s) {
  const Layout& lay = c.lay;
  const int modes = lay.modes;
  std::vector<double> res(c.n_species(), 0.0);
  std::vector<cplx> dens(modes), prod(modes);
  for (int i = 0; i < c.n_species(); ++i) {
    for (int m = 0; m < modes; ++m) dens[m] = c.beta * s.f(i, 0, m, c);
    // Background density: the Maxwellian is normalized over the whole phase
    // space, so its velocity integral is the constant 1/V, whose mode-0
    // coefficient under L^{-d/2}-normalized plane waves is beta.
    dens[0] += c.beta;
    double acc = 0.0;
    for (int a = 0; a < lay.dim; ++a) {
      std::array<int, 3> e{0, 0, 0};
      e[a] = 1;
      const int h = lay.herm_index(e);
      fft.product(dens, s.u_hat[a], prod);
      for (int m = 0; m < modes; ++m)
        acc += std::norm(c.beta * c.sigma[i] * s.f(i, h, m, c) - prod[m]);
    }
    res[i] = c.p.sizes[i] * std::sqrt(acc);
  }
  return res;
}

double poincare_ratio(const Config& c, const SimState& s) {
  const std::vector<double> w(c.lay.modes, 1.0);
  const int modes = c.lay.modes;
  double worst = 0.0;
  for (int i = 0; i < c.n_species(); ++i) {
    const double num = wnorm2(s.f_hat[i], w, modes);
    const auto kf = apply_ladder(c, i, LadderOp::lower, s.f_hat[i]);
    const auto sf = apply_ladder(c, i, LadderOp::spatial, s.f_hat[i]);
    double den = 0.0;
    for (int j = 0; j < c.lay.dim; ++j)
      den += wnorm2(kf[j], w, modes) +
             c.p.epsilon * c.p.epsilon * wnorm2(sf[j], w, modes);
    double ratio;
    if (den > 0.0)
      ratio = num / den;
    else
      ratio = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    worst = std::max(worst, ratio);
  }
  return worst;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series) {
  if (series.empty()) throw std::invalid_argument("fit_decay_rate: empty series");
  const double t_max = series.back().first;
  const double t_lo = t_max / 2.0;
  std::vector<double> ts, ys;
  for (const auto& [t, e] : series) {
    if (t < t_lo - 1e-12) continue;
    if (!(e > 0.0))
      throw std::invalid_argument("fit_decay_rate: non-positive energy in the fit window");
    ts.push_back(t);
    ys.push_back(-std::log(e));
  }
  if (ts.size() < 10)
    throw std::invalid_argument("fit_decay_rate: need >= 10 samples in [t_max/2, t_max]");
  const size_t n = ts.size();
  double tm = 0.0, ym = 0.0;
  for (size_t q = 0; q < n; ++q) {
    tm += ts[q];
    ym += ys[q];
  }
  tm /= double(n);
  ym /= double(n);
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (size_t q = 0; q < n; ++q) {
    stt += (ts[q] - tm) * (ts[q] - tm);
    sty += (ts[q] - tm) * (ys[q] - ym);
    syy += (ys[q] - ym) * (ys[q] - ym);
  }
  DecayFit fit;
  fit.lambda = stt > 0.0 ? sty / stt : 0.0;
  // a constant series leaves syy at mean-subtraction rounding scale; the
  // zero-slope line is exact there, not a zero-R^2 fit
  const double floor = 1e-24 * double(n) * (1.0 + ym * ym);
  if (syy > floor) {
    const double ss_res = syy - (stt > 0.0 ? sty * sty / stt : 0.0);
    fit.r2 = 1.0 - ss_res / syy;
  } else {
    fit.r2 = 1.0;
  }
  return fit;
}

}  // namespace nsvfp
