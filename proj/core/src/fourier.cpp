#include "nsvfp/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace nsvfp {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

PaddedFft::PaddedFft(const Config& c)
    : dim_(c.p.dim),
      n_x_(c.g.n_x),
      padded_(c.g.padded()),
      modes_(c.lay.modes),
      cut_(c.g.dealias_cut()) {
  total_ = 1;
  for (int j = 0; j < dim_; ++j) total_ *= padded_;
  const double vol_root = std::pow(c.p.domain_length, 0.5 * dim_);
  to_scale_ = 1.0 / vol_root;                 // plane waves carry L^{-d/2}
  from_scale_ = vol_root / double(total_);    // forward FFT normalization

  embed_.resize(modes_);
  retained_.resize(modes_);
  for (int m = 0; m < modes_; ++m) {
    int flat = 0, stride = 1;
    bool keep = true;
    for (int j = 0; j < dim_; ++j) {
      const int xi = c.lay.wave[m][j];
      flat += (xi >= 0 ? xi : xi + padded_) * stride;
      stride *= padded_;
      keep = keep && std::abs(xi) <= cut_;
    }
    embed_[m] = flat;
    retained_[m] = keep;
  }

  buf_in_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * total_));
  buf_out_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * total_));
  if (!buf_in_ || !buf_out_) throw std::bad_alloc();

  // FFTW is row-major (last dim contiguous); our flattening is little-endian
  // (dim 0 fastest) — all extents equal, so the same plan serves both.
  int n[3] = {padded_, padded_, padded_};
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_fwd_ = fftw_plan_dft(dim_, n, reinterpret_cast<fftw_complex*>(buf_in_),
                            reinterpret_cast<fftw_complex*>(buf_out_), FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft(dim_, n, reinterpret_cast<fftw_complex*>(buf_in_),
                            reinterpret_cast<fftw_complex*>(buf_out_), FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("FFTW plan creation failed");
}

PaddedFft::~PaddedFft() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(buf_in_);
  fftw_free(buf_out_);
}

void PaddedFft::to_phys(const std::vector<cplx>& coef, std::vector<cplx>& phys) {
  if (static_cast<int>(coef.size()) != modes_) throw std::invalid_argument("to_phys: wrong coefficient count");
  std::fill(buf_in_, buf_in_ + total_, cplx{0.0, 0.0});
  for (int m = 0; m < modes_; ++m) buf_in_[embed_[m]] = coef[m];
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  phys.resize(total_);
  for (int g = 0; g < total_; ++g) phys[g] = buf_out_[g] * to_scale_;
}

void PaddedFft::from_phys(const std::vector<cplx>& phys, std::vector<cplx>& coef) {
  if (static_cast<int>(phys.size()) != total_) throw std::invalid_argument("from_phys: wrong grid size");
  std::memcpy(buf_in_, phys.data(), sizeof(cplx) * total_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  coef.assign(modes_, cplx{0.0, 0.0});
  for (int m = 0; m < modes_; ++m)
    if (retained_[m]) coef[m] = buf_out_[embed_[m]] * from_scale_;
}

void PaddedFft::product(const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<cplx>& out) {
  to_phys(a, pa_);
  to_phys(b, pb_);
  for (int g = 0; g < total_; ++g) pa_[g] *= pb_[g];
  from_phys(pa_, out);
}

}  // namespace nsvfp
