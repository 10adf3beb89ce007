#pragma once
// FFT bridge between the truncated Fourier coefficient cube and the padded
// physical grid used for pseudospectral products (3/2-padded transforms,
// 2/3-rule truncation on the way back).

#include <vector>

#include "nsvfp/params.hpp"

namespace nsvfp {

// One instance owns its FFTW plans and scratch buffers; instances are not
// thread-safe — give each worker its own. Plan creation/destruction is
// serialized internally (FFTW planning is global state).
class PaddedFft {
 public:
  explicit PaddedFft(const Config& c);
  ~PaddedFft();
  PaddedFft(const PaddedFft&) = delete;
  PaddedFft& operator=(const PaddedFft&) = delete;

  // padded()^dim, the physical grid size
  int grid_points() const { return total_; }

  // orthonormal-basis coefficients (n_x cube, FFT order) -> values on the
  // padded physical grid (little-endian flattening, dimension 0 fastest)
  void to_phys(const std::vector<cplx>& coef, std::vector<cplx>& phys);
  // physical values -> coefficients; modes beyond dealias_cut are zeroed
  void from_phys(const std::vector<cplx>& phys, std::vector<cplx>& coef);

  // dealiased pointwise product of two coefficient fields
  void product(const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<cplx>& out);

 private:
  int dim_, n_x_, padded_, total_, modes_, cut_;
  double to_scale_, from_scale_;
  std::vector<int> embed_;       // flat mode -> padded grid slot
  std::vector<bool> retained_;   // flat mode survives the dealias cut
  cplx* buf_in_ = nullptr;
  cplx* buf_out_ = nullptr;
  void* plan_fwd_ = nullptr;   // fftw_plan
  void* plan_bwd_ = nullptr;
  std::vector<cplx> pa_, pb_;  // product scratch
};

}  // namespace nsvfp
