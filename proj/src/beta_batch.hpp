#pragma once

// Row-batched version of the beta quadrature used by the SO(3) transforms.

#include "fft.hpp"
#include "scurve/types.hpp"

namespace scurve {

class BetaBatch {
 public:
  explicit BetaBatch(int band_limit);

  // `cols` holds `rows` rows of L samples (stride L); signs[r] is the parity
  // of the reflected half of row r. Writes rows of 2L-1 weighted values
  // Y(m') at m' + L - 1 into `Y` (stride 2L-1).
  void apply(const cplx* cols, const double* signs, int rows, cplx* Y);

 private:
  static constexpr int chunk = 32;

  int L_, ne_, nc_;
  fft::RowDft ext_dft_, conv_fwd_, conv_bwd_;
  ComplexBuffer ext_, conv_, kernel_hat_;
  std::vector<cplx> half_shift_;
};

}  // namespace scurve
