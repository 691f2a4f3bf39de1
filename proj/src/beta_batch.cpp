#include "beta_batch.hpp"

#include <algorithm>

#include "scurve/wigner.hpp"

namespace scurve {

BetaBatch::BetaBatch(int band_limit)
    : L_(band_limit), ne_(2 * band_limit - 1), nc_(fft::good_size(4 * band_limit - 3)),
      ext_dft_(ne_, fft::Direction::forward), conv_fwd_(nc_, fft::Direction::forward),
      conv_bwd_(nc_, fft::Direction::backward),
      ext_(static_cast<std::size_t>(chunk) * ne_, 0.0),
      conv_(static_cast<std::size_t>(chunk) * nc_, 0.0), kernel_hat_(nc_, 0.0), half_shift_(ne_) {
  for (int mp = -(L_ - 1); mp <= L_ - 1; ++mp) {
    half_shift_[mp + L_ - 1] = std::polar(1.0 / ne_, -pi * mp / ne_);
  }
  for (int k = -2 * (L_ - 1); k <= 2 * (L_ - 1); ++k) {
    kernel_hat_[bin(k, nc_)] = quadrature_weight(-k) / static_cast<double>(nc_);
  }
  fft::RowDft(nc_, fft::Direction::forward).execute(kernel_hat_.data(), 1);
}

void BetaBatch::apply(const cplx* cols, const double* signs, int rows, cplx* Y) {
  const int L = L_;
  for (int r0 = 0; r0 < rows; r0 += chunk) {
    const int nr = std::min(chunk, rows - r0);
    for (int r = 0; r < nr; ++r) {
      const cplx* s = cols + static_cast<std::size_t>(r0 + r) * L;
      cplx* e = ext_.data() + static_cast<std::size_t>(r) * ne_;
      const double sign = signs[r0 + r];
      std::copy(s, s + L, e);
      for (int b = L; b < ne_; ++b) e[b] = sign * s[2 * L - 2 - b];
    }
    ext_dft_.execute(ext_.data(), nr);
    for (int r = 0; r < nr; ++r) {
      const cplx* e = ext_.data() + static_cast<std::size_t>(r) * ne_;
      cplx* c = conv_.data() + static_cast<std::size_t>(r) * nc_;
      std::fill(c, c + nc_, cplx(0.0));
      for (int mp = -(L - 1); mp <= L - 1; ++mp) {
        c[bin(mp, nc_)] = e[bin(mp, ne_)] * half_shift_[mp + L - 1];
      }
    }
    conv_fwd_.execute(conv_.data(), nr);
    for (int r = 0; r < nr; ++r) {
      cplx* c = conv_.data() + static_cast<std::size_t>(r) * nc_;
      for (int k = 0; k < nc_; ++k) c[k] *= kernel_hat_[k];
    }
    conv_bwd_.execute(conv_.data(), nr);
    for (int r = 0; r < nr; ++r) {
      const cplx* c = conv_.data() + static_cast<std::size_t>(r) * nc_;
      cplx* y = Y + static_cast<std::size_t>(r0 + r) * ne_;
      for (int mp = -(L - 1); mp <= L - 1; ++mp) y[mp + L - 1] = c[bin(mp, nc_)];
    }
  }
}

}  // namespace scurve
