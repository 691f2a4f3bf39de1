#include "scurve/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

#include "fft.hpp"
#include "scurve/wigner.hpp"

namespace scurve {

struct BetaQuadrature::Impl {
  int L = 0;
  int n_ext = 0;   // 2L - 1
  int n_conv = 0;  // >= 4L - 3
  ComplexBuffer ext, ext_hat, coeffs, conv, conv_hat, kernel_hat;
  std::vector<cplx> half_shift;  // exp(-i pi m' / (2L-1)), indexed m' + L - 1
  fft::Plan ext_plan, conv_fwd, conv_bwd;
};

BetaQuadrature::BetaQuadrature(int band_limit) : impl_(std::make_unique<Impl>()) {
  if (band_limit < 1) throw std::invalid_argument("beta quadrature needs L >= 1");
  Impl& q = *impl_;
  q.L = band_limit;
  q.n_ext = 2 * band_limit - 1;
  q.n_conv = fft::good_size(4 * band_limit - 3);
  q.ext.assign(q.n_ext, 0.0);
  q.ext_hat.assign(q.n_ext, 0.0);
  q.coeffs.assign(q.n_ext, 0.0);
  q.conv.assign(q.n_conv, 0.0);
  q.conv_hat.assign(q.n_conv, 0.0);
  q.kernel_hat.assign(q.n_conv, 0.0);
  q.ext_plan = fft::plan_1d(q.n_ext, q.ext.data(), q.ext_hat.data(), fft::Direction::forward);
  q.conv_fwd = fft::plan_1d(q.n_conv, q.conv.data(), q.conv_hat.data(), fft::Direction::forward);
  q.conv_bwd = fft::plan_1d(q.n_conv, q.conv_hat.data(), q.conv.data(), fft::Direction::backward);

  q.half_shift.resize(q.n_ext);
  for (int mp = -(q.L - 1); mp <= q.L - 1; ++mp) {
    q.half_shift[mp + q.L - 1] = std::polar(1.0 / q.n_ext, -pi * mp / q.n_ext);
  }

  // Y(m') = sum_k X(m' + k) w(k): correlation, done as convolution with w(-k).
  ComplexBuffer kernel(q.n_conv, 0.0);
  for (int k = -2 * (q.L - 1); k <= 2 * (q.L - 1); ++k) {
    kernel[bin(k, q.n_conv)] = quadrature_weight(-k) / static_cast<double>(q.n_conv);
  }
  fft::Plan kp = fft::plan_1d(q.n_conv, kernel.data(), q.kernel_hat.data(), fft::Direction::forward);
  kp.execute();
}

BetaQuadrature::~BetaQuadrature() = default;
BetaQuadrature::BetaQuadrature(BetaQuadrature&&) noexcept = default;
BetaQuadrature& BetaQuadrature::operator=(BetaQuadrature&&) noexcept = default;

int BetaQuadrature::band_limit() const { return impl_->L; }

void BetaQuadrature::fourier(const cplx* samples, std::ptrdiff_t stride, double sign,
                             cplx* coeffs) {
  Impl& q = *impl_;
  for (int b = 0; b < q.L; ++b) q.ext[b] = samples[b * stride];
  for (int b = q.L; b < q.n_ext; ++b) q.ext[b] = sign * samples[(2 * q.L - 2 - b) * stride];
  q.ext_plan.execute();
  for (int mp = -(q.L - 1); mp <= q.L - 1; ++mp) {
    coeffs[mp + q.L - 1] = q.ext_hat[bin(mp, q.n_ext)] * q.half_shift[mp + q.L - 1];
  }
}

void BetaQuadrature::weight(const cplx* coeffs, cplx* weighted) {
  Impl& q = *impl_;
  std::fill(q.conv.begin(), q.conv.end(), cplx(0.0));
  for (int mp = -(q.L - 1); mp <= q.L - 1; ++mp) q.conv[bin(mp, q.n_conv)] = coeffs[mp + q.L - 1];
  q.conv_fwd.execute();
  for (int k = 0; k < q.n_conv; ++k) q.conv_hat[k] *= q.kernel_hat[k];
  q.conv_bwd.execute();
  for (int mp = -(q.L - 1); mp <= q.L - 1; ++mp) weighted[mp + q.L - 1] = q.conv[bin(mp, q.n_conv)];
}

void BetaQuadrature::apply(const cplx* samples, std::ptrdiff_t stride, double sign,
                           cplx* weighted) {
  Impl& q = *impl_;
  fourier(samples, stride, sign, q.coeffs.data());
  weight(q.coeffs.data(), weighted);
}

std::vector<cplx> weight_direct(const std::vector<cplx>& coeffs, int band_limit) {
  const int L = band_limit;
  if (static_cast<int>(coeffs.size()) != 2 * L - 1) {
    throw std::invalid_argument("weight_direct: expected 2L-1 coefficients");
  }
  std::vector<cplx> out(2 * L - 1, 0.0);
  for (int mp = -(L - 1); mp <= L - 1; ++mp) {
    cplx acc = 0.0;
    for (int mpp = -(L - 1); mpp <= L - 1; ++mpp) {
      acc += coeffs[mpp + L - 1] * quadrature_weight(mpp - mp);
    }
    out[mp + L - 1] = acc;
  }
  return out;
}

}  // namespace scurve
