#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "scurve/types.hpp"

namespace scurve {

// Exact quadrature in beta on the nodes beta_b = pi (2b+1) / (2L-1), b < L.
//
// The samples are extended to [0, 2pi) by beta -> 2pi - beta with a fixed
// sign, Fourier analysed, and convolved with the analytic weights w(p) so that
// Y(m') = sum_{m''} X(m'') w(m'' - m') = int_0^pi F(beta) e^{-i m' beta} sin(beta) dbeta
// holds exactly for band-limited F. Index m' runs over -(L-1)..L-1 at m' + L - 1.
//
// Holds scratch buffers: one instance per thread.
class BetaQuadrature {
 public:
  explicit BetaQuadrature(int band_limit);
  ~BetaQuadrature();
  BetaQuadrature(const BetaQuadrature&) = delete;
  BetaQuadrature& operator=(const BetaQuadrature&) = delete;
  BetaQuadrature(BetaQuadrature&&) noexcept;
  BetaQuadrature& operator=(BetaQuadrature&&) noexcept;

  int band_limit() const;

  // L samples read with the given stride; `sign` is the parity of the
  // reflected half. Writes 2L-1 Fourier coefficients X(m').
  void fourier(const cplx* samples, std::ptrdiff_t stride, double sign, cplx* coeffs);

  // FFT convolution of 2L-1 coefficients with the weights.
  void weight(const cplx* coeffs, cplx* weighted);

  // fourier followed by weight.
  void apply(const cplx* samples, std::ptrdiff_t stride, double sign, cplx* weighted);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// O(L^2) reference for BetaQuadrature::weight.
std::vector<cplx> weight_direct(const std::vector<cplx>& coeffs, int band_limit);

}  // namespace scurve
