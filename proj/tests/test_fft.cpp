#include <random>

#include "beta_batch.hpp"
#include "doctest.h"
#include "fft.hpp"
#include "oracles.hpp"
#include "scurve/quadrature.hpp"

using namespace scurve;

namespace {

std::vector<cplx> naive_dft(const cplx* x, int n, double sign) {
  std::vector<cplx> out(n);
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += x[j] * std::polar(1.0, sign * two_pi * ((long long)j * k % n) / n);
    out[k] = acc;
  }
  return out;
}

// F(beta) = sum_k c_k e^{i k beta} with c_{-k} = sign c_k, |k| < L.
std::vector<cplx> symmetric_series(int L, double sign, std::mt19937_64& rng) {
  std::vector<cplx> c(2 * L - 1);
  for (int k = 0; k < L; ++k) {
    const cplx v = oracle::random_normal(rng);
    c[k + L - 1] = (k == 0 && sign < 0) ? cplx(0.0) : v;
    c[-k + L - 1] = sign * c[k + L - 1];
  }
  return c;
}

cplx eval_series(const std::vector<cplx>& c, int L, double beta) {
  cplx acc = 0.0;
  for (int k = -(L - 1); k <= L - 1; ++k) acc += c[k + L - 1] * std::polar(1.0, k * beta);
  return acc;
}

}  // namespace

TEST_CASE("row DFT matches the naive transform") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 7, 15, 64, 127, 129, 253, 255, 511}) {
    for (auto dir : {fft::Direction::forward, fft::Direction::backward}) {
      for (int rows : {1, 8, 13}) {
        fft::RowDft dft(n, dir);
        // Offset by one element to exercise unaligned input.
        std::vector<cplx> data(static_cast<std::size_t>(n) * rows + 1);
        for (auto& v : data) v = oracle::random_normal(rng);
        const std::vector<cplx> orig = data;
        dft.execute(data.data() + 1, rows);
        const double sign = dir == fft::Direction::forward ? -1.0 : 1.0;
        double err = 0.0;
        for (int r = 0; r < rows; ++r) {
          const auto ref = naive_dft(orig.data() + 1 + static_cast<std::size_t>(r) * n, n, sign);
          for (int k = 0; k < n; ++k) err = std::max(err, std::abs(ref[k] - data[1 + r * n + k]));
        }
        CAPTURE(n);
        CAPTURE(rows);
        CHECK(err < 1e-11 * std::sqrt(double(n)));
        CHECK(data[0] == orig[0]);
      }
    }
  }
  CHECK(fft::RowDft(511, fft::Direction::forward).uses_bluestein());
  CHECK_FALSE(fft::RowDft(64, fft::Direction::forward).uses_bluestein());
}

TEST_CASE("size helpers") {
  CHECK(fft::good_size(1) == 1);
  CHECK(fft::good_size(11) == 12);
  CHECK(fft::good_size(509) == 512);
  CHECK(fft::largest_prime_factor(511) == 73);
  CHECK(fft::largest_prime_factor(128) == 2);
}

TEST_CASE("beta Fourier analysis recovers a symmetric series") {
  std::mt19937_64 rng(11);
  for (int L : {1, 2, 5, 16, 33}) {
    for (double sign : {1.0, -1.0}) {
      const auto c = symmetric_series(L, sign, rng);
      std::vector<cplx> samples(L);
      for (int b = 0; b < L; ++b) samples[b] = eval_series(c, L, pi * (2.0 * b + 1.0) / (2.0 * L - 1.0));
      BetaQuadrature q(L);
      std::vector<cplx> x(2 * L - 1), y(2 * L - 1);
      q.fourier(samples.data(), 1, sign, x.data());
      CHECK(oracle::max_abs_diff(x, c) < 1e-12);

      q.weight(x.data(), y.data());
      CHECK(oracle::max_abs_diff(y, weight_direct(x, L)) < 1e-12);

      // int_0^pi F e^{-i m' beta} sin(beta) by Gauss-Legendre on [0, pi].
      std::vector<double> gx, gw;
      oracle::gauss_legendre(4 * L + 20, gx, gw);
      std::vector<cplx> ref(2 * L - 1);
      for (int mp = -(L - 1); mp <= L - 1; ++mp) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
          const double beta = pi * (gx[i] + 1.0) / 2.0;
          acc += gw[i] * eval_series(c, L, beta) * std::polar(1.0, -mp * beta) * std::sin(beta);
        }
        ref[mp + L - 1] = acc * (pi / 2.0);
      }
      CHECK(oracle::max_abs_diff(y, ref) < 1e-11);
    }
  }
}

TEST_CASE("batched beta quadrature equals the single-row version") {
  std::mt19937_64 rng(5);
  for (int L : {1, 3, 16, 64, 128}) {
    const int rows = 37;
    std::vector<cplx> cols(static_cast<std::size_t>(rows) * L);
    std::vector<double> signs(rows);
    for (auto& v : cols) v = oracle::random_normal(rng);
    for (int r = 0; r < rows; ++r) signs[r] = (r % 3 == 0) ? -1.0 : 1.0;
    std::vector<cplx> Y(static_cast<std::size_t>(rows) * (2 * L - 1));
    BetaBatch batch(L);
    batch.apply(cols.data(), signs.data(), rows, Y.data());
    BetaQuadrature q(L);
    double err = 0.0;
    std::vector<cplx> y(2 * L - 1);
    for (int r = 0; r < rows; ++r) {
      q.apply(cols.data() + static_cast<std::size_t>(r) * L, 1, signs[r], y.data());
      for (int k = 0; k < 2 * L - 1; ++k) err = std::max(err, std::abs(y[k] - Y[r * (2 * L - 1) + k]));
    }
    CAPTURE(L);
    CHECK(err < 1e-12 * L);
  }
}
