#pragma once

// Thin RAII layer over FFTW. Internal to the library.

#include <fftw3.h>

#include <vector>

#include "scurve/types.hpp"

namespace scurve::fft {

struct Dim {
  int n;
  int stride_in;
  int stride_out;
};

enum class Direction { forward, backward };

class Plan {
 public:
  Plan() = default;
  explicit Plan(fftw_plan p) : plan_(p) {}
  ~Plan();
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  Plan(Plan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  Plan& operator=(Plan&& o) noexcept;

  void execute() const { fftw_execute(plan_); }
  // New-array execution; arrays must have the alignment of the planning arrays.
  void execute(cplx* in, cplx* out) const;
  void execute_r2c(double* in, cplx* out) const;
  void execute_c2r(cplx* in, double* out) const;

  explicit operator bool() const { return plan_ != nullptr; }

 private:
  fftw_plan plan_ = nullptr;
};

// Unnormalised transforms. forward uses exp(-2 pi i jk/n).
Plan plan_c2c(const std::vector<Dim>& dims, const std::vector<Dim>& batch, cplx* in, cplx* out,
              Direction dir);
Plan plan_r2c(const std::vector<Dim>& dims, const std::vector<Dim>& batch, double* in, cplx* out);
Plan plan_c2r(const std::vector<Dim>& dims, const std::vector<Dim>& batch, cplx* in, double* out);

// Length-n contiguous 1D c2c on the given arrays.
Plan plan_1d(int n, cplx* in, cplx* out, Direction dir);

// Smallest size >= n with no prime factor above 7.
int good_size(int n);

int largest_prime_factor(int n);

// In-place DFTs of contiguous rows of length n. Lengths with a large prime
// factor go through Bluestein's algorithm on a power-of-two size, which is
// several times faster than FFTW's generic codelets for them.
class RowDft {
 public:
  RowDft(int n, Direction dir);

  int length() const { return n_; }
  bool uses_bluestein() const { return bluestein_; }

  void execute(cplx* data, int rows);

 private:
  static constexpr int chunk = 8;

  void execute_chunk(cplx* data, int rows);

  int n_;
  bool bluestein_;
  int padded_ = 0;
  ComplexBuffer work_;
  std::vector<cplx> chirp_;   // exp(-+ i pi k^2 / n)
  ComplexBuffer kernel_hat_;  // FFT of the conjugate chirp, scaled by 1/padded
  Plan plan_, plan_fwd_, plan_bwd_;
};

}  // namespace scurve::fft
