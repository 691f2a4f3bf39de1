#include "fft.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace scurve::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<fftw_iodim> to_iodims(const std::vector<Dim>& dims) {
  std::vector<fftw_iodim> out;
  out.reserve(dims.size());
  for (const Dim& d : dims) out.push_back({d.n, d.stride_in, d.stride_out});
  return out;
}

fftw_complex* raw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

Plan checked(fftw_plan p) {
  if (p == nullptr) throw Error("FFTW failed to create a plan");
  return Plan(p);
}

}  // namespace

Plan::~Plan() {
  if (plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
}

Plan& Plan::operator=(Plan&& o) noexcept {
  if (this != &o) {
    if (plan_ != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    plan_ = o.plan_;
    o.plan_ = nullptr;
  }
  return *this;
}

void Plan::execute(cplx* in, cplx* out) const { fftw_execute_dft(plan_, raw(in), raw(out)); }

void Plan::execute_r2c(double* in, cplx* out) const { fftw_execute_dft_r2c(plan_, in, raw(out)); }

void Plan::execute_c2r(cplx* in, double* out) const { fftw_execute_dft_c2r(plan_, raw(in), out); }

Plan plan_c2c(const std::vector<Dim>& dims, const std::vector<Dim>& batch, cplx* in, cplx* out,
              Direction dir) {
  const auto d = to_iodims(dims);
  const auto b = to_iodims(batch);
  std::lock_guard lock(planner_mutex());
  return checked(fftw_plan_guru_dft(static_cast<int>(d.size()), d.data(), static_cast<int>(b.size()),
                                    b.data(), raw(in), raw(out),
                                    dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE));
}

Plan plan_r2c(const std::vector<Dim>& dims, const std::vector<Dim>& batch, double* in, cplx* out) {
  const auto d = to_iodims(dims);
  const auto b = to_iodims(batch);
  std::lock_guard lock(planner_mutex());
  return checked(fftw_plan_guru_dft_r2c(static_cast<int>(d.size()), d.data(),
                                        static_cast<int>(b.size()), b.data(), in, raw(out),
                                        FFTW_ESTIMATE));
}

Plan plan_c2r(const std::vector<Dim>& dims, const std::vector<Dim>& batch, cplx* in, double* out) {
  const auto d = to_iodims(dims);
  const auto b = to_iodims(batch);
  std::lock_guard lock(planner_mutex());
  // c2r destroys its input unless told otherwise; callers own scratch copies.
  return checked(fftw_plan_guru_dft_c2r(static_cast<int>(d.size()), d.data(),
                                        static_cast<int>(b.size()), b.data(), raw(in), out,
                                        FFTW_ESTIMATE));
}

Plan plan_1d(int n, cplx* in, cplx* out, Direction dir) {
  return plan_c2c({{n, 1, 1}}, {}, in, out, dir);
}

int good_size(int n) {
  for (int k = std::max(n, 1);; ++k) {
    int r = k;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return k;
  }
}

int largest_prime_factor(int n) {
  int best = 1;
  for (int p = 2; static_cast<long long>(p) * p <= n; ++p) {
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  }
  return n > 1 ? std::max(best, n) : best;
}

RowDft::RowDft(int n, Direction dir) : n_(n), bluestein_(n > 64 && largest_prime_factor(n) > 50) {
  if (n < 1) throw std::invalid_argument("DFT length must be positive");
  if (!bluestein_) {
    work_.assign(static_cast<std::size_t>(chunk) * n, 0.0);
    plan_ = plan_c2c({{n, 1, 1}}, {{chunk, n, n}}, work_.data(), work_.data(), dir);
    return;
  }
  padded_ = 1;
  while (padded_ < 2 * n - 1) padded_ *= 2;
  const double sgn = dir == Direction::forward ? -1.0 : 1.0;
  chirp_.resize(n);
  for (int k = 0; k < n; ++k) {
    const std::int64_t q = (static_cast<std::int64_t>(k) * k) % (2 * static_cast<std::int64_t>(n));
    chirp_[k] = std::polar(1.0, sgn * pi * static_cast<double>(q) / n);
  }
  ComplexBuffer b(padded_, 0.0);
  b[0] = std::conj(chirp_[0]);
  for (int k = 1; k < n; ++k) b[k] = b[padded_ - k] = std::conj(chirp_[k]);
  kernel_hat_.assign(padded_, 0.0);
  {
    Plan p = plan_1d(padded_, b.data(), kernel_hat_.data(), Direction::forward);
    p.execute();
  }
  for (cplx& v : kernel_hat_) v /= static_cast<double>(padded_);
  work_.assign(static_cast<std::size_t>(chunk) * padded_, 0.0);
  plan_fwd_ = plan_c2c({{padded_, 1, 1}}, {{chunk, padded_, padded_}}, work_.data(), work_.data(),
                       Direction::forward);
  plan_bwd_ = plan_c2c({{padded_, 1, 1}}, {{chunk, padded_, padded_}}, work_.data(), work_.data(),
                       Direction::backward);
}

void RowDft::execute(cplx* data, int rows) {
  for (int r0 = 0; r0 < rows; r0 += chunk) {
    execute_chunk(data + static_cast<std::size_t>(r0) * n_, std::min(chunk, rows - r0));
  }
}

void RowDft::execute_chunk(cplx* data, int rows) {
  const std::size_t n = n_;
  if (!bluestein_) {
    const bool aligned = rows == chunk && reinterpret_cast<std::uintptr_t>(data) % 64 == 0;
    if (aligned) {
      plan_.execute(data, data);
    } else {
      std::memcpy(static_cast<void*>(work_.data()), data, rows * n * sizeof(cplx));
      plan_.execute();
      std::memcpy(static_cast<void*>(data), work_.data(), rows * n * sizeof(cplx));
    }
    return;
  }
  const std::size_t m = padded_;
  for (int r = 0; r < rows; ++r) {
    cplx* y = work_.data() + r * m;
    const cplx* x = data + r * n;
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] * chirp_[k];
    std::fill(y + n, y + m, cplx(0.0));
  }
  plan_fwd_.execute();
  for (int r = 0; r < rows; ++r) {
    cplx* y = work_.data() + r * m;
    for (std::size_t k = 0; k < m; ++k) y[k] *= kernel_hat_[k];
  }
  plan_bwd_.execute();
  for (int r = 0; r < rows; ++r) {
    const cplx* y = work_.data() + r * m;
    cplx* x = data + r * n;
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] * chirp_[k];
  }
}

}  // namespace scurve::fft
