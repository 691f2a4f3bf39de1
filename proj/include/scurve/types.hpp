#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace scurve {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// 64-byte aligned storage so FFT plans can use SIMD paths on any buffer.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    const std::size_t bytes = ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
    void* p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

using ComplexBuffer = std::vector<cplx, AlignedAllocator<cplx>>;
using RealBuffer = std::vector<double, AlignedAllocator<double>>;

// Base for all library failures that are not plain argument errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Tiling failed its admissibility check.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// (-1)^k for any integer k.
constexpr double parity(int k) { return (k & 1) ? -1.0 : 1.0; }

// i^k for any integer k.
inline cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Maps a symmetric frequency index onto a DFT bin of length n.
constexpr int bin(int k, int n) { return ((k % n) + n) % n; }

}  // namespace scurve
