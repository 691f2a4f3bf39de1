#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "scurve/types.hpp"
#include "scurve/wigner.hpp"

namespace scurve {

// alpha_a = 2pi a/(2M-1), beta_b = pi(2b+1)/(2L-1), gamma_g = 2pi g/(2N-1).
// Storage is gamma-major: index ((g L) + b)(2M-1) + a.
struct SO3Grid {
  int L = 0;
  int M = 0;
  int N = 0;

  static SO3Grid cubic(int L) { return {L, L, L}; }
  void validate() const;

  int n_alpha() const { return 2 * M - 1; }
  int n_beta() const { return L; }
  int n_gamma() const { return 2 * N - 1; }
  std::size_t plane_size() const { return static_cast<std::size_t>(n_beta()) * n_alpha(); }
  std::size_t size() const { return plane_size() * n_gamma(); }
  double alpha(int a) const { return two_pi * a / (2.0 * M - 1.0); }
  double beta(int b) const { return std::min(pi, pi * (2.0 * b + 1.0) / (2.0 * L - 1.0)); }
  double gamma(int g) const { return two_pi * g / (2.0 * N - 1.0); }
  std::size_t index(int a, int b, int g) const {
    return (static_cast<std::size_t>(g) * L + b) * n_alpha() + a;
  }
  bool operator==(const SO3Grid&) const = default;
};

template <class T>
struct BasicSO3Signal {
  SO3Grid grid;
  std::vector<T, AlignedAllocator<T>> values;

  static BasicSO3Signal zeros(const SO3Grid& g) {
    g.validate();
    BasicSO3Signal s;
    s.grid = g;
    s.values.assign(g.size(), T{});
    return s;
  }
  T& at(int a, int b, int g) { return values[grid.index(a, b, g)]; }
  const T& at(int a, int b, int g) const { return values[grid.index(a, b, g)]; }
};

using SO3Signal = BasicSO3Signal<cplx>;
using RealSO3Signal = BasicSO3Signal<double>;

// Dense W^l_{mn} for l < L, |m|,|n| <= l, with
// f(rho) = sum (2l+1)/(8 pi^2) W^l_{mn} conj(D^l_{mn}(rho)).
struct WignerCoeffs {
  int L = 0;
  std::vector<cplx> values;

  static WignerCoeffs zeros(int L);
  static std::size_t index(int l, int m, int n) {
    const std::size_t ll = l;
    const std::size_t w = 2 * ll + 1;
    return ll * (2 * ll - 1) * (2 * ll + 1) / 3 + static_cast<std::size_t>(m + l) * w + (n + l);
  }
  cplx& operator()(int l, int m, int n) { return values[index(l, m, n)]; }
  cplx operator()(int l, int m, int n) const { return values[index(l, m, n)]; }
};

// Only W^l_{m,l} (plus) and W^l_{m,-l} (minus), flat index l^2 + l + m.
// At l = 0 both refer to the same coefficient; synthesis reads plus.
struct CurveletWignerCoeffs {
  int L = 0;
  std::vector<cplx> plus;
  std::vector<cplx> minus;

  static CurveletWignerCoeffs zeros(int L);
  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * l + l + m;
  }
};

// Coefficients of a real signal: plus only, since
// W^l_{m,-l} = (-1)^{m+l} conj(W^l_{-m,l}).
struct RealCurveletWignerCoeffs {
  int L = 0;
  std::vector<cplx> plus;

  static RealCurveletWignerCoeffs zeros(int L);
};

WignerCoeffs to_dense(const CurveletWignerCoeffs& c);
// Throws std::invalid_argument if an entry off n = +-l exceeds tol in magnitude.
CurveletWignerCoeffs to_curvelet(const WignerCoeffs& w, double tol);
CurveletWignerCoeffs to_complex(const RealCurveletWignerCoeffs& c);

// General transforms. Coefficients with |m| >= M or |n| >= N are ignored by
// synthesis and returned as zero by analysis. `table` must cover grid.L.
SO3Signal so3_inverse_general(const WignerCoeffs& w, const SO3Grid& grid, const HalfPiTable& table);
WignerCoeffs so3_forward_general(const SO3Signal& f, const HalfPiTable& table);

// Fast paths restricted to n = +-l on the cubic grid of band-limit c.L.
SO3Signal so3_inverse_curvelet(const CurveletWignerCoeffs& c, const HalfPiTable& table);
CurveletWignerCoeffs so3_forward_curvelet(const SO3Signal& f, const HalfPiTable& table);
// Consumes the signal to avoid a full-size work copy.
CurveletWignerCoeffs so3_forward_curvelet(SO3Signal&& f, const HalfPiTable& table);

RealSO3Signal so3_inverse_curvelet_real(const RealCurveletWignerCoeffs& c,
                                        const HalfPiTable& table);
RealCurveletWignerCoeffs so3_forward_curvelet_real(const RealSO3Signal& f,
                                                   const HalfPiTable& table);

}  // namespace scurve
