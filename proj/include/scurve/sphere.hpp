#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "scurve/types.hpp"
#include "scurve/wigner.hpp"

namespace scurve {

// Equiangular sampling with theta_t = pi (2t+1) / (2L-1), t < L, and
// phi_p = 2 pi p / (2L-1). The last theta node sits on the south pole.
struct SphereGrid {
  int L = 0;

  int n_theta() const { return L; }
  int n_phi() const { return 2 * L - 1; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta()) * n_phi(); }
  double theta(int t) const { return std::min(pi, pi * (2.0 * t + 1.0) / (2.0 * L - 1.0)); }
  double phi(int p) const { return two_pi * p / (2.0 * L - 1.0); }
  std::size_t index(int t, int p) const { return static_cast<std::size_t>(t) * n_phi() + p; }
};

template <class T>
struct BasicSphereSignal {
  int L = 0;
  int spin = 0;
  std::vector<T, AlignedAllocator<T>> values;  // theta-major

  static BasicSphereSignal zeros(int L, int spin = 0) {
    if (L < 1) throw std::invalid_argument("sphere signal needs L >= 1");
    BasicSphereSignal s;
    s.L = L;
    s.spin = spin;
    s.values.assign(s.grid().size(), T{});
    return s;
  }

  SphereGrid grid() const { return {L}; }
  T& at(int t, int p) { return values[grid().index(t, p)]; }
  const T& at(int t, int p) const { return values[grid().index(t, p)]; }
};

using SphereSignal = BasicSphereSignal<cplx>;
using RealSphereSignal = BasicSphereSignal<double>;

// f_lm for l < L, flat index l^2 + l + m. Entries with l < |spin| stay zero.
struct HarmonicCoeffs {
  int L = 0;
  int spin = 0;
  std::vector<cplx> values;

  static HarmonicCoeffs zeros(int L, int spin = 0);
  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * l + l + m;
  }
  cplx& operator()(int l, int m) { return values[index(l, m)]; }
  cplx operator()(int l, int m) const { return values[index(l, m)]; }
};

// Coefficients of a real spin-0 signal, m >= 0 only, flat index l(l+1)/2 + m.
// f_{l,-m} = (-1)^m conj(f_lm).
struct RealHarmonicCoeffs {
  int L = 0;
  std::vector<cplx> values;

  static RealHarmonicCoeffs zeros(int L);
  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
  }
  cplx& operator()(int l, int m) { return values[index(l, m)]; }
  cplx operator()(int l, int m) const { return values[index(l, m)]; }
};

HarmonicCoeffs to_complex(const RealHarmonicCoeffs& h);
// Drops m < 0; the caller is responsible for the input being real.
RealHarmonicCoeffs to_real(const HarmonicCoeffs& h);
SphereSignal to_complex(const RealSphereSignal& f);

// Exact for band-limited signals. `table` must cover at least L.
HarmonicCoeffs sht_forward(const SphereSignal& f, const HalfPiTable& table);
SphereSignal sht_inverse(const HarmonicCoeffs& h, const HalfPiTable& table);
RealHarmonicCoeffs sht_forward_real(const RealSphereSignal& f, const HalfPiTable& table);
RealSphereSignal sht_inverse_real(const RealHarmonicCoeffs& h, const HalfPiTable& table);

HarmonicCoeffs sht_forward(const SphereSignal& f);
SphereSignal sht_inverse(const HarmonicCoeffs& h);

}  // namespace scurve
