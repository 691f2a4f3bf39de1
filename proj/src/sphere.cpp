#include "scurve/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "scurve/quadrature.hpp"

namespace scurve {

namespace {

void check_table(const HalfPiTable& table, int L) {
  if (table.band_limit() < L) {
    throw std::invalid_argument("half-pi table covers L=" + std::to_string(table.band_limit()) +
                                " but L=" + std::to_string(L) + " is required");
  }
}

void check_spin(int L, int spin) {
  if (L < 1) throw std::invalid_argument("band-limit must be >= 1");
  if (std::abs(spin) >= L && spin != 0) {
    throw std::invalid_argument("|spin| must be < L");
  }
}

double sphere_norm(int l) { return std::sqrt((2.0 * l + 1.0) / (4.0 * pi)); }

// f_lm for one m from the weighted beta coefficients Y(m').
// f_lm = (-1)^s c_l 2pi i^{m+s} sum_{m'} D_{m'm} D_{m',-s} Y(m')
template <class Store>
void contract_forward(const HalfPiTable& table, int L, int m, int s, const cplx* Y, Store store) {
  const int l_min = std::max(std::abs(m), std::abs(s));
  const double sgn = parity(m + s);
  const cplx phase = ipow(m + s) * (parity(s) * two_pi);
  for (int l = l_min; l < L; ++l) {
    const auto r0 = table.row(l, 0);
    cplx acc = r0[m + l] * r0[-s + l] * Y[L - 1];
    for (int mp = 1; mp <= l; ++mp) {
      const auto r = table.row(l, mp);
      acc += r[m + l] * r[-s + l] * (Y[L - 1 + mp] + sgn * Y[L - 1 - mp]);
    }
    store(l, phase * sphere_norm(l) * acc);
  }
}

// Column F_{m m'}, m' = -(L-1)..L-1, for one m, written with stride into a
// bin-indexed 2D buffer. Includes the half-sample phase.
template <class Load>
void contract_inverse(const HalfPiTable& table, int L, int m, int s, Load load,
                      std::vector<cplx>& col) {
  std::fill(col.begin(), col.end(), cplx(0.0));
  const int l_min = std::max(std::abs(m), std::abs(s));
  const cplx phase = ipow(-(m + s)) * parity(s);
  for (int l = l_min; l < L; ++l) {
    const cplx c = phase * sphere_norm(l) * load(l);
    if (c == cplx(0.0)) continue;
    for (int mp = 0; mp <= l; ++mp) {
      const auto r = table.row(l, mp);
      col[mp] += c * (r[m + l] * r[-s + l]);
    }
  }
}

}  // namespace

HarmonicCoeffs HarmonicCoeffs::zeros(int L, int spin) {
  check_spin(L, spin);
  HarmonicCoeffs h;
  h.L = L;
  h.spin = spin;
  h.values.assign(static_cast<std::size_t>(L) * L, 0.0);
  return h;
}

RealHarmonicCoeffs RealHarmonicCoeffs::zeros(int L) {
  if (L < 1) throw std::invalid_argument("band-limit must be >= 1");
  RealHarmonicCoeffs h;
  h.L = L;
  h.values.assign(static_cast<std::size_t>(L) * (L + 1) / 2, 0.0);
  return h;
}

HarmonicCoeffs to_complex(const RealHarmonicCoeffs& h) {
  HarmonicCoeffs out = HarmonicCoeffs::zeros(h.L, 0);
  for (int l = 0; l < h.L; ++l) {
    for (int m = 0; m <= l; ++m) {
      out(l, m) = h(l, m);
      if (m > 0) out(l, -m) = parity(m) * std::conj(h(l, m));
    }
  }
  return out;
}

RealHarmonicCoeffs to_real(const HarmonicCoeffs& h) {
  if (h.spin != 0) throw std::invalid_argument("real harmonic storage requires spin 0");
  RealHarmonicCoeffs out = RealHarmonicCoeffs::zeros(h.L);
  for (int l = 0; l < h.L; ++l) {
    for (int m = 0; m <= l; ++m) out(l, m) = h(l, m);
  }
  return out;
}

SphereSignal to_complex(const RealSphereSignal& f) {
  SphereSignal out = SphereSignal::zeros(f.L, f.spin);
  std::copy(f.values.begin(), f.values.end(), out.values.begin());
  return out;
}

HarmonicCoeffs sht_forward(const SphereSignal& f, const HalfPiTable& table) {
  const int L = f.L;
  const int s = f.spin;
  check_spin(L, s);
  check_table(table, L);
  const SphereGrid grid = f.grid();
  if (f.values.size() != grid.size()) throw std::invalid_argument("sphere signal has wrong size");
  const int np = grid.n_phi();

  ComplexBuffer work(f.values.begin(), f.values.end());
  {
    fft::Plan p = fft::plan_c2c({{np, 1, 1}}, {{L, np, np}}, work.data(), work.data(),
                                fft::Direction::forward);
    p.execute();
  }
  const double scale = 1.0 / np;

  HarmonicCoeffs out = HarmonicCoeffs::zeros(L, s);
  BetaQuadrature quad(L);
  std::vector<cplx> Y(2 * L - 1);
  for (int m = -(L - 1); m <= L - 1; ++m) {
    if (std::max(std::abs(m), std::abs(s)) >= L) continue;
    quad.apply(work.data() + bin(m, np), np, parity(m + s), Y.data());
    contract_forward(table, L, m, s, Y.data(),
                     [&](int l, cplx v) { out(l, m) = v * scale; });
  }
  return out;
}

SphereSignal sht_inverse(const HarmonicCoeffs& h, const HalfPiTable& table) {
  const int L = h.L;
  const int s = h.spin;
  check_spin(L, s);
  check_table(table, L);
  if (h.values.size() != static_cast<std::size_t>(L) * L) {
    throw std::invalid_argument("harmonic coefficients have wrong size");
  }
  const int n = 2 * L - 1;

  // A[bin(m')][bin(m)], then a 2D inverse DFT.
  ComplexBuffer A(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<cplx> col(L);
  for (int m = -(L - 1); m <= L - 1; ++m) {
    contract_inverse(table, L, m, s, [&](int l) { return h(l, m); }, col);
    const double sgn = parity(m + s);
    const int mb = bin(m, n);
    for (int mp = 0; mp < L; ++mp) {
      const cplx shift = std::polar(1.0, pi * mp / n);
      A[static_cast<std::size_t>(bin(mp, n)) * n + mb] = col[mp] * shift;
      if (mp > 0) A[static_cast<std::size_t>(bin(-mp, n)) * n + mb] = sgn * col[mp] * std::conj(shift);
    }
  }
  {
    fft::Plan p = fft::plan_c2c({{n, n, n}, {n, 1, 1}}, {}, A.data(), A.data(),
                                fft::Direction::backward);
    p.execute();
  }
  SphereSignal out = SphereSignal::zeros(L, s);
  std::copy(A.begin(), A.begin() + static_cast<std::ptrdiff_t>(out.values.size()), out.values.begin());
  return out;
}

RealHarmonicCoeffs sht_forward_real(const RealSphereSignal& f, const HalfPiTable& table) {
  const int L = f.L;
  if (f.spin != 0) throw std::invalid_argument("real transform requires spin 0");
  check_spin(L, 0);
  check_table(table, L);
  const SphereGrid grid = f.grid();
  if (f.values.size() != grid.size()) throw std::invalid_argument("sphere signal has wrong size");
  const int np = grid.n_phi();

  RealBuffer in(f.values.begin(), f.values.end());
  ComplexBuffer work(static_cast<std::size_t>(L) * L);
  {
    fft::Plan p = fft::plan_r2c({{np, 1, 1}}, {{L, np, L}}, in.data(), work.data());
    p.execute();
  }
  const double scale = 1.0 / np;

  RealHarmonicCoeffs out = RealHarmonicCoeffs::zeros(L);
  BetaQuadrature quad(L);
  std::vector<cplx> Y(2 * L - 1);
  for (int m = 0; m < L; ++m) {
    quad.apply(work.data() + m, L, parity(m), Y.data());
    contract_forward(table, L, m, 0, Y.data(), [&](int l, cplx v) { out(l, m) = v * scale; });
  }
  return out;
}

RealSphereSignal sht_inverse_real(const RealHarmonicCoeffs& h, const HalfPiTable& table) {
  const int L = h.L;
  check_spin(L, 0);
  check_table(table, L);
  if (h.values.size() != static_cast<std::size_t>(L) * (L + 1) / 2) {
    throw std::invalid_argument("harmonic coefficients have wrong size");
  }
  const int n = 2 * L - 1;

  // A[bin(m')][m] for m >= 0, inverse DFT over m', then c2r over m.
  ComplexBuffer A(static_cast<std::size_t>(n) * L, 0.0);
  std::vector<cplx> col(L);
  for (int m = 0; m < L; ++m) {
    contract_inverse(table, L, m, 0, [&](int l) { return h(l, m); }, col);
    const double sgn = parity(m);
    for (int mp = 0; mp < L; ++mp) {
      const cplx shift = std::polar(1.0, pi * mp / n);
      A[static_cast<std::size_t>(bin(mp, n)) * L + m] = col[mp] * shift;
      if (mp > 0) A[static_cast<std::size_t>(bin(-mp, n)) * L + m] = sgn * col[mp] * std::conj(shift);
    }
  }
  {
    fft::Plan p = fft::plan_c2c({{n, L, L}}, {{L, 1, 1}}, A.data(), A.data(),
                                fft::Direction::backward);
    p.execute();
  }
  RealSphereSignal out = RealSphereSignal::zeros(L, 0);
  {
    // Rows t < L only; c2r overwrites its input, which is scratch here.
    fft::Plan p = fft::plan_c2r({{n, 1, 1}}, {{L, L, n}}, A.data(), out.values.data());
    p.execute();
  }
  return out;
}

HarmonicCoeffs sht_forward(const SphereSignal& f) { return sht_forward(f, HalfPiTable(f.L)); }

SphereSignal sht_inverse(const HarmonicCoeffs& h) { return sht_inverse(h, HalfPiTable(h.L)); }

}  // namespace scurve
