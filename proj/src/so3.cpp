#include "scurve/so3.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beta_batch.hpp"
#include "fft.hpp"

namespace scurve {

namespace {

void check_table(const HalfPiTable& table, int L) {
  if (table.band_limit() < L) {
    throw std::invalid_argument("half-pi table covers L=" + std::to_string(table.band_limit()) +
                                " but L=" + std::to_string(L) + " is required");
  }
}

double so3_norm(int l) { return (2.0 * l + 1.0) / (8.0 * pi * pi); }

// (2pi)^2 i^{m-n} sum_{m'} D_{m'm} D_{m'n} Y(m'); Yc points at m' = 0.
cplx contract_forward(const HalfPiTable& table, int l, int m, int n, const cplx* Yc) {
  const auto r0 = table.row(l, 0);
  cplx acc = r0[m + l] * r0[n + l] * Yc[0];
  const double sgn = parity(m + n);
  for (int mp = 1; mp <= l; ++mp) {
    const auto r = table.row(l, mp);
    acc += r[m + l] * r[n + l] * (Yc[mp] + sgn * Yc[-mp]);
  }
  return ipow(m - n) * (4.0 * pi * pi) * acc;
}

// col[m'] += c D_{m'm} D_{m'n} for 0 <= m' <= l.
void accumulate_inverse(const HalfPiTable& table, int l, int m, int n, cplx c, cplx* col) {
  for (int mp = 0; mp <= l; ++mp) {
    const auto r = table.row(l, mp);
    col[mp] += c * (r[m + l] * r[n + l]);
  }
}

// In-place DFT along gamma of `ng` planes, done in column blocks so that each
// pass reads contiguous runs of every plane.
void gamma_transform(cplx* data, std::size_t plane, int ng, fft::Direction dir) {
  constexpr std::size_t block = 32;
  fft::RowDft dft(ng, dir);
  ComplexBuffer G(block * ng);
  for (std::size_t j0 = 0; j0 < plane; j0 += block) {
    const std::size_t nb = std::min(block, plane - j0);
    for (int g = 0; g < ng; ++g) {
      const cplx* src = data + g * plane + j0;
      for (std::size_t c = 0; c < nb; ++c) G[c * ng + g] = src[c];
    }
    dft.execute(G.data(), static_cast<int>(nb));
    for (int g = 0; g < ng; ++g) {
      cplx* dst = data + g * plane + j0;
      for (std::size_t c = 0; c < nb; ++c) dst[c] = G[c * ng + g];
    }
  }
}

// Real-to-half-complex forward DFT along gamma: half[k][j] for 0 <= k < N.
// Two real columns share one complex transform.
void gamma_forward_real(const double* data, std::size_t plane, int ng, cplx* half) {
  constexpr std::size_t block = 32;
  const int nh = (ng + 1) / 2;
  fft::RowDft dft(ng, fft::Direction::forward);
  ComplexBuffer G(block / 2 * ng);
  for (std::size_t j0 = 0; j0 < plane; j0 += block) {
    const std::size_t nb = std::min(block, plane - j0);
    const std::size_t np = (nb + 1) / 2;
    for (int g = 0; g < ng; ++g) {
      const double* src = data + g * plane + j0;
      for (std::size_t c = 0; c < np; ++c) {
        const double im = 2 * c + 1 < nb ? src[2 * c + 1] : 0.0;
        G[c * ng + g] = cplx(src[2 * c], im);
      }
    }
    dft.execute(G.data(), static_cast<int>(np));
    for (std::size_t c = 0; c < np; ++c) {
      const cplx* z = G.data() + c * ng;
      for (int k = 0; k < nh; ++k) {
        const cplx zk = z[k];
        const cplx zc = std::conj(z[k == 0 ? 0 : ng - k]);
        half[k * plane + j0 + 2 * c] = 0.5 * (zk + zc);
        if (2 * c + 1 < nb) half[k * plane + j0 + 2 * c + 1] = cplx(0.0, -0.5) * (zk - zc);
      }
    }
  }
}

// Inverse of the above: sum_k c_k e^{+ik gamma} with c_{-k} = conj(c_k).
void gamma_inverse_real(const cplx* half, std::size_t plane, int ng, double* data) {
  constexpr std::size_t block = 32;
  const int nh = (ng + 1) / 2;
  fft::RowDft dft(ng, fft::Direction::backward);
  ComplexBuffer G(block / 2 * ng);
  for (std::size_t j0 = 0; j0 < plane; j0 += block) {
    const std::size_t nb = std::min(block, plane - j0);
    const std::size_t np = (nb + 1) / 2;
    for (std::size_t c = 0; c < np; ++c) {
      cplx* z = G.data() + c * ng;
      const bool pair = 2 * c + 1 < nb;
      for (int k = 0; k < nh; ++k) {
        const cplx x = half[k * plane + j0 + 2 * c];
        const cplx y = pair ? half[k * plane + j0 + 2 * c + 1] : cplx(0.0);
        z[k] = x + cplx(0.0, 1.0) * y;
        if (k > 0) z[ng - k] = std::conj(x) + cplx(0.0, 1.0) * std::conj(y);
      }
    }
    dft.execute(G.data(), static_cast<int>(np));
    for (int g = 0; g < ng; ++g) {
      double* dst = data + g * plane + j0;
      for (std::size_t c = 0; c < np; ++c) {
        const cplx z = G[c * ng + g];
        dst[2 * c] = z.real();
        if (2 * c + 1 < nb) dst[2 * c + 1] = z.imag();
      }
    }
  }
}

// Analysis of one gamma-frequency plane at a time. `plane_of(n)` gives the
// plane holding sum f e^{-i n gamma}; `contract(n, m, Yc)` consumes the
// weighted beta coefficients with Yc at m' = 0.
template <class PlaneOf, class Contract>
void forward_planes(const SO3Grid& g, int n_lo, int n_hi, bool curvelet_only, PlaneOf plane_of,
                    Contract contract) {
  const int L = g.L;
  const int na = g.n_alpha();
  const int ne = 2 * L - 1;
  fft::RowDft alpha(na, fft::Direction::forward);
  BetaBatch beta(L);
  ComplexBuffer P(g.plane_size());
  ComplexBuffer T(static_cast<std::size_t>(na) * L);
  ComplexBuffer Y(static_cast<std::size_t>(na) * ne);
  std::vector<double> signs(na);
  for (int n = n_lo; n <= n_hi; ++n) {
    const cplx* src = plane_of(n);
    std::copy(src, src + g.plane_size(), P.begin());
    alpha.execute(P.data(), L);
    const int m_max = curvelet_only ? std::abs(n) : g.M - 1;
    int rows = 0;
    for (int m = -m_max; m <= m_max; ++m, ++rows) {
      const cplx* col = P.data() + bin(m, na);
      cplx* t = T.data() + static_cast<std::size_t>(rows) * L;
      for (int b = 0; b < L; ++b) t[b] = col[static_cast<std::size_t>(b) * na];
      signs[rows] = parity(m + n);
    }
    beta.apply(T.data(), signs.data(), rows, Y.data());
    for (int r = 0; r < rows; ++r) {
      contract(n, r - m_max, Y.data() + static_cast<std::size_t>(r) * ne + (L - 1));
    }
  }
}

// Synthesis of one gamma-frequency plane at a time. `fill(n, m, col)` writes
// X_{m,n,m'} for 0 <= m' < L into col (already zeroed); `dst_of(n)` is where
// the L x (2M-1) plane goes.
template <class Fill, class DstOf>
void inverse_planes(const SO3Grid& g, int n_lo, int n_hi, bool curvelet_only, Fill fill,
                    DstOf dst_of) {
  const int L = g.L;
  const int na = g.n_alpha();
  const int nb = 2 * L - 1;
  fft::RowDft beta(nb, fft::Direction::backward);
  fft::RowDft alpha(na, fft::Direction::backward);
  ComplexBuffer B(static_cast<std::size_t>(na) * nb);
  ComplexBuffer Q(g.plane_size());
  std::vector<cplx> col(L), shift(L);
  for (int mp = 0; mp < L; ++mp) shift[mp] = std::polar(1.0, pi * mp / nb);
  for (int n = n_lo; n <= n_hi; ++n) {
    const int m_max = curvelet_only ? std::abs(n) : g.M - 1;
    int rows = 0;
    for (int m = -m_max; m <= m_max; ++m, ++rows) {
      std::fill(col.begin(), col.end(), cplx(0.0));
      fill(n, m, col.data());
      cplx* row = B.data() + static_cast<std::size_t>(rows) * nb;
      std::fill(row, row + nb, cplx(0.0));
      const double mirror = parity(m + n);
      row[0] = col[0];
      for (int mp = 1; mp < L; ++mp) {
        row[mp] = col[mp] * shift[mp];
        row[nb - mp] = mirror * col[mp] * std::conj(shift[mp]);
      }
    }
    beta.execute(B.data(), rows);
    std::fill(Q.begin(), Q.end(), cplx(0.0));
    for (int r = 0; r < rows; ++r) {
      const int mb = bin(r - m_max, na);
      const cplx* row = B.data() + static_cast<std::size_t>(r) * nb;
      for (int b = 0; b < L; ++b) Q[static_cast<std::size_t>(b) * na + mb] = row[b];
    }
    alpha.execute(Q.data(), L);
    std::copy(Q.begin(), Q.end(), dst_of(n));
  }
}

}  // namespace

void SO3Grid::validate() const {
  if (L < 1 || M < 1 || N < 1 || M > L || N > L) {
    throw std::invalid_argument("SO(3) grid needs 1 <= M, N <= L, got L=" + std::to_string(L) +
                                " M=" + std::to_string(M) + " N=" + std::to_string(N));
  }
}

WignerCoeffs WignerCoeffs::zeros(int L) {
  if (L < 1) throw std::invalid_argument("band-limit must be >= 1");
  WignerCoeffs w;
  w.L = L;
  w.values.assign(index(L, -L, -L), 0.0);
  return w;
}

CurveletWignerCoeffs CurveletWignerCoeffs::zeros(int L) {
  if (L < 1) throw std::invalid_argument("band-limit must be >= 1");
  CurveletWignerCoeffs c;
  c.L = L;
  c.plus.assign(static_cast<std::size_t>(L) * L, 0.0);
  c.minus.assign(static_cast<std::size_t>(L) * L, 0.0);
  return c;
}

RealCurveletWignerCoeffs RealCurveletWignerCoeffs::zeros(int L) {
  if (L < 1) throw std::invalid_argument("band-limit must be >= 1");
  RealCurveletWignerCoeffs c;
  c.L = L;
  c.plus.assign(static_cast<std::size_t>(L) * L, 0.0);
  return c;
}

WignerCoeffs to_dense(const CurveletWignerCoeffs& c) {
  WignerCoeffs w = WignerCoeffs::zeros(c.L);
  for (int l = 0; l < c.L; ++l) {
    for (int m = -l; m <= l; ++m) {
      w(l, m, -l) = c.minus[CurveletWignerCoeffs::index(l, m)];
      w(l, m, l) = c.plus[CurveletWignerCoeffs::index(l, m)];
    }
  }
  return w;
}

CurveletWignerCoeffs to_curvelet(const WignerCoeffs& w, double tol) {
  CurveletWignerCoeffs c = CurveletWignerCoeffs::zeros(w.L);
  for (int l = 0; l < w.L; ++l) {
    for (int m = -l; m <= l; ++m) {
      for (int n = -l + 1; n < l; ++n) {
        if (std::abs(w(l, m, n)) > tol) {
          throw std::invalid_argument("coefficient off n = +-l exceeds tolerance at l=" +
                                      std::to_string(l) + " m=" + std::to_string(m) +
                                      " n=" + std::to_string(n));
        }
      }
      c.plus[CurveletWignerCoeffs::index(l, m)] = w(l, m, l);
      c.minus[CurveletWignerCoeffs::index(l, m)] = w(l, m, -l);
    }
  }
  return c;
}

CurveletWignerCoeffs to_complex(const RealCurveletWignerCoeffs& c) {
  CurveletWignerCoeffs out = CurveletWignerCoeffs::zeros(c.L);
  out.plus = c.plus;
  for (int l = 0; l < c.L; ++l) {
    for (int m = -l; m <= l; ++m) {
      out.minus[CurveletWignerCoeffs::index(l, m)] =
          parity(m + l) * std::conj(c.plus[CurveletWignerCoeffs::index(l, -m)]);
    }
  }
  out.minus[0] = out.plus[0];
  return out;
}

SO3Signal so3_inverse_general(const WignerCoeffs& w, const SO3Grid& grid, const HalfPiTable& table) {
  grid.validate();
  if (grid.L != w.L) throw std::invalid_argument("grid and coefficients disagree on L");
  if (w.values.size() != WignerCoeffs::index(w.L, -w.L, -w.L)) {
    throw std::invalid_argument("Wigner coefficients have wrong size");
  }
  check_table(table, grid.L);
  const int L = grid.L;
  const int ng = grid.n_gamma();
  SO3Signal out = SO3Signal::zeros(grid);
  inverse_planes(
      grid, -(grid.N - 1), grid.N - 1, false,
      [&](int n, int m, cplx* col) {
        for (int l = std::max(std::abs(m), std::abs(n)); l < L; ++l) {
          const cplx c = so3_norm(l) * ipow(n - m) * w(l, m, n);
          if (c != cplx(0.0)) accumulate_inverse(table, l, m, n, c, col);
        }
      },
      [&](int n) { return out.values.data() + bin(n, ng) * grid.plane_size(); });
  gamma_transform(out.values.data(), grid.plane_size(), ng, fft::Direction::backward);
  return out;
}

WignerCoeffs so3_forward_general(const SO3Signal& f, const HalfPiTable& table) {
  const SO3Grid& g = f.grid;
  g.validate();
  if (f.values.size() != g.size()) throw std::invalid_argument("SO(3) signal has wrong size");
  check_table(table, g.L);
  const int L = g.L;
  const int ng = g.n_gamma();
  ComplexBuffer work(f.values.begin(), f.values.end());
  gamma_transform(work.data(), g.plane_size(), ng, fft::Direction::forward);
  const double scale = 1.0 / (static_cast<double>(g.n_alpha()) * ng);
  WignerCoeffs out = WignerCoeffs::zeros(L);
  forward_planes(
      g, -(g.N - 1), g.N - 1, false,
      [&](int n) { return work.data() + bin(n, ng) * g.plane_size(); },
      [&](int n, int m, const cplx* Yc) {
        for (int l = std::max(std::abs(m), std::abs(n)); l < L; ++l) {
          out(l, m, n) = scale * contract_forward(table, l, m, n, Yc);
        }
      });
  return out;
}

SO3Signal so3_inverse_curvelet(const CurveletWignerCoeffs& c, const HalfPiTable& table) {
  const int L = c.L;
  const std::size_t count = static_cast<std::size_t>(L) * L;
  if (c.plus.size() != count || c.minus.size() != count) {
    throw std::invalid_argument("curvelet Wigner coefficients have wrong size");
  }
  check_table(table, L);
  const SO3Grid grid = SO3Grid::cubic(L);
  const int ng = grid.n_gamma();
  SO3Signal out = SO3Signal::zeros(grid);
  inverse_planes(
      grid, -(L - 1), L - 1, true,
      [&](int n, int m, cplx* col) {
        const int l = std::abs(n);
        const cplx w = (n >= 0 ? c.plus : c.minus)[CurveletWignerCoeffs::index(l, m)];
        accumulate_inverse(table, l, m, n, so3_norm(l) * ipow(n - m) * w, col);
      },
      [&](int n) { return out.values.data() + bin(n, ng) * grid.plane_size(); });
  gamma_transform(out.values.data(), grid.plane_size(), ng, fft::Direction::backward);
  return out;
}

CurveletWignerCoeffs so3_forward_curvelet(const SO3Signal& f, const HalfPiTable& table) {
  SO3Signal copy = f;
  return so3_forward_curvelet(std::move(copy), table);
}

CurveletWignerCoeffs so3_forward_curvelet(SO3Signal&& f, const HalfPiTable& table) {
  const SO3Grid g = f.grid;
  g.validate();
  if (!(g == SO3Grid::cubic(g.L))) throw std::invalid_argument("curvelet path needs M = N = L");
  if (f.values.size() != g.size()) throw std::invalid_argument("SO(3) signal has wrong size");
  check_table(table, g.L);
  const int L = g.L;
  const int ng = g.n_gamma();
  ComplexBuffer work = std::move(f.values);
  f.values.clear();
  gamma_transform(work.data(), g.plane_size(), ng, fft::Direction::forward);
  const double scale = 1.0 / (static_cast<double>(g.n_alpha()) * ng);
  CurveletWignerCoeffs out = CurveletWignerCoeffs::zeros(L);
  forward_planes(
      g, -(L - 1), L - 1, true,
      [&](int n) { return work.data() + bin(n, ng) * g.plane_size(); },
      [&](int n, int m, const cplx* Yc) {
        const int l = std::abs(n);
        (n >= 0 ? out.plus : out.minus)[CurveletWignerCoeffs::index(l, m)] =
            scale * contract_forward(table, l, m, n, Yc);
      });
  out.minus[0] = out.plus[0];
  return out;
}

RealSO3Signal so3_inverse_curvelet_real(const RealCurveletWignerCoeffs& c,
                                        const HalfPiTable& table) {
  const int L = c.L;
  if (c.plus.size() != static_cast<std::size_t>(L) * L) {
    throw std::invalid_argument("curvelet Wigner coefficients have wrong size");
  }
  check_table(table, L);
  const SO3Grid grid = SO3Grid::cubic(L);
  const std::size_t plane = grid.plane_size();
  ComplexBuffer half(plane * L);
  inverse_planes(
      grid, 0, L - 1, true,
      [&](int n, int m, cplx* col) {
        const cplx w = c.plus[CurveletWignerCoeffs::index(n, m)];
        accumulate_inverse(table, n, m, n, so3_norm(n) * ipow(n - m) * w, col);
      },
      [&](int n) { return half.data() + n * plane; });
  RealSO3Signal out = RealSO3Signal::zeros(grid);
  gamma_inverse_real(half.data(), plane, grid.n_gamma(), out.values.data());
  return out;
}

RealCurveletWignerCoeffs so3_forward_curvelet_real(const RealSO3Signal& f,
                                                   const HalfPiTable& table) {
  const SO3Grid g = f.grid;
  g.validate();
  if (!(g == SO3Grid::cubic(g.L))) throw std::invalid_argument("curvelet path needs M = N = L");
  if (f.values.size() != g.size()) throw std::invalid_argument("SO(3) signal has wrong size");
  check_table(table, g.L);
  const int L = g.L;
  const std::size_t plane = g.plane_size();
  ComplexBuffer half(plane * L);
  gamma_forward_real(f.values.data(), plane, g.n_gamma(), half.data());
  const double scale = 1.0 / (static_cast<double>(g.n_alpha()) * g.n_gamma());
  RealCurveletWignerCoeffs out = RealCurveletWignerCoeffs::zeros(L);
  forward_planes(
      g, 0, L - 1, true, [&](int n) { return half.data() + n * plane; },
      [&](int n, int m, const cplx* Yc) {
        out.plus[CurveletWignerCoeffs::index(n, m)] = scale * contract_forward(table, n, m, n, Yc);
      });
  return out;
}

}  // namespace scurve
