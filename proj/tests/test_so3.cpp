#include "doctest.h"
#include "oracles.hpp"
#include "scurve/so3.hpp"

using namespace scurve;

TEST_CASE("general inverse matches direct summation") {
  for (SO3Grid g : {SO3Grid{1, 1, 1}, SO3Grid{3, 3, 3}, SO3Grid{5, 5, 5}, SO3Grid{6, 3, 2},
                    SO3Grid{5, 1, 4}}) {
    const auto w = oracle::random_wigner(g.L, g.M, g.N, 31 * g.L + g.M + 7 * g.N);
    const HalfPiTable table(g.L);
    const auto fast = so3_inverse_general(w, g, table);
    double err = 0.0;
    for (int gi = 0; gi < g.n_gamma(); ++gi) {
      for (int b = 0; b < g.n_beta(); ++b) {
        for (int a = 0; a < g.n_alpha(); ++a) {
          const cplx slow = oracle::so3_synthesize_point(w, EulerAngles(g.alpha(a), g.beta(b), g.gamma(gi)));
          err = std::max(err, std::abs(slow - fast.at(a, b, gi)));
        }
      }
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("general forward inverts general inverse") {
  for (SO3Grid g : {SO3Grid{1, 1, 1}, SO3Grid{4, 4, 4}, SO3Grid{9, 9, 9}, SO3Grid{12, 5, 3}}) {
    const auto w = oracle::random_wigner(g.L, g.M, g.N, 5 + g.L);
    const HalfPiTable table(g.L);
    const auto back = so3_forward_general(so3_inverse_general(w, g, table), table);
    CHECK(oracle::max_abs_diff(back.values, w.values) < 1e-11);
  }
}

TEST_CASE("curvelet inverse equals the general path") {
  for (int L : {1, 2, 7, 16, 32}) {
    const auto c = oracle::random_curvelet_wigner(L, 3 * L);
    const HalfPiTable table(L);
    const auto fast = so3_inverse_curvelet(c, table);
    const auto slow = so3_inverse_general(to_dense(c), SO3Grid::cubic(L), table);
    CHECK(oracle::max_abs_diff_any(fast.values, slow.values) < 1e-10);
  }
}

TEST_CASE("curvelet forward projects onto n = +-l") {
  const int L = 10;
  const HalfPiTable table(L);
  const auto w = oracle::random_wigner(L, L, L, 77);
  const auto f = so3_inverse_general(w, SO3Grid::cubic(L), table);
  const auto c = so3_forward_curvelet(f, table);
  double err = 0.0;
  for (int l = 0; l < L; ++l) {
    for (int m = -l; m <= l; ++m) {
      err = std::max(err, std::abs(c.plus[CurveletWignerCoeffs::index(l, m)] - w(l, m, l)));
      err = std::max(err, std::abs(c.minus[CurveletWignerCoeffs::index(l, m)] - w(l, m, -l)));
    }
  }
  CHECK(err < 1e-11);
}

TEST_CASE("curvelet round trip") {
  for (int L : {1, 3, 20, 64}) {
    const auto c = oracle::random_curvelet_wigner(L, 1000 + L);
    const HalfPiTable table(L);
    const auto back = so3_forward_curvelet(so3_inverse_curvelet(c, table), table);
    CHECK(oracle::max_abs_diff(back.plus, c.plus) < 1e-10);
    CHECK(oracle::max_abs_diff(back.minus, c.minus) < 1e-10);
  }
}

TEST_CASE("real curvelet path agrees with the complex one") {
  for (int L : {1, 2, 9, 24}) {
    const auto cc = oracle::random_curvelet_wigner(L, 50 + L);
    RealCurveletWignerCoeffs rc = RealCurveletWignerCoeffs::zeros(L);
    rc.plus = cc.plus;
    rc.plus[0] = rc.plus[0].real();
    // Make the coefficients those of a real signal.
    const auto full = to_complex(rc);
    const HalfPiTable table(L);
    const auto fc = so3_inverse_curvelet(full, table);
    const auto fr = so3_inverse_curvelet_real(rc, table);
    double err = 0.0, imag = 0.0;
    for (std::size_t i = 0; i < fr.values.size(); ++i) {
      err = std::max(err, std::abs(fr.values[i] - fc.values[i].real()));
      imag = std::max(imag, std::abs(fc.values[i].imag()));
    }
    CHECK(err < 1e-10);
    CHECK(imag < 1e-10);
    const auto back = so3_forward_curvelet_real(fr, table);
    CHECK(oracle::max_abs_diff(back.plus, rc.plus) < 1e-10);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS((SO3Grid{4, 5, 4}.validate()), std::invalid_argument);
  const HalfPiTable table(4);
  auto f = SO3Signal::zeros(SO3Grid{4, 2, 2});
  CHECK_THROWS_AS(so3_forward_curvelet(f, table), std::invalid_argument);
  auto w = oracle::random_wigner(4, 4, 4, 1);
  CHECK_THROWS_AS(to_curvelet(w, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(so3_inverse_curvelet(oracle::random_curvelet_wigner(6, 1), table), std::invalid_argument);
}
