#include <cmath>

#include "doctest.h"
#include "scurve/tiling.hpp"

using namespace scurve;

TEST_CASE("schwartz function") {
  CHECK(schwartz_s(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(schwartz_s(1.0) == 0.0);
  CHECK(schwartz_s(-1.0) == 0.0);
  CHECK(schwartz_s(-2.0) == 0.0);
  CHECK(schwartz_s(0.5) == doctest::Approx(std::exp(-1.0 / 0.75)));
}

TEST_CASE("smooth step k") {
  CHECK(smooth_step_k(2.0, 0.25) == 1.0);
  CHECK(smooth_step_k(2.0, 0.5) == 1.0);
  CHECK(smooth_step_k(2.0, 1.0) == 0.0);
  CHECK(smooth_step_k(2.0, 1.5) == 0.0);
  double prev = 1.0;
  for (int i = 0; i < 64; ++i) {
    const double v = smooth_step_k(2.0, 0.5 + 0.5 * i / 63.0);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    prev = v;
  }
  const double mid = smooth_step_k(3.0, 0.6);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK_THROWS_AS(smooth_step_k(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(smooth_step_k(2.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("kernel support and peak") {
  const Tiling t = build_tiling({64, 0, 2.0, 0});
  const auto& k3 = t.kernel(3);
  CHECK(k3[8] == doctest::Approx(1.0).epsilon(1e-12));
  for (int l = 0; l < 64; ++l) {
    if (l <= 4 || l >= 16) CHECK(k3[l] == 0.0);
    if (l > 4 && l < 16) CHECK(k3[l] > 0.0);
  }
  CHECK(t.support(3) == std::pair<int, int>{4, 16});
  CHECK(t.band_limit(3) == 16);
  CHECK(t.band_limit(t.J()) == 64);
  CHECK(t.J() == 6);
  CHECK_THROWS_AS(t.kernel(7), std::out_of_range);
}

TEST_CASE("support bounds hold for non-integer lambda") {
  for (double lam : {1.5, 3.0}) {
    const Tiling t = build_tiling({100, 0, lam, 1});
    for (int j = t.J0(); j <= t.J(); ++j) {
      const auto [lo, hi] = t.support(j);
      for (int l = 0; l < 100; ++l) {
        if (l < lo || l > hi) CHECK(t.kernel(j)[l] == 0.0);
      }
      for (int l = t.band_limit(j); l < 100; ++l) CHECK(t.kernel(j)[l] == 0.0);
    }
    for (int l = t.scaling_band_limit(); l < 100; ++l) CHECK(t.scaling()[l] == 0.0);
  }
}

TEST_CASE("directionality and rotation angles") {
  const Tiling t = build_tiling({16, 0, 2.0, 1});
  CHECK(t.directionality(2, 2) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(t.directionality(2, -2) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(t.directionality(3, -3) == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(t.directionality(3, 1) == 0.0);
  CHECK(t.directionality(0, 0) == 0.0);
  for (int l = 1; l < 16; ++l) {
    const double a = t.directionality(l, l), b = t.directionality(l, -l);
    CHECK(a * a + b * b == doctest::Approx(1.0).epsilon(1e-15));
  }
  for (int j = t.J0(); j <= t.J(); ++j) CHECK(t.theta(j) == doctest::Approx(pi / 2));
  const Tiling ts = build_tiling({16, 2, 2.0, 1});
  CHECK(ts.theta(1) == doctest::Approx(pi));
  CHECK(ts.theta(2) == doctest::Approx(std::acos(-0.5)));
}

TEST_CASE("curvelet harmonics") {
  const Tiling t = build_tiling({32, 0, 2.0, 2});
  const auto h = t.curvelet_harmonics(3);
  CHECK(std::abs(h.plus[8]) == doctest::Approx(std::sqrt(17.0 / (8 * pi * pi)) / std::sqrt(2.0)));
  CHECK(h.minus[8] == doctest::Approx(h.plus[8]));
  CHECK(h.minus[9] == doctest::Approx(-h.plus[9]));
  CHECK(h.plus[3] == 0.0);
  CHECK(h.plus[20] == 0.0);
  CHECK_THROWS_AS(t.curvelet_harmonics(1), std::out_of_range);
}

TEST_CASE("admissibility") {
  const Tiling t = build_tiling({256, 0, 2.0, 2});
  CHECK(admissibility_residual(t) <= 1e-8);
  CHECK(admissibility_residual(t.without_kernel(5)) >= 0.5);
  CHECK(t.scaling()[0] == doctest::Approx(std::sqrt(1 / (4 * pi))));
  CHECK_THROWS_AS(build_tiling({64, 0, 2.0, 0, 3}), ConstructionError);
  CHECK_THROWS_AS(build_tiling({64, 0, 1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(build_tiling({64, 0, 2.0, 3, 2}), std::invalid_argument);
}

TEST_CASE("fwhm report") {
  const auto r3 = fwhm_report(3, 0);
  CHECK(r3.fwhm_phi == doctest::Approx(2 * pi / 9));
  CHECK(fwhm_report(1, 0).fwhm_theta == doctest::Approx(2 * pi / 3).epsilon(1e-12));
  for (int l : {1, 2, 7, 64, 300, 1024}) {
    const double closed = pi - 2 * std::asin(std::pow(2.0, -1.0 / l));
    CHECK(std::abs(fwhm_report(l, 0).fwhm_theta - closed) < 1e-9);
    CHECK(fwhm_report(l, 0).theta_max == doctest::Approx(pi / 2));
  }
  // FWHM_theta^2 / FWHM_phi tends to 12 ln 2 / pi, so the residual settles
  // at a constant rather than vanishing.
  const double limit = 12 * std::log(2.0) / pi - 1;
  CHECK(std::abs(fwhm_report(1024, 0).parabolic_residual - limit) < 1e-3);
  CHECK(std::abs(fwhm_report(256, 0).parabolic_residual - limit) <
        std::abs(fwhm_report(16, 0).parabolic_residual - limit));
  // s = l doubles FWHM_theta^2 asymptotically.
  const double ratio = std::pow(fwhm_report(1024, 1024).fwhm_theta / fwhm_report(1024, 0).fwhm_theta, 2);
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(fwhm_report(8, 3).theta_max == doctest::Approx(std::acos(-3.0 / 8)));
  CHECK(fwhm_report(4, 4).fwhm_theta > 0.0);
  CHECK(fwhm_report(4, -2).fwhm_theta == doctest::Approx(fwhm_report(4, 2).fwhm_theta));
  CHECK_THROWS_AS(fwhm_report(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(fwhm_report(3, 4), std::invalid_argument);
}

TEST_CASE("parabolic table") {
  const auto rows = parabolic_table(8);
  for (const auto& r : rows) {
    if (r.s == 0) CHECK(r.percent_error == 0.0);
    // The half-width stays within 0.05% of the spin-0 value once l >= 64.
    if (r.l >= 64 && r.s <= r.l / 2) CHECK(r.percent_error < 0.05);
    if (r.l == 256 && r.s == 255) CHECK(r.percent_error <= 5.0);
  }
  CHECK_THROWS_AS(parabolic_table(0), std::invalid_argument);
  CHECK_THROWS_AS(parabolic_table(9), std::invalid_argument);
}
