#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scurve/types.hpp"

namespace scurve {

// zyz Euler angles. alpha and gamma are wrapped into [0, 2pi); beta outside
// [0, pi] is rejected.
class EulerAngles {
 public:
  EulerAngles() = default;
  EulerAngles(double alpha, double beta, double gamma);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

 private:
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
};

// Slow reference evaluation of d^l_{mn}(beta) from the explicit factorial sum.
// The sum runs in quad precision with log-factorials, which keeps it accurate
// to roughly 1e-15 up to l ~ 80. Throws std::invalid_argument for |m|,|n| > l.
double wigner_d_sum(int l, int m, int n, double beta);

// d^l_{k,l}(beta) and d^l_{k,-l}(beta) in closed form, valid for any real beta
// and any l (evaluated in log space).
double wigner_d_edge_plus(int l, int k, double beta);
double wigner_d_edge_minus(int l, int k, double beta);

// D^l_{mn}(rho) = exp(-i m alpha) d^l_{mn}(beta) exp(-i n gamma).
cplx wigner_D(int l, int m, int n, const EulerAngles& rho);

// Spin spherical harmonic sY_{lm}(theta, phi), Condon-Shortley phase.
cplx spin_sph_harm(int l, int m, int s, double theta, double phi);

// w(p) = int_0^pi sin(b) exp(i p b) db, evaluated analytically.
cplx quadrature_weight(int p);

// All d^l_{m'm}(pi/2) for l < L. Only rows m' >= 0 are stored; negative rows
// follow from d^l_{-m',m} = (-1)^{l+m} d^l_{m'm}. Immutable after
// construction.
class HalfPiTable {
 public:
  explicit HalfPiTable(int band_limit);

  int band_limit() const { return band_limit_; }

  double operator()(int l, int mp, int m) const;

  // Row m' (0 <= m' <= l) of degree l, indexed by m + l.
  std::span<const double> row(int l, int mp) const {
    const std::size_t width = 2 * static_cast<std::size_t>(l) + 1;
    return {values_.data() + offsets_[l] + static_cast<std::size_t>(mp) * width, width};
  }

  std::size_t size_bytes() const { return values_.size() * sizeof(double); }

 private:
  int band_limit_;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

HalfPiTable build_halfpi_table(int band_limit);

}  // namespace scurve
