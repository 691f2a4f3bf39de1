#pragma once

#include <utility>
#include <vector>

#include "scurve/types.hpp"

namespace scurve {

struct TilingParams {
  int L = 0;
  int spin = 0;
  double lambda = 2.0;
  int J0 = 0;
  int J = -1;  // negative: smallest J >= J0 with lambda^J >= L - 1

  // Throws std::invalid_argument.
  void validate() const;
  // Copy with J filled in.
  TilingParams resolved() const;
};

int default_max_scale(int L, double lambda, int J0);

// exp(-1/(1-t^2)) on (-1, 1), zero elsewhere.
double schwartz_s(double t);

// k_lambda(t): 1 for t <= 1/lambda, 0 for t >= 1, smooth and decreasing in
// between. Throws QuadratureError if the integrals do not converge.
double smooth_step_k(double lambda, double t, double tol = 1e-12);

// Unrotated curvelet harmonics at one scale: psi_{l,l} and psi_{l,-l}, by l.
struct CurveletHarmonics {
  std::vector<double> plus;
  std::vector<double> minus;
};

class Tiling {
 public:
  const TilingParams& params() const { return params_; }
  int L() const { return params_.L; }
  int J0() const { return params_.J0; }
  int J() const { return params_.J; }
  int scale_count() const { return params_.J - params_.J0 + 1; }

  // kappa^{(j)}(l), l < L.
  const std::vector<double>& kernel(int j) const;
  // Phi_l, l < L (the m = 0 harmonic of the scaling function).
  const std::vector<double>& scaling() const { return scaling_; }
  // s_{l,m}: only |m| = l with 0 < l < L is populated.
  double directionality(int l, int m) const;
  // Colatitude the unrotated curvelet at scale j is centred on.
  double theta(int j) const;

  // Band-limit of scale j, min(ceil(lambda^{j+1}), L).
  int band_limit(int j) const;
  int scaling_band_limit() const;
  // [floor(lambda^{j-1}), ceil(lambda^{j+1})]
  std::pair<int, int> support(int j) const;

  CurveletHarmonics curvelet_harmonics(int j) const;

  // Copy with one kernel set to zero; used to exercise the admissibility check.
  Tiling without_kernel(int j) const;

 private:
  friend Tiling build_tiling(const TilingParams& p, double tol);
  void check_scale(int j) const;

  TilingParams params_;
  std::vector<std::vector<double>> kernels_;
  std::vector<double> scaling_;
  std::vector<double> theta_;
};

// Throws ConstructionError when the admissibility residual exceeds 1e-8.
Tiling build_tiling(const TilingParams& p, double tol = 1e-12);

// max_l |4pi/(2l+1) Phi_l^2 + 8pi^2/(2l+1) sum_j sum_n psi_{ln}^2 - 1|
double admissibility_residual(const Tiling& t);

struct FwhmReport {
  double fwhm_phi;
  double fwhm_theta;
  double theta_max;
  double parabolic_residual;
};

// Widths of |d^l_{l,-s}(theta)|; 0 < l, |s| <= l.
FwhmReport fwhm_report(int l, int s);

struct ParabolicRow {
  int p;
  int l;
  int s;
  double fwhm_theta;
  double fwhm_theta_spin0;
  double percent_error;
};

// All l = 2^p, p = 1..p_max, and 0 <= s <= l.
std::vector<ParabolicRow> parabolic_table(int p_max);

}  // namespace scurve
