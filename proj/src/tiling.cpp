#include "scurve/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace scurve {

namespace {

constexpr double admissibility_tol = 1e-8;

// s_lambda(t) = s(2 lambda/(lambda-1) (t - 1/lambda) - 1), supported on [1/lambda, 1].
double s_lambda(double lambda, double t) {
  return schwartz_s(2.0 * lambda / (lambda - 1.0) * (t - 1.0 / lambda) - 1.0);
}

struct SimpsonState {
  const std::function<double(double)>& f;
  double tol;
  int failures = 0;
};

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    ++st.failures;
    return left + right + delta / 15.0;
  }
  return adaptive(st, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive(st, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

// int_a^b f with absolute tolerance `tol`, starting from `panels` equal panels
// so that narrow bumps are not missed.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int panels = 16) {
  if (b <= a) return 0.0;
  SimpsonState st{f, tol};
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    const double x1 = i + 1 == panels ? b : x0 + h;
    const double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
    total += adaptive(st, x0, x1, f0, fm, f1, simpson(f0, fm, f1, x0, x1), tol / panels, 50);
  }
  if (st.failures > 0) {
    throw QuadratureError("adaptive Simpson quadrature did not converge on [" +
                          std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return total;
}

// int_{ln t}^{0} s_lambda(e^u)^2 du, i.e. int_t^1 s_lambda(t')^2 / t' dt'.
double log_integral(double lambda, double t, double abs_tol) {
  auto f = [lambda](double u) {
    const double v = s_lambda(lambda, std::exp(u));
    return v * v;
  };
  return integrate(f, std::log(t), 0.0, abs_tol);
}

class StepFunction {
 public:
  StepFunction(double lambda, double tol) : lambda_(lambda), tol_(tol) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("lambda must be a finite number > 1");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    // Rough scale first so the tolerance can be made relative.
    const double rough = log_integral(lambda, 1.0 / lambda, 1e-6);
    den_ = log_integral(lambda, 1.0 / lambda, tol * rough);
  }

  double operator()(double t) const {
    if (t <= 1.0 / lambda_) return 1.0;
    if (t >= 1.0) return 0.0;
    return std::clamp(log_integral(lambda_, t, tol_ * den_) / den_, 0.0, 1.0);
  }

 private:
  double lambda_;
  double tol_;
  double den_ = 0.0;
};

}  // namespace

void TilingParams::validate() const {
  if (L < 1) throw std::invalid_argument("band-limit L must be >= 1");
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be a finite number > 1");
  }
  if (J0 < 0) throw std::invalid_argument("J0 must be non-negative");
  if (J >= 0 && J < J0) throw std::invalid_argument("J must be >= J0");
  if (spin != 0 && std::abs(spin) >= L) throw std::invalid_argument("|spin| must be < L");
}

int default_max_scale(int L, double lambda, int J0) {
  int J = J0;
  while (std::pow(lambda, J) < L - 1.0) ++J;
  return J;
}

TilingParams TilingParams::resolved() const {
  validate();
  TilingParams p = *this;
  if (p.J < 0) p.J = default_max_scale(L, lambda, J0);
  return p;
}

double schwartz_s(double t) {
  if (!(t > -1.0 && t < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

double smooth_step_k(double lambda, double t, double tol) { return StepFunction(lambda, tol)(t); }

void Tiling::check_scale(int j) const {
  if (j < params_.J0 || j > params_.J) {
    throw std::out_of_range("scale " + std::to_string(j) + " outside [" +
                            std::to_string(params_.J0) + ", " + std::to_string(params_.J) + "]");
  }
}

const std::vector<double>& Tiling::kernel(int j) const {
  check_scale(j);
  return kernels_[j - params_.J0];
}

double Tiling::directionality(int l, int m) const {
  if (l < 0 || l >= params_.L || std::abs(m) > l) {
    throw std::invalid_argument("directionality index out of range");
  }
  if (l == 0 || std::abs(m) != l) return 0.0;
  return (m > 0 ? 1.0 : parity(l)) / std::sqrt(2.0);
}

double Tiling::theta(int j) const {
  check_scale(j);
  return theta_[j - params_.J0];
}

int Tiling::band_limit(int j) const {
  check_scale(j);
  return std::min(static_cast<int>(std::ceil(std::pow(params_.lambda, j + 1))), params_.L);
}

int Tiling::scaling_band_limit() const {
  return std::min(static_cast<int>(std::ceil(std::pow(params_.lambda, params_.J0))), params_.L);
}

std::pair<int, int> Tiling::support(int j) const {
  check_scale(j);
  return {static_cast<int>(std::floor(std::pow(params_.lambda, j - 1))),
          static_cast<int>(std::ceil(std::pow(params_.lambda, j + 1)))};
}

CurveletHarmonics Tiling::curvelet_harmonics(int j) const {
  const auto& k = kernel(j);
  CurveletHarmonics h;
  h.plus.assign(params_.L, 0.0);
  h.minus.assign(params_.L, 0.0);
  for (int l = 1; l < params_.L; ++l) {
    const double c = std::sqrt((2.0 * l + 1.0) / (8.0 * pi * pi)) * k[l];
    h.plus[l] = c * directionality(l, l);
    h.minus[l] = c * directionality(l, -l);
  }
  return h;
}

Tiling Tiling::without_kernel(int j) const {
  check_scale(j);
  Tiling t = *this;
  std::fill(t.kernels_[j - params_.J0].begin(), t.kernels_[j - params_.J0].end(), 0.0);
  return t;
}

Tiling build_tiling(const TilingParams& p_in, double tol) {
  const TilingParams p = p_in.resolved();
  const StepFunction k(p.lambda, tol);
  const int L = p.L;

  // k(l / lambda^j) for j in [J0, J+1], evaluated once so that consecutive
  // kernels share the same values and the sum telescopes.
  std::vector<std::vector<double>> kv(p.J - p.J0 + 2, std::vector<double>(L));
  for (int j = p.J0; j <= p.J + 1; ++j) {
    const double scale = std::pow(p.lambda, j);
    for (int l = 0; l < L; ++l) kv[j - p.J0][l] = k(l / scale);
  }

  Tiling t;
  t.params_ = p;
  t.scaling_.resize(L);
  for (int l = 0; l < L; ++l) {
    t.scaling_[l] = std::sqrt((2.0 * l + 1.0) / (4.0 * pi)) * std::sqrt(kv[0][l]);
  }
  for (int j = p.J0; j <= p.J; ++j) {
    std::vector<double> kernel(L);
    for (int l = 0; l < L; ++l) {
      kernel[l] = std::sqrt(std::max(0.0, kv[j + 1 - p.J0][l] - kv[j - p.J0][l]));
    }
    t.kernels_.push_back(std::move(kernel));
    const double x = std::clamp(-p.spin / std::pow(p.lambda, j), -1.0, 1.0);
    t.theta_.push_back(std::clamp(std::acos(x), pi / 2, pi));
  }

  for (int j = p.J0; j <= p.J; ++j) {
    const int Lj = t.band_limit(j);
    const auto& kj = t.kernels_[j - p.J0];
    for (int l = Lj; l < L; ++l) {
      if (kj[l] != 0.0) {
        throw ConstructionError("kernel " + std::to_string(j) + " is non-zero beyond its band-limit");
      }
    }
  }
  const double residual = admissibility_residual(t);
  if (!(residual <= admissibility_tol)) {
    throw ConstructionError("admissibility residual " + std::to_string(residual) +
                            " exceeds tolerance; J=" + std::to_string(p.J) +
                            " may be too small for L=" + std::to_string(L));
  }
  return t;
}

double admissibility_residual(const Tiling& t) {
  const int L = t.L();
  double worst = 0.0;
  for (int l = 0; l < L; ++l) {
    const double phi = t.scaling()[l];
    double sum = 4.0 * pi / (2.0 * l + 1.0) * phi * phi;
    for (int j = t.J0(); j <= t.J(); ++j) {
      const double c = std::sqrt((2.0 * l + 1.0) / (8.0 * pi * pi)) * t.kernel(j)[l];
      double dir = 0.0;
      for (int m : {l, -l}) {
        const double s = t.directionality(l, m);
        dir += s * s;
        if (l == 0) break;
      }
      sum += 8.0 * pi * pi / (2.0 * l + 1.0) * c * c * dir;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

namespace {

// log |d^l_{l,-s}(theta)| up to a constant.
double log_profile(int l, int s, double theta) {
  double v = 0.0;
  if (l + s != 0) v += (l + s) * std::log(std::sin(theta / 2));
  if (l - s != 0) v += (l - s) * std::log(std::cos(theta / 2));
  return v;
}

double bisect(int l, int s, double target, double lo, double hi, bool rising) {
  // `rising`: profile increases from lo to hi.
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const bool above = log_profile(l, s, mid) > target;
    if (above == rising) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FwhmReport fwhm_report(int l, int s) {
  if (l <= 0 || std::abs(s) > l) throw std::invalid_argument("fwhm_report needs 0 < l and |s| <= l");
  FwhmReport r{};
  r.fwhm_phi = two_pi / (3.0 * l);
  r.theta_max = std::acos(-static_cast<double>(s) / l);
  const double target = log_profile(l, s, r.theta_max) - std::log(2.0);
  const bool has_left = l + s > 0;
  const bool has_right = l - s > 0;
  double left = 0.0, right = pi;
  if (has_left) left = bisect(l, s, target, 0.0, r.theta_max, true);
  if (has_right) right = bisect(l, s, target, r.theta_max, pi, false);
  if (has_left && has_right) {
    r.fwhm_theta = right - left;
  } else if (has_left) {
    r.fwhm_theta = 2.0 * (pi - left);
  } else {
    r.fwhm_theta = 2.0 * right;
  }
  r.parabolic_residual = std::abs(r.fwhm_theta * r.fwhm_theta - r.fwhm_phi) / r.fwhm_phi;
  return r;
}

std::vector<ParabolicRow> parabolic_table(int p_max) {
  if (p_max < 1 || p_max > 8) throw std::invalid_argument("p_max must lie in [1, 8]");
  std::vector<ParabolicRow> rows;
  for (int p = 1; p <= p_max; ++p) {
    const int l = 1 << p;
    const double ref = fwhm_report(l, 0).fwhm_theta;
    for (int s = 0; s <= l; ++s) {
      const double w = s == 0 ? ref : fwhm_report(l, s).fwhm_theta;
      rows.push_back({p, l, s, w, ref, 100.0 * std::abs(w - ref) / ref});
    }
  }
  return rows;
}

}  // namespace scurve
