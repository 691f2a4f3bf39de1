#include "scurve/wigner.hpp"

#include <quadmath.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace scurve {

namespace {

void check_indices(int l, int m, int n) {
  if (l < 0 || std::abs(m) > l || std::abs(n) > l) {
    throw std::invalid_argument("Wigner indices out of range: l=" + std::to_string(l) +
                                " m=" + std::to_string(m) + " n=" + std::to_string(n));
  }
}

double wrap_angle(double x) {
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

// log|x^p| and the sign of x^p, with 0^0 = 1.
struct SignedLog {
  double log_abs;
  double sign;
};

SignedLog signed_pow(double x, int p) {
  if (p == 0) return {0.0, 1.0};
  const double sign = (x < 0.0 && (p & 1)) ? -1.0 : 1.0;
  return {p * std::log(std::abs(x)), sign};
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

EulerAngles::EulerAngles(double alpha, double beta, double gamma)
    : alpha_(wrap_angle(alpha)), beta_(beta), gamma_(wrap_angle(gamma)) {
  if (!(beta >= 0.0 && beta <= pi)) {
    throw std::invalid_argument("Euler angle beta must lie in [0, pi], got " + std::to_string(beta));
  }
}

double wigner_d_sum(int l, int m, int n, double beta) {
  check_indices(l, m, n);
  const __float128 half = static_cast<__float128>(beta) / 2;
  const __float128 sh = sinq(half);
  const __float128 ch = cosq(half);
  const __float128 log_sh = logq(fabsq(sh));
  const __float128 log_ch = logq(fabsq(ch));

  auto lfact = [](int k) { return lgammaq(static_cast<__float128>(k) + 1); };
  const __float128 log_pre = (lfact(l + m) + lfact(l - m) + lfact(l + n) + lfact(l - n)) / 2;

  const int k_min = std::max(0, -(m + n));
  const int k_max = std::min(l - m, l - n);
  __float128 sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const int p_sin = 2 * l - m - n - 2 * k;
    const int p_cos = m + n + 2 * k;
    if ((p_sin > 0 && sh == 0) || (p_cos > 0 && ch == 0)) continue;
    __float128 log_term = log_pre - lfact(k) - lfact(l - m - k) - lfact(l - n - k) - lfact(m + n + k);
    int sign = (k & 1) ? -1 : 1;
    if (p_sin > 0) {
      log_term += p_sin * log_sh;
      if (sh < 0 && (p_sin & 1)) sign = -sign;
    }
    if (p_cos > 0) {
      log_term += p_cos * log_ch;
      if (ch < 0 && (p_cos & 1)) sign = -sign;
    }
    sum += sign * expq(log_term);
  }
  if ((l - n) & 1) sum = -sum;
  return static_cast<double>(sum);
}

double wigner_d_edge_plus(int l, int k, double beta) {
  check_indices(l, k, l);
  // d^l_{k,l} = sqrt(C(2l, l+k)) sin^{l-k}(b/2) cos^{l+k}(b/2)
  const SignedLog s = signed_pow(std::sin(beta / 2), l - k);
  const SignedLog c = signed_pow(std::cos(beta / 2), l + k);
  return s.sign * c.sign * std::exp(0.5 * log_binomial(2 * l, l + k) + s.log_abs + c.log_abs);
}

double wigner_d_edge_minus(int l, int k, double beta) {
  check_indices(l, k, l);
  // d^l_{k,-l} = (-1)^{l+k} sqrt(C(2l, l-k)) sin^{l+k}(b/2) cos^{l-k}(b/2)
  const SignedLog s = signed_pow(std::sin(beta / 2), l + k);
  const SignedLog c = signed_pow(std::cos(beta / 2), l - k);
  return parity(l + k) * s.sign * c.sign *
         std::exp(0.5 * log_binomial(2 * l, l - k) + s.log_abs + c.log_abs);
}

cplx wigner_D(int l, int m, int n, const EulerAngles& rho) {
  const double d = wigner_d_sum(l, m, n, rho.beta());
  return std::polar(d, -(m * rho.alpha() + n * rho.gamma()));
}

cplx spin_sph_harm(int l, int m, int s, double theta, double phi) {
  if (l < 0 || std::abs(m) > l || std::abs(s) > l) {
    throw std::invalid_argument("spin harmonic requires |m|, |s| <= l");
  }
  const double norm = parity(s) * std::sqrt((2.0 * l + 1.0) / (4.0 * pi));
  return std::polar(norm * wigner_d_sum(l, m, -s, theta), m * phi);
}

cplx quadrature_weight(int p) {
  if (p == 1) return {0.0, pi / 2};
  if (p == -1) return {0.0, -pi / 2};
  if (p & 1) return {0.0, 0.0};
  return {2.0 / (1.0 - static_cast<double>(p) * p), 0.0};
}

HalfPiTable::HalfPiTable(int band_limit) : band_limit_(band_limit) {
  if (band_limit < 1) throw std::invalid_argument("half-pi table needs L >= 1");
  const int L = band_limit;
  offsets_.resize(L + 1);
  offsets_[0] = 0;
  for (int l = 0; l < L; ++l) {
    offsets_[l + 1] = offsets_[l] + static_cast<std::size_t>(l + 1) * (2 * l + 1);
  }
  values_.assign(offsets_[L], 0.0);

  // Mantissa/exponent pairs keep the seeds representable when the closed
  // form underflows (|d| ~ 2^-l near the corners).
  constexpr int rescale_bits = 512;
  const double rescale_limit = std::ldexp(1.0, rescale_bits);
  const double ln2 = std::log(2.0);

  for (int mp = 0; mp < L; ++mp) {
    for (int m = -(L - 1); m <= L - 1; ++m) {
      const int l0 = std::max(mp, std::abs(m));
      // Closed form on the boundary |m'| = l0 or |m| = l0, from
      // d^l_{l,n}(pi/2) = (-1)^{l-n} sqrt(C(2l, l+n)) 2^{-l}.
      int n = 0;
      double sign = 1.0;
      if (mp == l0) {
        n = m;
        sign = parity(l0 - n);
      } else if (m == l0) {
        // d_{m',l} = (-1)^{m'-l} d_{l,m'}
        n = mp;
        sign = parity(mp - l0) * parity(l0 - n);
      } else {
        // m == -l0: d_{m',-l} = (-1)^{m'+l} d_{-m',l} = (-1)^{m'+l} (-1)^{-m'-l} d_{l,-m'}
        n = -mp;
        sign = parity(l0 - n);
      }
      const double log_seed = 0.5 * log_binomial(2 * l0, l0 + n) - l0 * ln2;
      int exponent = static_cast<int>(std::floor(log_seed / ln2));
      double cur = sign * std::exp(log_seed - exponent * ln2);
      double prev = 0.0;

      auto store = [&](int l, double mant) {
        values_[offsets_[l] + static_cast<std::size_t>(mp) * (2 * l + 1) + (m + l)] =
            std::ldexp(mant, exponent);
      };
      store(l0, cur);

      const double mpm = static_cast<double>(mp) * m;
      const double mp2 = static_cast<double>(mp) * mp;
      const double m2 = static_cast<double>(m) * m;
      for (int l = l0; l < L - 1; ++l) {
        double next = 0.0;
        if (l > 0) {
          const double dl = l;
          const double a = -(2.0 * dl + 1.0) * mpm;
          const double b = -(dl + 1.0) * std::sqrt((dl * dl - mp2) * (dl * dl - m2));
          const double c = dl * std::sqrt(((dl + 1) * (dl + 1) - mp2) * ((dl + 1) * (dl + 1) - m2));
          next = (a * cur + b * prev) / c;
        }
        prev = cur;
        cur = next;
        if (std::abs(cur) > rescale_limit) {
          cur = std::ldexp(cur, -rescale_bits);
          prev = std::ldexp(prev, -rescale_bits);
          exponent += rescale_bits;
        }
        store(l + 1, cur);
      }
    }
  }
}

double HalfPiTable::operator()(int l, int mp, int m) const {
  if (l < 0 || l >= band_limit_ || std::abs(mp) > l || std::abs(m) > l) {
    throw std::invalid_argument("half-pi table index out of range");
  }
  if (mp >= 0) return row(l, mp)[m + l];
  return parity(l + m) * row(l, -mp)[m + l];
}

HalfPiTable build_halfpi_table(int band_limit) { return HalfPiTable(band_limit); }

}  // namespace scurve
