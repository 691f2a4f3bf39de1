#include "scurve/curvelet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scurve/parallel.hpp"

namespace scurve {

namespace {

bool same_params(const TilingParams& a, const TilingParams& b) {
  return a.L == b.L && a.spin == b.spin && a.lambda == b.lambda && a.J0 == b.J0 && a.J == b.J;
}

// d^l_{k,l}(theta) and d^l_{k,-l}(theta) for k = -l..l, indexed k + l.
// ratio d_{k+1,l} / d_{k,l} = sqrt((l-k)/(l+k+1)) cot(t/2), started from the larger end
struct EdgeRows {
  std::vector<double> plus;
  std::vector<double> minus;
};

EdgeRows edge_rows(int l, double theta) {
  EdgeRows e;
  e.plus.assign(2 * l + 1, 0.0);
  e.minus.assign(2 * l + 1, 0.0);
  const double s = std::sin(theta / 2), c = std::cos(theta / 2);
  if (std::abs(s) >= std::abs(c)) {
    double v = std::pow(s, 2 * l);  // k = -l
    e.plus[0] = v;
    for (int k = -l; k < l; ++k) {
      v *= std::sqrt(double(l - k) / double(l + k + 1)) * (c / s);
      e.plus[k + 1 + l] = v;
    }
  } else {
    double v = std::pow(c, 2 * l);  // k = l
    e.plus[2 * l] = v;
    for (int k = l; k > -l; --k) {
      v *= std::sqrt(double(l + k) / double(l - k + 1)) * (s / c);
      e.plus[k - 1 + l] = v;
    }
  }
  // d_{k,-l} = (-1)^{l+k} d_{-k,l}
  for (int k = -l; k <= l; ++k) e.minus[k + l] = parity(l + k) * e.plus[-k + l];
  return e;
}

}  // namespace

std::string to_string(Frame f) { return f == Frame::north ? "north" : "unrotated"; }

Frame frame_from_string(const std::string& s) {
  if (s == "unrotated") return Frame::unrotated;
  if (s == "north") return Frame::north;
  throw std::invalid_argument("unknown coefficient frame '" + s + "'");
}

CurveletTransform::CurveletTransform(Tiling tiling, bool multires)
    : tiling_(std::move(tiling)),
      multires_(multires),
      table_(std::make_shared<HalfPiTable>(tiling_.L())) {
  for (int j = tiling_.J0(); j <= tiling_.J(); ++j) {
    harmonics_.push_back(tiling_.curvelet_harmonics(j));
  }
}

int CurveletTransform::scale_band_limit(int j) const {
  return multires_ ? tiling_.band_limit(j) : tiling_.L();
}

void CurveletTransform::check_params(int L, int spin) const {
  if (L != tiling_.L()) {
    throw std::invalid_argument("band-limit " + std::to_string(L) + " does not match tiling L=" +
                                std::to_string(tiling_.L()));
  }
  if (spin != tiling_.params().spin) {
    throw std::invalid_argument("spin " + std::to_string(spin) + " does not match tiling spin " +
                                std::to_string(tiling_.params().spin));
  }
}

template <class C>
void CurveletTransform::check_coeffs(const C& c) const {
  if (c.frame != Frame::unrotated) {
    throw std::invalid_argument("synthesis needs unrotated-frame coefficients");
  }
  if (!same_params(c.params, tiling_.params())) {
    throw std::invalid_argument("coefficient parameters do not match the tiling");
  }
  if (c.multires != multires_) {
    throw std::invalid_argument("coefficient resolution mode does not match the transform");
  }
  if (static_cast<int>(c.scales.size()) != tiling_.scale_count()) {
    throw std::invalid_argument("expected " + std::to_string(tiling_.scale_count()) +
                                " scales, got " + std::to_string(c.scales.size()));
  }
  const int L_scal = multires_ ? scaling_band_limit() : tiling_.L();
  if (c.scaling.L != L_scal || c.scaling.spin != 0 ||
      c.scaling.values.size() != c.scaling.grid().size()) {
    throw std::invalid_argument("scaling signal has the wrong shape");
  }
  for (int j = tiling_.J0(); j <= tiling_.J(); ++j) {
    const auto& s = c.scales[j - tiling_.J0()];
    if (!(s.grid == SO3Grid::cubic(scale_band_limit(j))) || s.values.size() != s.grid.size()) {
      throw std::invalid_argument("scale " + std::to_string(j) + " has the wrong grid");
    }
  }
}

CurveletWignerCoeffs CurveletTransform::scale_coefficients(const HarmonicCoeffs& flm, int j) const {
  check_params(flm.L, flm.spin);
  const int Lj = scale_band_limit(j);
  const auto& psi = harmonics_.at(j - tiling_.J0());
  auto w = CurveletWignerCoeffs::zeros(Lj);
  for (int l = std::abs(flm.spin); l < Lj; ++l) {
    const double c = 8.0 * pi * pi / (2.0 * l + 1.0);
    for (int m = -l; m <= l; ++m) {
      const cplx f = flm(l, m);
      const auto i = CurveletWignerCoeffs::index(l, m);
      w.plus[i] = c * f * psi.plus[l];
      w.minus[i] = c * f * psi.minus[l];
    }
  }
  return w;
}

CurveletCoeffs CurveletTransform::analyze(const SphereSignal& f) const {
  check_params(f.L, f.spin);
  return analyze_harmonic(sht_forward(f, *table_));
}

CurveletCoeffs CurveletTransform::analyze_harmonic(const HarmonicCoeffs& flm) const {
  check_params(flm.L, flm.spin);
  CurveletCoeffs out;
  out.params = tiling_.params();
  out.frame = Frame::unrotated;
  out.multires = multires_;
  out.scales.resize(tiling_.scale_count());

  parallel_for(tiling_.scale_count(), [&](int i) {
    out.scales[i] = so3_inverse_curvelet(scale_coefficients(flm, tiling_.J0() + i), *table_);
  });

  const int L_scal = multires_ ? scaling_band_limit() : tiling_.L();
  auto wphi = HarmonicCoeffs::zeros(L_scal, 0);
  const auto& phi = tiling_.scaling();
  for (int l = std::abs(flm.spin); l < L_scal; ++l) {
    const double c = std::sqrt(4.0 * pi / (2.0 * l + 1.0)) * phi[l];
    for (int m = -l; m <= l; ++m) wphi(l, m) = c * flm(l, m);
  }
  out.scaling = sht_inverse(wphi, *table_);
  return out;
}

namespace {

// Adds the scaling part of a synthesis into flm.
void add_scaling(const HarmonicCoeffs& wphi, const std::vector<double>& phi, HarmonicCoeffs& flm) {
  const int top = std::min(wphi.L, flm.L);
  for (int l = std::abs(flm.spin); l < top; ++l) {
    const double c = std::sqrt(4.0 * pi / (2.0 * l + 1.0)) * phi[l];
    for (int m = -l; m <= l; ++m) flm(l, m) += c * wphi(l, m);
  }
}

void add_scale(const CurveletWignerCoeffs& w, const CurveletHarmonics& psi, HarmonicCoeffs& flm) {
  const int top = std::min(w.L, flm.L);
  for (int l = std::max(1, std::abs(flm.spin)); l < top; ++l) {
    for (int m = -l; m <= l; ++m) {
      const auto i = CurveletWignerCoeffs::index(l, m);
      flm(l, m) += w.plus[i] * psi.plus[l] + w.minus[i] * psi.minus[l];
    }
  }
}

}  // namespace

HarmonicCoeffs CurveletTransform::synthesize_harmonic(const CurveletCoeffs& c) const {
  check_coeffs(c);
  const int count = tiling_.scale_count();
  std::vector<CurveletWignerCoeffs> parts(count);
  parallel_for(count, [&](int i) { parts[i] = so3_forward_curvelet(c.scales[i], *table_); });

  auto flm = HarmonicCoeffs::zeros(tiling_.L(), tiling_.params().spin);
  for (int i = 0; i < count; ++i) add_scale(parts[i], harmonics_[i], flm);
  add_scaling(sht_forward(c.scaling, *table_), tiling_.scaling(), flm);
  return flm;
}

HarmonicCoeffs CurveletTransform::synthesize_harmonic(CurveletCoeffs&& c) const {
  check_coeffs(c);
  const int count = tiling_.scale_count();
  std::vector<CurveletWignerCoeffs> parts(count);
  parallel_for(count, [&](int i) {
    parts[i] = so3_forward_curvelet(std::move(c.scales[i]), *table_);
    c.scales[i] = SO3Signal{};
  });

  auto flm = HarmonicCoeffs::zeros(tiling_.L(), tiling_.params().spin);
  for (int i = 0; i < count; ++i) add_scale(parts[i], harmonics_[i], flm);
  add_scaling(sht_forward(c.scaling, *table_), tiling_.scaling(), flm);
  return flm;
}

SphereSignal CurveletTransform::synthesize(const CurveletCoeffs& c) const {
  return sht_inverse(synthesize_harmonic(c), *table_);
}

RealCurveletCoeffs CurveletTransform::analyze_real(const RealSphereSignal& f) const {
  if (f.spin != 0) throw std::invalid_argument("real path requires spin 0");
  check_params(f.L, 0);
  return analyze_real_harmonic(sht_forward_real(f, *table_));
}

RealCurveletCoeffs CurveletTransform::analyze_real_harmonic(const RealHarmonicCoeffs& flm) const {
  check_params(flm.L, 0);
  RealCurveletCoeffs out;
  out.params = tiling_.params();
  out.frame = Frame::unrotated;
  out.multires = multires_;
  out.scales.resize(tiling_.scale_count());

  parallel_for(tiling_.scale_count(), [&](int i) {
    const int j = tiling_.J0() + i;
    const int Lj = scale_band_limit(j);
    const auto& psi = harmonics_[i];
    auto w = RealCurveletWignerCoeffs::zeros(Lj);
    for (int l = 0; l < Lj; ++l) {
      const double c = 8.0 * pi * pi / (2.0 * l + 1.0) * psi.plus[l];
      for (int m = 0; m <= l; ++m) {
        const cplx f = flm(l, m);
        w.plus[CurveletWignerCoeffs::index(l, m)] = c * f;
        if (m > 0) w.plus[CurveletWignerCoeffs::index(l, -m)] = c * double(parity(m)) * std::conj(f);
      }
    }
    out.scales[i] = so3_inverse_curvelet_real(w, *table_);
  });

  const int L_scal = multires_ ? scaling_band_limit() : tiling_.L();
  auto wphi = RealHarmonicCoeffs::zeros(L_scal);
  const auto& phi = tiling_.scaling();
  for (int l = 0; l < L_scal; ++l) {
    const double c = std::sqrt(4.0 * pi / (2.0 * l + 1.0)) * phi[l];
    for (int m = 0; m <= l; ++m) wphi(l, m) = c * flm(l, m);
  }
  out.scaling = sht_inverse_real(wphi, *table_);
  return out;
}

RealHarmonicCoeffs CurveletTransform::synthesize_real_harmonic(const RealCurveletCoeffs& c) const {
  if (tiling_.params().spin != 0) throw std::invalid_argument("real path requires spin 0");
  check_coeffs(c);
  const int count = tiling_.scale_count();
  std::vector<RealCurveletWignerCoeffs> parts(count);
  parallel_for(count, [&](int i) { parts[i] = so3_forward_curvelet_real(c.scales[i], *table_); });

  auto flm = RealHarmonicCoeffs::zeros(tiling_.L());
  for (int i = 0; i < count; ++i) {
    const auto& w = parts[i];
    const auto& psi = harmonics_[i];
    for (int l = 1; l < std::min(w.L, flm.L); ++l) {
      for (int m = 0; m <= l; ++m) {
        const cplx plus = w.plus[CurveletWignerCoeffs::index(l, m)];
        const cplx minus =
            double(parity(m + l)) * std::conj(w.plus[CurveletWignerCoeffs::index(l, -m)]);
        flm(l, m) += plus * psi.plus[l] + minus * psi.minus[l];
      }
    }
  }
  const auto wphi = sht_forward_real(c.scaling, *table_);
  const auto& phi = tiling_.scaling();
  for (int l = 0; l < std::min(wphi.L, flm.L); ++l) {
    const double s = std::sqrt(4.0 * pi / (2.0 * l + 1.0)) * phi[l];
    for (int m = 0; m <= l; ++m) flm(l, m) += s * wphi(l, m);
  }
  return flm;
}

RealSphereSignal CurveletTransform::synthesize_real(const RealCurveletCoeffs& c) const {
  return sht_inverse_real(synthesize_real_harmonic(c), *table_);
}

WignerCoeffs CurveletTransform::rotate_to_north(const CurveletWignerCoeffs& w, int j) const {
  const double theta = tiling_.theta(j);
  auto out = WignerCoeffs::zeros(w.L);
  if (w.L > 0) out(0, 0, 0) = w.plus[0];
  for (int l = 1; l < w.L; ++l) {
    const auto e = edge_rows(l, theta);
    for (int m = -l; m <= l; ++m) {
      const auto i = CurveletWignerCoeffs::index(l, m);
      const cplx p = w.plus[i];
      const cplx q = w.minus[i];
      for (int k = -l; k <= l; ++k) out(l, m, k) = p * e.plus[k + l] + q * e.minus[k + l];
    }
  }
  return out;
}

CurveletWignerCoeffs CurveletTransform::rotate_from_north(const WignerCoeffs& w, int j) const {
  const double theta = tiling_.theta(j);
  auto out = CurveletWignerCoeffs::zeros(w.L);
  if (w.L > 0) out.plus[0] = out.minus[0] = w(0, 0, 0);
  for (int l = 1; l < w.L; ++l) {
    const auto e = edge_rows(l, theta);
    for (int m = -l; m <= l; ++m) {
      cplx p = 0.0;
      cplx q = 0.0;
      for (int n = -l; n <= l; ++n) {
        const cplx v = w(l, m, n);
        p += v * e.plus[n + l];
        q += v * e.minus[n + l];
      }
      const auto i = CurveletWignerCoeffs::index(l, m);
      out.plus[i] = p;
      out.minus[i] = q;
    }
  }
  return out;
}

SO3Signal CurveletTransform::analyze_north_validation(const SphereSignal& f, int j,
                                                      int max_band_limit) const {
  check_params(f.L, f.spin);
  const int Lj = scale_band_limit(j);
  if (Lj > max_band_limit) {
    throw std::invalid_argument("validation path limited to L <= " +
                                std::to_string(max_band_limit) + ", scale needs " +
                                std::to_string(Lj));
  }
  const auto flm = sht_forward(f, *table_);
  const auto dense = rotate_to_north(scale_coefficients(flm, j), j);
  return so3_inverse_general(dense, SO3Grid::cubic(Lj), *table_);
}

CurveletCoeffs analyze(const SphereSignal& f, const Tiling& t) {
  return CurveletTransform(t).analyze(f);
}

SphereSignal synthesize(const CurveletCoeffs& c, const Tiling& t) {
  return CurveletTransform(t, c.multires).synthesize(c);
}

double coefficient_energy(const CurveletTransform& t, const CurveletCoeffs& c) {
  const auto& table = t.table();
  double e = 0.0;
  const auto wphi = sht_forward(c.scaling, table);
  for (const cplx v : wphi.values) e += std::norm(v);
  for (const auto& s : c.scales) {
    const auto w = so3_forward_curvelet(s, table);
    for (int l = 0; l < w.L; ++l) {
      const double weight = (2.0 * l + 1.0) / (8.0 * pi * pi);
      for (int m = -l; m <= l; ++m) {
        const auto i = CurveletWignerCoeffs::index(l, m);
        e += weight * std::norm(w.plus[i]);
        if (l > 0) e += weight * std::norm(w.minus[i]);
      }
    }
  }
  return e;
}

}  // namespace scurve
