#pragma once

#include <memory>
#include <string>
#include <vector>

#include "scurve/so3.hpp"
#include "scurve/sphere.hpp"
#include "scurve/tiling.hpp"
#include "scurve/wigner.hpp"

namespace scurve {

enum class Frame { unrotated, north };

std::string to_string(Frame f);
Frame frame_from_string(const std::string& s);

template <class Sphere, class SO3>
struct BasicCurveletCoeffs {
  TilingParams params;
  Frame frame = Frame::unrotated;
  bool multires = true;
  Sphere scaling;           // spin 0, band-limit L_scal
  std::vector<SO3> scales;  // j = J0..J, cubic grids of band-limit L_j
};

using CurveletCoeffs = BasicCurveletCoeffs<SphereSignal, SO3Signal>;
using RealCurveletCoeffs = BasicCurveletCoeffs<RealSphereSignal, RealSO3Signal>;

// Analysis and synthesis for one tiling. Holds a half-pi table at the full
// band-limit shared by every scale. Methods are const and reentrant.
class CurveletTransform {
 public:
  explicit CurveletTransform(Tiling tiling, bool multires = true);

  const Tiling& tiling() const { return tiling_; }
  const HalfPiTable& table() const { return *table_; }
  bool multires() const { return multires_; }
  int scale_band_limit(int j) const;
  int scaling_band_limit() const { return tiling_.scaling_band_limit(); }

  CurveletCoeffs analyze(const SphereSignal& f) const;
  CurveletCoeffs analyze_harmonic(const HarmonicCoeffs& flm) const;
  SphereSignal synthesize(const CurveletCoeffs& c) const;
  HarmonicCoeffs synthesize_harmonic(const CurveletCoeffs& c) const;
  // Consumes the scale signals as it goes, avoiding a work copy per scale.
  HarmonicCoeffs synthesize_harmonic(CurveletCoeffs&& c) const;

  RealCurveletCoeffs analyze_real(const RealSphereSignal& f) const;
  RealCurveletCoeffs analyze_real_harmonic(const RealHarmonicCoeffs& flm) const;
  RealSphereSignal synthesize_real(const RealCurveletCoeffs& c) const;
  RealHarmonicCoeffs synthesize_real_harmonic(const RealCurveletCoeffs& c) const;

  // Unrotated Wigner coefficients of scale j, band-limit L_j.
  CurveletWignerCoeffs scale_coefficients(const HarmonicCoeffs& flm, int j) const;

  // Harmonic-space rotation between the unrotated frame and curvelets
  // centred on the North pole.
  WignerCoeffs rotate_to_north(const CurveletWignerCoeffs& w, int j) const;
  // Keeps only k = +-l; content outside the image of rotate_to_north is lost.
  CurveletWignerCoeffs rotate_from_north(const WignerCoeffs& w, int j) const;

  // North-pole-frame samples of scale j through the dense Wigner path.
  SO3Signal analyze_north_validation(const SphereSignal& f, int j, int max_band_limit = 32) const;

 private:
  void check_params(int L, int spin) const;
  template <class C>
  void check_coeffs(const C& c) const;

  Tiling tiling_;
  bool multires_;
  std::shared_ptr<const HalfPiTable> table_;
  std::vector<CurveletHarmonics> harmonics_;
};

CurveletCoeffs analyze(const SphereSignal& f, const Tiling& t);
SphereSignal synthesize(const CurveletCoeffs& c, const Tiling& t);

// Sum |W^Phi_lm|^2 + sum_j sum (2l+1)/(8pi^2) |W^l_mn|^2 over the harmonic
// content of the coefficients; equals sum |f_lm|^2 by admissibility.
double coefficient_energy(const CurveletTransform& t, const CurveletCoeffs& c);

}  // namespace scurve
