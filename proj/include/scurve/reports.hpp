#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scurve/curvelet.hpp"
#include "scurve/sphere.hpp"

namespace scurve {

// Reproducible variates: mt19937_64 words turned into doubles with the top
// 53 bits, so streams do not depend on the standard library's distributions.
inline constexpr const char* rng_algorithm = "mt19937_64/u53";

class SignalRng {
 public:
  explicit SignalRng(std::uint64_t seed) : eng_(seed) {}
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }  // [0, 1)
  double symmetric() { return 2.0 * unit() - 1.0; }                       // [-1, 1)
  double normal();                                                        // Box-Muller

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed of the r-th signal at band-limit L for a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, int L, int r);

// Real and imaginary parts uniform in [-1, 1] for |s| <= l < L.
HarmonicCoeffs random_harmonics(int L, int spin, std::uint64_t seed);

// Indicator of the hemisphere n . x >= 0, sampled on the grid and
// band-limited.
RealSphereSignal edge_map(int L, const std::array<double, 3>& normal);
// Real white noise (flat angular power spectrum), band-limited at L, scaled
// to the given harmonic energy.
RealSphereSignal noise_map(int L, std::uint64_t seed, double energy);
// sum over all (l, m) of |f_lm|^2.
double harmonic_energy(const RealSphereSignal& f);

double gini(std::vector<double> values);
// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ScaleHistogram {
  int j = 0;
  std::size_t count = 0;
  double max_abs = 0.0;
  double gini = 0.0;
  std::vector<double> probability;  // empty when the scale is identically zero
};

struct HistogramReport {
  int bins = 64;
  std::vector<ScaleHistogram> scales;
  std::vector<std::string> warnings;
  bool empty() const;
};

// Magnitudes normalised to max 1, `bins` uniform bins on [0, 1], per scale.
HistogramReport sparsity_report(const CurveletCoeffs& c, int bins = 64);
HistogramReport sparsity_report(const RealCurveletCoeffs& c, int bins = 64);

struct RoundtripRow {
  int L;
  int spin;
  double lambda;
  int J0;
  int repeats;
  double max_error;   // over all signals
  double mean_error;  // mean over signals of the per-signal maximum
};

std::vector<RoundtripRow> run_roundtrip(const std::vector<int>& Ls, int repeats, int spin, double lambda,
                                        int J0, std::uint64_t seed);

struct BenchRow {
  int L;
  int spin;
  int repeats;
  double median_seconds;
  double min_seconds;
  double max_seconds;
};

// Wall time of analyze followed by synthesize on a random signal; the tiling
// and tables are built outside the timed region.
std::vector<BenchRow> run_bench(const std::vector<int>& Ls, int repeats, int spin, double lambda, int J0,
                                std::uint64_t seed);

// RFC 4180 output with CRLF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  void end_row();
  const std::string& str() const { return out_; }

 private:
  void sep();
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::string out_;
};

// Shortest representation that round-trips.
std::string format_double(double v);

}  // namespace scurve
