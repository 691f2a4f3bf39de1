#include "scurve/reports.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scurve {

double SignalRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u <= 0.0) u = unit();
  const double v = unit();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(two_pi * v);
  has_spare_ = true;
  return r * std::cos(two_pi * v);
}

std::uint64_t derive_seed(std::uint64_t seed, int L, int r) {
  // splitmix64 finaliser over the packed triple
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (1 + (static_cast<std::uint64_t>(L) << 20) + static_cast<std::uint64_t>(r));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

HarmonicCoeffs random_harmonics(int L, int spin, std::uint64_t seed) {
  SignalRng rng(seed);
  auto h = HarmonicCoeffs::zeros(L, spin);
  for (int l = std::abs(spin); l < L; ++l) {
    for (int m = -l; m <= l; ++m) {
      const double re = rng.symmetric();
      const double im = rng.symmetric();
      h(l, m) = {re, im};
    }
  }
  return h;
}

RealSphereSignal edge_map(int L, const std::array<double, 3>& normal) {
  // Sampled on a 4x finer grid to keep aliasing of the step small, then
  // truncated to l < L.
  const int fine = 4 * L;
  auto f = RealSphereSignal::zeros(fine);
  const SphereGrid g = f.grid();
  for (int t = 0; t < g.n_theta(); ++t) {
    const double st = std::sin(g.theta(t)), ct = std::cos(g.theta(t));
    for (int p = 0; p < g.n_phi(); ++p) {
      const double d = normal[0] * st * std::cos(g.phi(p)) + normal[1] * st * std::sin(g.phi(p)) + normal[2] * ct;
      f.at(t, p) = d >= 0.0 ? 1.0 : 0.0;
    }
  }
  const auto hf = sht_forward_real(f, HalfPiTable(fine));
  auto h = RealHarmonicCoeffs::zeros(L);
  for (int l = 0; l < L; ++l)
    for (int m = 0; m <= l; ++m) h(l, m) = hf(l, m);
  return sht_inverse_real(h, HalfPiTable(L));
}

namespace {

double real_energy(const RealHarmonicCoeffs& h) {
  double e = 0.0;
  for (int l = 0; l < h.L; ++l) {
    e += std::norm(h(l, 0));
    for (int m = 1; m <= l; ++m) e += 2.0 * std::norm(h(l, m));
  }
  return e;
}

}  // namespace

RealSphereSignal noise_map(int L, std::uint64_t seed, double energy) {
  SignalRng rng(seed);
  auto h = RealHarmonicCoeffs::zeros(L);
  for (int l = 0; l < L; ++l) {
    h(l, 0) = rng.normal();
    for (int m = 1; m <= l; ++m) {
      const double re = rng.normal();
      const double im = rng.normal();
      h(l, m) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  const double e = real_energy(h);
  const double scale = e > 0.0 ? std::sqrt(energy / e) : 0.0;
  for (auto& v : h.values) v *= scale;
  return sht_inverse_real(h, HalfPiTable(L));
}

double harmonic_energy(const RealSphereSignal& f) {
  return real_energy(sht_forward_real(f, HalfPiTable(f.L)));
}

double gini(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  std::sort(values.begin(), values.end());
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += values[i];
    weighted += (2.0 * (i + 1) - n - 1.0) * values[i];
  }
  return total > 0.0 ? weighted / (n * total) : 0.0;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log-log slope needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("slope needs distinct abscissae");
  return sxy / sxx;
}

bool HistogramReport::empty() const {
  return std::all_of(scales.begin(), scales.end(), [](const ScaleHistogram& s) { return s.probability.empty(); });
}

namespace {

template <class C>
HistogramReport build_report(const C& c, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  HistogramReport r;
  r.bins = bins;
  for (std::size_t i = 0; i < c.scales.size(); ++i) {
    ScaleHistogram h;
    h.j = c.params.J0 + static_cast<int>(i);
    std::vector<double> mags;
    mags.reserve(c.scales[i].values.size());
    for (const auto& v : c.scales[i].values) mags.push_back(std::abs(v));
    h.count = mags.size();
    for (double m : mags) h.max_abs = std::max(h.max_abs, m);
    if (h.max_abs == 0.0) {
      r.warnings.push_back("scale " + std::to_string(h.j) + " is identically zero; histogram left empty");
      r.scales.push_back(std::move(h));
      continue;
    }
    std::vector<std::size_t> counts(bins, 0);
    for (double m : mags) {
      const int b = std::min(bins - 1, static_cast<int>(m / h.max_abs * bins));
      ++counts[b];
    }
    h.probability.resize(bins);
    for (int b = 0; b < bins; ++b) h.probability[b] = double(counts[b]) / double(h.count);
    h.gini = gini(std::move(mags));
    r.scales.push_back(std::move(h));
  }
  return r;
}

}  // namespace

HistogramReport sparsity_report(const CurveletCoeffs& c, int bins) { return build_report(c, bins); }
HistogramReport sparsity_report(const RealCurveletCoeffs& c, int bins) { return build_report(c, bins); }

std::vector<RoundtripRow> run_roundtrip(const std::vector<int>& Ls, int repeats, int spin, double lambda,
                                        int J0, std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  std::vector<int> sorted = Ls;
  std::sort(sorted.begin(), sorted.end());
  std::vector<RoundtripRow> rows;
  for (int L : sorted) {
    TilingParams p{L, spin, lambda, J0};
    const CurveletTransform tr(build_tiling(p));
    RoundtripRow row{L, spin, lambda, J0, repeats, 0.0, 0.0};
    for (int r = 0; r < repeats; ++r) {
      const auto flm = random_harmonics(L, spin, derive_seed(seed, L, r));
      const auto back = tr.synthesize_harmonic(tr.analyze_harmonic(flm));
      double err = 0.0;
      for (std::size_t i = 0; i < flm.values.size(); ++i) err = std::max(err, std::abs(back.values[i] - flm.values[i]));
      row.max_error = std::max(row.max_error, err);
      row.mean_error += err / repeats;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRow> run_bench(const std::vector<int>& Ls, int repeats, int spin, double lambda, int J0,
                                std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  std::vector<int> sorted = Ls;
  std::sort(sorted.begin(), sorted.end());
  std::vector<BenchRow> rows;
  for (int L : sorted) {
    const CurveletTransform tr(build_tiling({L, spin, lambda, J0}));
    const auto f = sht_inverse(random_harmonics(L, spin, derive_seed(seed, L, 0)), tr.table());
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      auto c = tr.analyze(f);
      [[maybe_unused]] const auto g = sht_inverse(tr.synthesize_harmonic(std::move(c)), tr.table());
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t n = times.size();
    const double median = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
    rows.push_back({L, spin, repeats, median, times.front(), times.back()});
  }
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (in_row_ == columns_) throw std::logic_error("CSV row has too many cells");
  if (in_row_++ > 0) out_ += ',';
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  sep();
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    out_ += s;
  } else {
    out_ += '"';
    for (char ch : s) {
      if (ch == '"') out_ += '"';
      out_ += ch;
    }
    out_ += '"';
  }
  return *this;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CSV row has too few cells");
  out_ += "\r\n";
  in_row_ = 0;
}

}  // namespace scurve
