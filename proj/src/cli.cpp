#include "scurve/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "scurve/container.hpp"
#include "scurve/curvelet.hpp"
#include "scurve/image.hpp"
#include "scurve/parallel.hpp"
#include "scurve/reports.hpp"
#include "scurve/tiling.hpp"

namespace scurve {

using nlohmann::json;

namespace {

struct Options {
  int L = 0;
  std::vector<int> Ls;
  int spin = 0;
  double lambda = 2.0;
  int jmin = 0;
  int jmax = -1;
  std::uint64_t seed = 1;
  int bins = 64;
  int repeats = 3;
  int pmax = 8;
  std::optional<double> clip;
  bool rescale = false;
  bool fullres = false;
  std::string kind = "random";
  std::string input;
  std::string out;
  std::string reference;
};

TilingParams checked_params(int L, const Options& o) {
  TilingParams p{L, o.spin, o.lambda, o.jmin, o.jmax};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

void check_threads_env() {
  if (const char* env = std::getenv("SCURVE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || n < 1) {
      throw UsageError(std::string("SCURVE_THREADS must be a positive integer, got '") + env + "'");
    }
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    atomic_write(path, text);
  }
}

// Sphere input from a container or a PGM file.
AnySphere load_sphere_input(const Options& o, std::ostream& err) {
  const std::string bytes = read_file(o.input);
  if (bytes.rfind("SCRV1", 0) == 0) {
    if (o.clip || o.rescale) err << "scurve: warning: --clip/--rescale only apply to PGM input\n";
    auto f = sphere_from_container(decode_container(bytes));
    const int L = std::visit([](const auto& s) { return s.L; }, f);
    if (o.L > 0 && o.L != L) {
      throw FormatError("input has L=" + std::to_string(L) + " but --L " + std::to_string(o.L) + " was given");
    }
    return f;
  }
  if (bytes.rfind("P5", 0) == 0) {
    if (o.L < 1) throw UsageError("PGM input needs --L");
    return sphere_from_image(decode_pgm(bytes), o.L, {o.clip, o.rescale});
  }
  throw FormatError("'" + o.input + "' is neither an SCRV1 container nor a P5 PGM image");
}

int cmd_tiling(const Options& o, std::ostream& out, std::ostream& err) {
  const TilingParams p = checked_params(o.L, o);
  const Tiling t = build_tiling(p);
  const double residual = admissibility_residual(t);

  std::vector<std::string> header = {"l", "phi"};
  for (int j = t.J0(); j <= t.J(); ++j) header.push_back("kappa_" + std::to_string(j));
  CsvWriter kernels(header);
  for (int l = 0; l < t.L(); ++l) {
    kernels.cell(l).cell(t.scaling()[l]);
    for (int j = t.J0(); j <= t.J(); ++j) kernels.cell(t.kernel(j)[l]);
    kernels.end_row();
  }
  CsvWriter dir({"l", "m", "s_lm"});
  for (int l = 1; l < t.L(); ++l) {
    for (int m : {-l, l}) dir.cell(l).cell(m).cell(t.directionality(l, m)).end_row();
  }

  json scales = json::array();
  for (int j = t.J0(); j <= t.J(); ++j) {
    const auto [lo, hi] = t.support(j);
    scales.push_back({{"j", j}, {"theta", t.theta(j)}, {"band_limit", t.band_limit(j)}, {"support", {lo, hi}}});
  }
  const std::string base = o.out;
  json summary = {{"L", p.L},
                  {"spin", p.spin},
                  {"lambda", p.lambda},
                  {"J0", t.J0()},
                  {"J", t.J()},
                  {"admissibility_residual", residual},
                  {"scaling_band_limit", t.scaling_band_limit()},
                  {"scales", scales},
                  {"files", {{"kernels", base + "_kernels.csv"}, {"directionality", base + "_directionality.csv"}}}};
  atomic_write(base + "_kernels.csv", kernels.str());
  atomic_write(base + "_directionality.csv", dir.str());
  atomic_write(base + "_summary.json", summary.dump(2) + "\n");
  out << "admissibility residual " << format_double(residual) << "\n";
  (void)err;
  return exit_ok;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream&) {
  if (o.L < 1) throw UsageError("--L must be >= 1");
  if (o.spin != 0 && std::abs(o.spin) >= o.L) throw UsageError("|spin| must be < L");
  const json rng = {{"rng", {{"algorithm", rng_algorithm}, {"seed", o.seed}}}};
  Container c;
  if (o.kind == "random") {
    c = sphere_container(sht_inverse(random_harmonics(o.L, o.spin, o.seed)), rng);
  } else {
    if (o.spin != 0) throw UsageError("only random signals may carry spin");
    RealSphereSignal f;
    if (o.kind == "edge") {
      f = edge_map(o.L, {std::sin(0.7) * std::cos(0.3), std::sin(0.7) * std::sin(0.3), std::cos(0.7)});
    } else if (o.kind == "noise") {
      f = noise_map(o.L, o.seed, 1.0);
    } else if (o.kind == "zero") {
      f = RealSphereSignal::zeros(o.L);
    } else if (o.kind == "constant") {
      f = RealSphereSignal::zeros(o.L);
      std::fill(f.values.begin(), f.values.end(), 1.0);
    } else {
      throw UsageError("unknown signal kind '" + o.kind + "'");
    }
    c = sphere_container(f, o.kind == "noise" ? rng : json::object());
  }
  write_container(o.out, c);
  out << "wrote " << o.out << "\n";
  return exit_ok;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  const AnySphere f = load_sphere_input(o, err);
  const auto [L, spin] = std::visit([](const auto& s) { return std::pair{s.L, s.spin}; }, f);
  Options po = o;
  po.spin = spin;
  if (o.spin != 0 && o.spin != spin) {
    throw FormatError("input has spin " + std::to_string(spin) + " but --spin " + std::to_string(o.spin) + " was given");
  }
  const TilingParams p = checked_params(L, po);
  const CurveletTransform tr(build_tiling(p), !o.fullres);
  AnyCoeffs c = std::visit(
      [&](const auto& s) -> AnyCoeffs {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, RealSphereSignal>) {
          return tr.analyze_real(s);
        } else {
          return tr.analyze(s);
        }
      },
      f);
  write_container(o.out, coeffs_container(c));
  out << "wrote " << o.out << "\n";
  return exit_ok;
}

int cmd_synthesize(const Options& o, std::ostream& out, std::ostream&) {
  AnyCoeffs c = coeffs_from_container(read_container(o.input));
  const TilingParams p = std::visit([](const auto& k) { return k.params; }, c);
  const bool multires = std::visit([](const auto& k) { return k.multires; }, c);
  const CurveletTransform tr(build_tiling(p), multires);
  AnySphere f = std::visit(
      [&](auto& k) -> AnySphere {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, RealCurveletCoeffs>) {
          return tr.synthesize_real(k);
        } else {
          return sht_inverse(tr.synthesize_harmonic(std::move(k)), tr.table());
        }
      },
      c);
  write_container(o.out, sphere_container(f));
  out << "wrote " << o.out << "\n";

  if (!o.reference.empty()) {
    const AnySphere ref = sphere_from_container(read_container(o.reference));
    auto harmonics = [&](const AnySphere& s) {
      return std::visit(
          [&](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, RealSphereSignal>) {
              return sht_forward(to_complex(v), tr.table());
            } else {
              return sht_forward(v, tr.table());
            }
          },
          s);
    };
    const auto a = harmonics(f);
    const auto b = harmonics(ref);
    if (a.L != b.L || a.spin != b.spin) throw FormatError("reference does not match the synthesised signal");
    double e = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
    out << "max harmonic error " << format_double(e) << "\n";
  }
  return exit_ok;
}

int cmd_roundtrip(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.repeats < 1) throw UsageError("--repeats must be >= 1");
  for (int L : o.Ls) checked_params(L, o);
  const auto rows = run_roundtrip(o.Ls, o.repeats, o.spin, o.lambda, o.jmin, o.seed);
  CsvWriter csv({"L", "spin", "lambda", "J0", "repeats", "max_error", "mean_error"});
  std::vector<double> x, y;
  for (const auto& r : rows) {
    csv.cell(r.L).cell(r.spin).cell(r.lambda).cell(r.J0).cell(r.repeats).cell(r.max_error).cell(r.mean_error);
    csv.end_row();
    if (r.max_error > 0.0) {
      x.push_back(r.L);
      y.push_back(r.max_error);
    }
  }
  emit(csv.str(), o.out, out);
  if (x.size() >= 2) err << "error slope " << format_double(loglog_slope(x, y)) << "\n";
  return exit_ok;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.repeats < 1) throw UsageError("--repeats must be >= 1");
  for (int L : o.Ls) checked_params(L, o);
  const auto rows = run_bench(o.Ls, o.repeats, o.spin, o.lambda, o.jmin, o.seed);
  CsvWriter csv({"L", "spin", "repeats", "median_seconds", "min_seconds", "max_seconds"});
  std::vector<double> x, y;
  for (const auto& r : rows) {
    csv.cell(r.L).cell(r.spin).cell(r.repeats).cell(r.median_seconds).cell(r.min_seconds).cell(r.max_seconds);
    csv.end_row();
    x.push_back(r.L);
    y.push_back(std::max(r.median_seconds, 1e-9));
  }
  emit(csv.str(), o.out, out);
  if (x.size() >= 2) err << "time slope " << format_double(loglog_slope(x, y)) << "\n";
  return exit_ok;
}

int cmd_sparsity(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.bins < 1) throw UsageError("--bins must be >= 1");
  HistogramReport report;
  const std::string bytes = read_file(o.input);
  if (bytes.rfind("SCRV1", 0) == 0 && container_content(decode_container(bytes)) == "curvelet") {
    const auto c = coeffs_from_container(decode_container(bytes));
    report = std::visit([&](const auto& k) { return sparsity_report(k, o.bins); }, c);
  } else {
    const AnySphere f = load_sphere_input(o, err);
    const auto [L, spin] = std::visit([](const auto& s) { return std::pair{s.L, s.spin}; }, f);
    Options po = o;
    po.spin = spin;
    const CurveletTransform tr(build_tiling(checked_params(L, po)));
    report = std::visit(
        [&](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, RealSphereSignal>) {
            return sparsity_report(tr.analyze_real(s), o.bins);
          } else {
            return sparsity_report(tr.analyze(s), o.bins);
          }
        },
        f);
  }
  for (const auto& w : report.warnings) err << "scurve: warning: " << w << "\n";
  if (report.empty()) err << "scurve: warning: all scales are zero; report is empty\n";

  CsvWriter csv({"scale", "bin", "bin_lo", "bin_hi", "probability"});
  json scales = json::array();
  for (const auto& s : report.scales) {
    for (int b = 0; b < static_cast<int>(s.probability.size()); ++b) {
      csv.cell(s.j).cell(b).cell(double(b) / report.bins).cell(double(b + 1) / report.bins).cell(s.probability[b]);
      csv.end_row();
    }
    json entry = {{"j", s.j}, {"count", s.count}, {"max_abs", s.max_abs}, {"probability", s.probability}};
    entry["gini"] = s.probability.empty() ? json(nullptr) : json(s.gini);
    scales.push_back(entry);
  }
  const json summary = {{"bins", report.bins}, {"scales", scales}, {"warnings", report.warnings}};
  if (o.out.empty()) {
    out << csv.str();
  } else {
    atomic_write(o.out + ".csv", csv.str());
    atomic_write(o.out + ".json", summary.dump(2) + "\n");
  }
  return exit_ok;
}

int cmd_parabolic(const Options& o, std::ostream& out, std::ostream&) {
  if (o.pmax < 1 || o.pmax > 8) throw UsageError("--pmax must lie in [1, 8]");
  CsvWriter csv({"p", "l", "s", "fwhm_theta", "fwhm_theta_spin0", "percent_error"});
  for (const auto& r : parabolic_table(o.pmax)) {
    csv.cell(r.p).cell(r.l).cell(r.s).cell(r.fwhm_theta).cell(r.fwhm_theta_spin0).cell(r.percent_error);
    csv.end_row();
  }
  emit(csv.str(), o.out, out);
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvelet transforms on the sphere", "scurve"};
  app.require_subcommand(1);
  Options o;

  auto tiling_flags = [&](CLI::App* sub) {
    sub->add_option("--spin", o.spin, "spin number");
    sub->add_option("--lambda", o.lambda, "dilation parameter (> 1)");
    sub->add_option("--jmin", o.jmin, "lowest curvelet scale J0");
    sub->add_option("--jmax", o.jmax, "highest curvelet scale (default: smallest covering L)");
  };

  auto* tiling = app.add_subcommand("tiling", "export the harmonic tiling");
  tiling->add_option("--L", o.L, "band-limit")->required();
  tiling_flags(tiling);
  tiling->add_option("--out", o.out, "output prefix")->required();

  auto* generate = app.add_subcommand("generate", "write a test signal container");
  generate->add_option("--kind", o.kind, "random, edge, noise, zero or constant");
  generate->add_option("--L", o.L, "band-limit")->required();
  generate->add_option("--spin", o.spin, "spin number (random only)");
  generate->add_option("--seed", o.seed, "random seed");
  generate->add_option("--out", o.out, "output container")->required();

  auto* analyze = app.add_subcommand("analyze", "curvelet analysis of a sphere container or PGM");
  analyze->add_option("input", o.input, "input file")->required();
  analyze->add_option("--L", o.L, "band-limit (PGM input)");
  tiling_flags(analyze);
  analyze->add_option("--clip", o.clip, "intensity ceiling for PGM input");
  analyze->add_flag("--rescale", o.rescale, "rescale PGM intensity to [0, 1]");
  analyze->add_flag("--fullres", o.fullres, "keep every scale at the full band-limit");
  analyze->add_option("--out", o.out, "output coefficient container")->required();

  auto* synthesize = app.add_subcommand("synthesize", "reconstruct a signal from coefficients");
  synthesize->add_option("input", o.input, "coefficient container")->required();
  synthesize->add_option("--out", o.out, "output sphere container")->required();
  synthesize->add_option("--reference", o.reference, "sphere container to compare against");

  auto* roundtrip = app.add_subcommand("roundtrip", "accuracy of analysis followed by synthesis");
  roundtrip->add_option("--L", o.Ls, "band-limits")->delimiter(',')->required();
  tiling_flags(roundtrip);
  roundtrip->add_option("--repeats", o.repeats, "signals per band-limit");
  roundtrip->add_option("--seed", o.seed, "random seed");
  roundtrip->add_option("--out", o.out, "output CSV (default stdout)");

  auto* bench = app.add_subcommand("bench", "round-trip wall time");
  bench->add_option("--L", o.Ls, "band-limits")->delimiter(',')->required();
  tiling_flags(bench);
  bench->add_option("--repeats", o.repeats, "timed runs per band-limit");
  bench->add_option("--seed", o.seed, "random seed");
  bench->add_option("--out", o.out, "output CSV (default stdout)");

  auto* sparsity = app.add_subcommand("sparsity", "coefficient magnitude histograms");
  sparsity->add_option("input", o.input, "sphere container, coefficient container or PGM")->required();
  sparsity->add_option("--L", o.L, "band-limit (PGM input)");
  tiling_flags(sparsity);
  sparsity->add_option("--bins", o.bins, "histogram bins");
  sparsity->add_option("--clip", o.clip, "intensity ceiling for PGM input");
  sparsity->add_flag("--rescale", o.rescale, "rescale PGM intensity to [0, 1]");
  sparsity->add_option("--out", o.out, "output prefix for .csv and .json (default CSV on stdout)");

  auto* parabolic = app.add_subcommand("parabolic", "parabolic scaling table");
  parabolic->add_option("--pmax", o.pmax, "largest p, l = 2^p");
  parabolic->add_option("--out", o.out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "scurve: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    check_threads_env();
    if (tiling->parsed()) return cmd_tiling(o, out, err);
    if (generate->parsed()) return cmd_generate(o, out, err);
    if (analyze->parsed()) return cmd_analyze(o, out, err);
    if (synthesize->parsed()) return cmd_synthesize(o, out, err);
    if (roundtrip->parsed()) return cmd_roundtrip(o, out, err);
    if (bench->parsed()) return cmd_bench(o, out, err);
    if (sparsity->parsed()) return cmd_sparsity(o, out, err);
    return cmd_parabolic(o, out, err);
  } catch (const UsageError& e) {
    err << "scurve: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "scurve: error: " << e.what() << "\n";
    return exit_data;
  }
}

}  // namespace scurve
