#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "scurve/container.hpp"
#include "scurve/image.hpp"
#include "scurve/reports.hpp"

using namespace scurve;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("scurve_io_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("container bytes survive decode and encode") {
  const CurveletTransform tr(build_tiling({16, 1, 2.0, 1}));
  const auto c = tr.analyze(sht_inverse(random_harmonics(16, 1, 4)));
  const std::string bytes = encode_container(coeffs_container(c));
  CHECK(bytes.compare(0, 5, "SCRV1") == 0);
  const Container back = decode_container(bytes);
  CHECK(encode_container(back) == bytes);

  const auto k = std::get<CurveletCoeffs>(coeffs_from_container(back));
  CHECK(k.params.J == c.params.J);
  CHECK(k.params.lambda == c.params.lambda);
  CHECK(k.frame == Frame::unrotated);
  REQUIRE(k.scales.size() == c.scales.size());
  for (std::size_t i = 0; i < k.scales.size(); ++i) {
    CHECK(k.scales[i].grid == c.scales[i].grid);
    CHECK(k.scales[i].values == c.scales[i].values);
  }
  CHECK(k.scaling.values == c.scaling.values);
}

TEST_CASE("container layout is little-endian with an aligned header") {
  auto f = RealSphereSignal::zeros(2);
  f.values[0] = 1.0;
  const std::string bytes = encode_container(sphere_container(f));
  std::uint64_t hlen = 0;
  for (int i = 7; i >= 0; --i) hlen = (hlen << 8) | static_cast<unsigned char>(bytes[8 + i]);
  CHECK(hlen % 8 == 0);
  CHECK(bytes.size() == 16 + hlen + 6 * 8);
  // 1.0 is 0x3ff0000000000000
  CHECK(static_cast<unsigned char>(bytes[16 + hlen + 7]) == 0x3f);
  CHECK(static_cast<unsigned char>(bytes[16 + hlen + 6]) == 0xf0);
  const auto header = nlohmann::json::parse(bytes.substr(16, hlen));
  CHECK(header["real"] == true);
  CHECK(header["sections"][0]["shape"] == nlohmann::json({2, 3}));
}

TEST_CASE("malformed containers are rejected") {
  const std::string good = encode_container(sphere_container(sht_inverse(random_harmonics(4, 0, 1))));
  CHECK_THROWS_AS(decode_container("SCRV2" + good.substr(5)), FormatError);
  CHECK_THROWS_AS(decode_container(good.substr(0, good.size() - 8)), FormatError);
  CHECK_THROWS_AS(decode_container(good + std::string(8, '\0')), FormatError);
  CHECK_THROWS_AS(decode_container(good.substr(0, 10)), FormatError);
  std::string bad_json = good;
  bad_json[16] = '[';
  CHECK_THROWS_AS(decode_container(bad_json), FormatError);

  // Header fields that disagree with the section shapes.
  Container c = decode_container(good);
  c.header["L"] = 5;
  CHECK_THROWS_AS(sphere_from_container(c), FormatError);
  c = decode_container(good);
  c.header["real"] = true;
  CHECK_THROWS_AS(sphere_from_container(c), FormatError);
  CHECK_THROWS_AS(coeffs_from_container(decode_container(good)), FormatError);
}

TEST_CASE("coefficient containers check their parameters") {
  const CurveletTransform tr(build_tiling({8, 0, 2.0, 0}));
  const auto c = tr.analyze_real(sht_inverse_real(oracle::random_real_harmonics(8, 2), tr.table()));
  Container k = coeffs_container(c);
  CHECK(std::holds_alternative<RealCurveletCoeffs>(coeffs_from_container(k)));
  Container bad = k;
  bad.header["lambda"] = 1.0;
  CHECK_THROWS_AS(coeffs_from_container(bad), FormatError);
  bad = k;
  bad.sections.pop_back();
  CHECK_THROWS_AS(coeffs_from_container(bad), FormatError);
  bad = k;
  bad.header["frame"] = "sideways";
  CHECK_THROWS_AS(coeffs_from_container(bad), FormatError);
}

TEST_CASE("atomic writes replace the target and leave no temporaries") {
  const fs::path dir = scratch_dir();
  const fs::path p = dir / "a.bin";
  atomic_write(p, "first");
  atomic_write(p, "second");
  CHECK(read_file(p) == "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(atomic_write(dir / "missing" / "x.bin", "x"), Error);
  fs::remove_all(dir);
}

TEST_CASE("PGM round trip at both sample depths") {
  for (int maxval : {255, 1000, 65535}) {
    GrayImage img;
    img.width = 5;
    img.height = 3;
    img.maxval = maxval;
    for (int i = 0; i < 15; ++i) img.pixels.push_back(static_cast<std::uint16_t>((i * 7919) % (maxval + 1)));
    const auto back = decode_pgm(encode_pgm(img));
    CHECK(back.width == 5);
    CHECK(back.height == 3);
    CHECK(back.maxval == maxval);
    CHECK(back.pixels == img.pixels);
  }
  CHECK(decode_pgm("P5\n# comment\n2 1\n255\n\x01\x02").pixels == std::vector<std::uint16_t>{1, 2});
  CHECK_THROWS_AS(decode_pgm("P2\n2 1\n255\n12"), FormatError);
  CHECK_THROWS_AS(decode_pgm("P5\n2 1\n70000\n"), FormatError);
  CHECK_THROWS_AS(decode_pgm("P5\n2 2\n255\n\x01"), FormatError);
  CHECK_THROWS_AS(decode_pgm(std::string("P5\n1 1\n100\n\xff", 13)), FormatError);
}

TEST_CASE("constant image carries only scaling content") {
  GrayImage img;
  img.width = 40;
  img.height = 20;
  img.maxval = 255;
  img.pixels.assign(800, 128);
  const auto f = sphere_from_image(img, 16);
  for (double v : f.values) CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
  const CurveletTransform tr(build_tiling({16, 0, 2.0, 0}));
  const auto c = tr.analyze_real(f);
  for (const auto& s : c.scales)
    for (double v : s.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("clip and rescale") {
  GrayImage img;
  img.width = 4;
  img.height = 2;
  img.maxval = 100;
  img.pixels = {0, 10, 50, 100, 100, 100, 20, 40};
  IngestOptions opt;
  opt.clip = 0.5;
  opt.rescale = true;
  const auto f = sphere_from_image(img, 8, opt);
  double lo = 1e9, hi = -1e9;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Band-limiting rings a little past the clipped range.
  CHECK(hi < 1.3);
  CHECK(lo > -0.3);
  opt.clip = -1.0;
  CHECK_THROWS_AS(sphere_from_image(img, 8, opt), std::invalid_argument);
}

TEST_CASE("bilinear sampling of a band-limited image") {
  // A smooth image is reproduced at the nodes up to interpolation error.
  GrayImage img;
  img.width = 512;
  img.height = 256;
  img.maxval = 65535;
  for (int y = 0; y < 256; ++y) {
    const double theta = (y + 0.5) * pi / 256;
    for (int x = 0; x < 512; ++x) img.pixels.push_back(static_cast<std::uint16_t>(std::lround(65535 * (0.5 + 0.5 * std::cos(theta)))));
  }
  const auto f = sphere_from_image(img, 8);
  const SphereGrid g = f.grid();
  for (int t = 0; t < g.n_theta(); ++t) CHECK(f.at(t, 3) == doctest::Approx(0.5 + 0.5 * std::cos(g.theta(t))).epsilon(1e-3));
}

TEST_CASE("random signals are reproducible and in range") {
  const auto a = random_harmonics(16, 2, 42);
  const auto b = random_harmonics(16, 2, 42);
  CHECK(a.values == b.values);
  CHECK(random_harmonics(16, 2, 43).values != a.values);
  for (int l = 0; l < 2; ++l)
    for (int m = -l; m <= l; ++m) CHECK(a(l, m) == cplx(0.0));
  for (cplx v : a.values) {
    CHECK(std::abs(v.real()) <= 1.0);
    CHECK(std::abs(v.imag()) <= 1.0);
  }
  SignalRng r(1);
  double mean = 0.0, var = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = r.normal();
    mean += x / 20000;
    var += x * x / 20000;
  }
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
  CHECK(derive_seed(1, 8, 0) != derive_seed(1, 8, 1));
  CHECK(derive_seed(1, 8, 0) != derive_seed(1, 16, 0));
}

TEST_CASE("gini and slope") {
  CHECK(gini({1, 1, 1, 1}) == doctest::Approx(0.0));
  CHECK(gini({0, 0, 0, 1}) == doctest::Approx(0.75));
  CHECK(gini({}) == 0.0);
  CHECK(gini({0, 0}) == 0.0);
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope({1, 2}, {0, 1}), std::invalid_argument);
}

TEST_CASE("histograms are normalised") {
  const CurveletTransform tr(build_tiling({32, 0, 2.0, 1}));
  const auto c = tr.analyze(sht_inverse(random_harmonics(32, 0, 8)));
  const auto r = sparsity_report(c, 64);
  CHECK(r.warnings.empty());
  REQUIRE(r.scales.size() == c.scales.size());
  for (const auto& s : r.scales) {
    REQUIRE(s.probability.size() == 64);
    const double total = std::accumulate(s.probability.begin(), s.probability.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-12);
    for (double p : s.probability) CHECK(p >= 0.0);
    CHECK(s.probability.back() > 0.0);  // the maximum lands in the last bin
    CHECK(s.gini > 0.0);
    CHECK(s.gini < 1.0);
  }
  const auto z = sparsity_report(tr.analyze(SphereSignal::zeros(32, 0)), 64);
  CHECK(z.empty());
  CHECK(z.warnings.size() == c.scales.size());
}

TEST_CASE("synthetic maps") {
  const auto edge = edge_map(32, {0.0, 0.0, 1.0});
  // Northern hemisphere indicator: mean 1/2.
  const auto h = sht_forward_real(edge, HalfPiTable(32));
  CHECK(h(0, 0).real() == doctest::Approx(0.5 * std::sqrt(4 * pi)).epsilon(1e-2));
  CHECK(h(1, 0).real() == doctest::Approx(std::sqrt(3 * pi) / 2).epsilon(1e-2));
  const double e = harmonic_energy(edge);
  const auto noise = noise_map(32, 5, e);
  CHECK(harmonic_energy(noise) == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("CSV quoting and number formatting") {
  CsvWriter w({"a", "b,c"});
  w.cell(std::string("x\"y")).cell(0.1).end_row();
  CHECK(w.str() == "a,\"b,c\"\r\n\"x\"\"y\",0.1\r\n");
  CHECK_THROWS_AS(w.end_row(), std::logic_error);
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}
