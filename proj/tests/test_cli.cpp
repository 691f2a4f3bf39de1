#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "scurve/cli.hpp"
#include "scurve/container.hpp"
#include "scurve/image.hpp"

using namespace scurve;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "scurve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("scurve_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == exit_usage);
  CHECK(run({"frobnicate"}).code == exit_usage);
  CHECK(run({"tiling", "--L", "16", "--lambda", "1", "--out", "/tmp/x"}).code == exit_usage);
  CHECK(run({"roundtrip", "--L", "4,8", "--repeats", "0"}).code == exit_usage);
  CHECK(run({"parabolic", "--pmax", "0"}).code == exit_usage);
  CHECK(run({"parabolic", "--pmax", "9"}).code == exit_usage);
  CHECK(run({"roundtrip", "--L", "four"}).code == exit_usage);
  CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("tiling export") {
  TempDir d;
  const auto r = run({"tiling", "--L", "256", "--lambda", "2", "--jmin", "2", "--out", d / "t"});
  REQUIRE(r.code == exit_ok);
  const auto summary = nlohmann::json::parse(read_file(d / "t_summary.json"));
  CHECK(summary["admissibility_residual"].get<double>() <= 1e-8);
  CHECK(summary["J0"] == 2);
  for (const auto& s : summary["scales"]) {
    const int j = s["j"];
    CHECK(s["support"][0] == (1 << (j - 1)));
    CHECK(s["support"][1] == (1 << (j + 1)));
    CHECK(s.contains("theta"));
  }
  const std::string kernels = read_file(d / "t_kernels.csv");
  CHECK(kernels.rfind("l,phi,kappa_2,", 0) == 0);
  CHECK(std::count(kernels.begin(), kernels.end(), '\n') == 257);
  CHECK(fs::exists(d / "t_directionality.csv"));
}

TEST_CASE("analyze then synthesize reproduces a container") {
  TempDir d;
  REQUIRE(run({"generate", "--L", "64", "--seed", "9", "--spin", "1", "--out", d / "f.scrv"}).code == exit_ok);
  REQUIRE(run({"analyze", d / "f.scrv", "--jmin", "2", "--out", d / "c.scrv"}).code == exit_ok);
  const auto r = run({"synthesize", d / "c.scrv", "--out", d / "g.scrv", "--reference", d / "f.scrv"});
  REQUIRE(r.code == exit_ok);
  const auto pos = r.out.find("max harmonic error ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 19)) <= 1e-10);
  const auto header = read_container(d / "f.scrv").header;
  CHECK(header["rng"]["algorithm"] == "mt19937_64/u53");
}

TEST_CASE("zero map and constant PGM") {
  TempDir d;
  REQUIRE(run({"generate", "--kind", "zero", "--L", "16", "--out", d / "z.scrv"}).code == exit_ok);
  REQUIRE(run({"analyze", d / "z.scrv", "--out", d / "zc.scrv"}).code == exit_ok);
  const auto c = coeffs_from_container(read_container(d / "zc.scrv"));
  for (const auto& s : std::get<RealCurveletCoeffs>(c).scales)
    for (double v : s.values) CHECK(v == 0.0);
  const auto sp = run({"sparsity", d / "z.scrv"});
  CHECK(sp.code == exit_ok);
  CHECK(sp.err.find("warning") != std::string::npos);
  CHECK(sp.out == "scale,bin,bin_lo,bin_hi,probability\r\n");

  GrayImage img;
  img.width = 64;
  img.height = 32;
  img.pixels.assign(64 * 32, 200);
  write_pgm(d / "flat.pgm", img);
  CHECK(run({"analyze", d / "flat.pgm", "--out", d / "x.scrv"}).code == exit_usage);
  REQUIRE(run({"analyze", d / "flat.pgm", "--L", "16", "--out", d / "pc.scrv"}).code == exit_ok);
  const auto pc = std::get<RealCurveletCoeffs>(coeffs_from_container(read_container(d / "pc.scrv")));
  for (const auto& s : pc.scales)
    for (double v : s.values) CHECK(std::abs(v) < 1e-12);
  double peak = 0.0;
  for (double v : pc.scaling.values) peak = std::max(peak, std::abs(v));
  CHECK(peak > 0.1);
}

TEST_CASE("data errors exit with 3") {
  TempDir d;
  CHECK(run({"analyze", d / "missing.scrv", "--out", d / "x"}).code == exit_data);
  atomic_write(d / "junk", "not a container");
  CHECK(run({"synthesize", d / "junk", "--out", d / "x"}).code == exit_data);
  REQUIRE(run({"generate", "--L", "8", "--out", d / "f.scrv"}).code == exit_ok);
  CHECK(run({"analyze", d / "f.scrv", "--L", "16", "--out", d / "x"}).code == exit_data);
  CHECK(run({"synthesize", d / "f.scrv", "--out", d / "x"}).code == exit_data);
  CHECK_FALSE(fs::exists(d / "x"));
}

TEST_CASE("tables are sorted and complete") {
  TempDir d;
  const auto r = run({"roundtrip", "--L", "16,4,8", "--repeats", "2", "--spin", "2", "--out", d / "rt.csv"});
  REQUIRE(r.code == exit_ok);
  const std::string rt = read_file(d / "rt.csv");
  CHECK(rt.find("\r\n4,2,") < rt.find("\r\n8,2,"));
  CHECK(rt.find("\r\n8,2,") < rt.find("\r\n16,2,"));
  CHECK(r.err.find("error slope") != std::string::npos);

  const auto b = run({"bench", "--L", "8,4", "--repeats", "3"});
  REQUIRE(b.code == exit_ok);
  CHECK(b.out.rfind("L,spin,repeats,median_seconds", 0) == 0);
  CHECK(b.out.find("\r\n4,0,3,") < b.out.find("\r\n8,0,3,"));

  const auto p = run({"parabolic", "--pmax", "2"});
  REQUIRE(p.code == exit_ok);
  // l = 2: s = 0..2, l = 4: s = 0..4, plus the header.
  CHECK(std::count(p.out.begin(), p.out.end(), '\n') == 1 + 3 + 5);
  CHECK(p.out.find("\r\n1,2,0,") != std::string::npos);
}

TEST_CASE("sparsity report files") {
  TempDir d;
  REQUIRE(run({"generate", "--kind", "edge", "--L", "32", "--out", d / "e.scrv"}).code == exit_ok);
  REQUIRE(run({"sparsity", d / "e.scrv", "--bins", "16", "--out", d / "s"}).code == exit_ok);
  const auto j = nlohmann::json::parse(read_file(d / "s.json"));
  CHECK(j["bins"] == 16);
  for (const auto& s : j["scales"]) {
    double total = 0.0;
    for (double p : s["probability"]) total += p;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  CHECK(run({"sparsity", d / "e.scrv", "--bins", "0"}).code == exit_usage);
}
