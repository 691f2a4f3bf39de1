#include "scurve/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "scurve/container.hpp"

namespace scurve {

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_space_and_comments() {
    while (pos < s.size()) {
      if (s[pos] == '#') {
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(s[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) {
      throw FormatError("PGM header is malformed");
    }
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos++] - '0');
      if (v > 1'000'000'000L) throw FormatError("PGM header value out of range");
    }
    return v;
  }
};

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw FormatError("not a binary PGM (P5) file");
  Cursor c{bytes, 2};
  GrayImage img;
  const long w = c.number();
  const long h = c.number();
  const long maxval = c.number();
  if (w < 1 || h < 1) throw FormatError("PGM has empty dimensions");
  if (maxval < 1 || maxval > 65535) throw FormatError("PGM maxval must lie in [1, 65535]");
  if (c.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[c.pos]))) {
    throw FormatError("PGM header is malformed");
  }
  ++c.pos;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.maxval = static_cast<int>(maxval);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::size_t depth = maxval < 256 ? 1 : 2;
  if (bytes.size() - c.pos < n * depth) throw FormatError("PGM raster is truncated");
  img.pixels.resize(n);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + c.pos);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = depth == 1 ? p[i] : (unsigned(p[2 * i]) << 8) | p[2 * i + 1];
    if (v > static_cast<unsigned>(maxval)) throw FormatError("PGM sample exceeds maxval");
    img.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return img;
}

std::string encode_pgm(const GrayImage& img) {
  if (img.maxval < 1 || img.maxval > 65535) throw std::invalid_argument("PGM maxval must lie in [1, 65535]");
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height) {
    throw std::invalid_argument("pixel count does not match dimensions");
  }
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                    std::to_string(img.maxval) + "\n";
  for (auto v : img.pixels) {
    if (img.maxval < 256) {
      out.push_back(static_cast<char>(v));
    } else {
      out.push_back(static_cast<char>(v >> 8));
      out.push_back(static_cast<char>(v & 0xff));
    }
  }
  return out;
}

GrayImage read_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

void write_pgm(const std::filesystem::path& path, const GrayImage& img) { atomic_write(path, encode_pgm(img)); }

RealSphereSignal sphere_from_image(const GrayImage& img, int L, const IngestOptions& opt) {
  if (L < 1) throw std::invalid_argument("band-limit must be positive");
  std::vector<double> v(img.pixels.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = double(img.pixels[i]) / img.maxval;
  if (opt.clip) {
    if (!(*opt.clip > 0.0)) throw std::invalid_argument("clip level must be positive");
    for (auto& x : v) x = std::min(x, *opt.clip);
  }
  if (opt.rescale) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double a = *lo, span = *hi - *lo;
    for (auto& x : v) x = span > 0.0 ? (x - a) / span : 0.0;
  }

  auto f = RealSphereSignal::zeros(L);
  const SphereGrid g = f.grid();
  const int W = img.width, H = img.height;
  auto px = [&](int x, int y) { return v[static_cast<std::size_t>(y) * W + x]; };
  for (int t = 0; t < g.n_theta(); ++t) {
    const double fy = std::clamp(g.theta(t) / pi * H - 0.5, 0.0, H - 1.0);
    const int y0 = std::min(static_cast<int>(fy), H - 1);
    const int y1 = std::min(y0 + 1, H - 1);
    const double wy = fy - y0;
    for (int p = 0; p < g.n_phi(); ++p) {
      double fx = g.phi(p) / two_pi * W - 0.5;
      fx -= W * std::floor(fx / W);
      const int x0 = std::min(static_cast<int>(fx), W - 1);
      const int x1 = (x0 + 1) % W;
      const double wx = fx - x0;
      f.at(t, p) = (1 - wy) * ((1 - wx) * px(x0, y0) + wx * px(x1, y0)) +
                   wy * ((1 - wx) * px(x0, y1) + wx * px(x1, y1));
    }
  }
  const HalfPiTable table(L);
  return sht_inverse_real(sht_forward_real(f, table), table);
}

GrayImage image_from_sphere(const RealSphereSignal& f, int width, double lo, double hi, int maxval) {
  if (width < 2 || !(hi > lo)) throw std::invalid_argument("bad image rendering parameters");
  GrayImage img;
  img.width = width;
  img.height = width / 2;
  img.maxval = maxval;
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  const SphereGrid g = f.grid();
  for (int y = 0; y < img.height; ++y) {
    const double theta = (y + 0.5) * pi / img.height;
    const int t = std::clamp(static_cast<int>(std::lround(theta * (2.0 * f.L - 1.0) / pi / 2.0 - 0.5)), 0, f.L - 1);
    for (int x = 0; x < img.width; ++x) {
      const double phi = (x + 0.5) * two_pi / img.width;
      const int p = static_cast<int>(std::lround(phi / two_pi * g.n_phi())) % g.n_phi();
      const double u = std::clamp((f.at(t, p) - lo) / (hi - lo), 0.0, 1.0);
      img.pixels[static_cast<std::size_t>(y) * img.width + x] = static_cast<std::uint16_t>(std::lround(u * maxval));
    }
  }
  return img;
}

}  // namespace scurve
