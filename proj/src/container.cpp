#include "scurve/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace scurve {

using nlohmann::json;

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_doubles(std::string& out, const std::vector<double>& v) {
  const std::size_t start = out.size();
  out.resize(start + v.size() * 8);
  char* dst = out.data() + start;
  if constexpr (std::endian::native == std::endian::little) {
    if (!v.empty()) std::memcpy(dst, v.data(), v.size() * 8);
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto bits = std::bit_cast<std::uint64_t>(v[i]);
      for (int b = 0; b < 8; ++b) dst[8 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
  }
}

std::vector<double> get_doubles(const unsigned char* p, std::size_t count) {
  std::vector<double> v(count);
  if constexpr (std::endian::native == std::endian::little) {
    if (count) std::memcpy(v.data(), p, count * 8);
  } else {
    for (std::size_t i = 0; i < count; ++i) v[i] = std::bit_cast<double>(get_u64(p + 8 * i));
  }
  return v;
}

template <class T>
T field(const json& h, const char* key) {
  if (!h.contains(key)) throw FormatError(std::string("container header lacks '") + key + "'");
  try {
    return h.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("container header field '") + key + "' has the wrong type");
  }
}

std::vector<double> pack(const std::vector<cplx, AlignedAllocator<cplx>>& v) {
  std::vector<double> out(2 * v.size());
  std::memcpy(out.data(), v.data(), out.size() * sizeof(double));
  return out;
}

std::vector<double> pack(const std::vector<double, AlignedAllocator<double>>& v) {
  return {v.begin(), v.end()};
}

void unpack(const std::vector<double>& d, std::vector<cplx, AlignedAllocator<cplx>>& v) {
  v.resize(d.size() / 2);
  std::memcpy(static_cast<void*>(v.data()), d.data(), d.size() * sizeof(double));
}

void unpack(const std::vector<double>& d, std::vector<double, AlignedAllocator<double>>& v) {
  v.assign(d.begin(), d.end());
}

Section sphere_section(std::string name, int L, bool complex) {
  Section s;
  s.name = std::move(name);
  s.kind = "sphere";
  s.shape = {static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(2 * L - 1)};
  s.complex = complex;
  return s;
}

Section so3_section(std::string name, const SO3Grid& g, bool complex) {
  Section s;
  s.name = std::move(name);
  s.kind = "so3";
  s.shape = {static_cast<std::uint64_t>(g.n_gamma()), static_cast<std::uint64_t>(g.n_beta()),
             static_cast<std::uint64_t>(g.n_alpha())};
  s.complex = complex;
  return s;
}

// Band-limit of a sphere section, checking shape [L, 2L-1].
int sphere_band_limit(const Section& s) {
  if (s.kind != "sphere" || s.shape.size() != 2 || s.shape[0] < 1 || s.shape[1] != 2 * s.shape[0] - 1) {
    throw FormatError("section '" + s.name + "' is not a sphere grid");
  }
  return static_cast<int>(s.shape[0]);
}

// Band-limit of a cubic so3 section, checking shape [2L-1, L, 2L-1].
int so3_band_limit(const Section& s) {
  if (s.kind != "so3" || s.shape.size() != 3 || s.shape[1] < 1 || s.shape[0] != 2 * s.shape[1] - 1 ||
      s.shape[2] != s.shape[0]) {
    throw FormatError("section '" + s.name + "' is not a cubic SO(3) grid");
  }
  return static_cast<int>(s.shape[1]);
}

void check_complex(const Section& s, bool real) {
  if (s.complex == real) throw FormatError("section '" + s.name + "' disagrees with the real flag");
}

}  // namespace

std::uint64_t Section::value_count() const {
  std::uint64_t n = complex ? 2 : 1;
  for (auto d : shape) n *= d;
  return n;
}

const Section& Container::section(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return s;
  throw FormatError("container has no section '" + name + "'");
}

std::string encode_container(const Container& c) {
  json h = c.header;
  h["format"] = "SCRV1";
  h["version"] = 1;
  json table = json::array();
  std::uint64_t offset = 0;
  for (const auto& s : c.sections) {
    if (s.data.size() != s.value_count()) {
      throw std::invalid_argument("section '" + s.name + "' holds " + std::to_string(s.data.size()) +
                                  " values, shape needs " + std::to_string(s.value_count()));
    }
    const std::uint64_t bytes = s.data.size() * 8;
    table.push_back({{"name", s.name}, {"kind", s.kind}, {"shape", s.shape}, {"complex", s.complex},
                     {"offset", offset}, {"bytes", bytes}});
    offset += bytes;
  }
  h["sections"] = table;
  std::string text = h.dump();
  text.resize((text.size() + 7) / 8 * 8, ' ');

  std::string out(container_magic, container_magic + 8);
  out.reserve(16 + text.size() + offset);
  put_u64(out, text.size());
  out += text;
  for (const auto& s : c.sections) put_doubles(out, s.data);
  return out;
}

Container decode_container(std::string_view bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), container_magic, 8) != 0) {
    throw FormatError("not an SCRV1 container");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t hlen = get_u64(p + 8);
  if (hlen % 8 != 0 || hlen > bytes.size() - 16) throw FormatError("container header length is invalid");

  json h;
  try {
    h = json::parse(bytes.substr(16, hlen));
  } catch (const json::exception& e) {
    throw FormatError(std::string("container header is not valid JSON: ") + e.what());
  }
  if (!h.is_object() || h.value("format", "") != "SCRV1") throw FormatError("container header is not SCRV1");
  if (!h.contains("sections") || !h["sections"].is_array()) throw FormatError("container lacks a section table");

  Container c;
  const std::uint64_t payload = bytes.size() - 16 - hlen;
  std::uint64_t expected = 0;
  for (const auto& e : h["sections"]) {
    Section s;
    s.name = field<std::string>(e, "name");
    s.kind = field<std::string>(e, "kind");
    s.shape = field<std::vector<std::uint64_t>>(e, "shape");
    s.complex = field<bool>(e, "complex");
    const auto offset = field<std::uint64_t>(e, "offset");
    const auto size = field<std::uint64_t>(e, "bytes");
    if (s.kind != "sphere" && s.kind != "so3") throw FormatError("unknown section kind '" + s.kind + "'");
    if (offset != expected || size != s.value_count() * 8 || offset + size > payload) {
      throw FormatError("section '" + s.name + "' does not match its declared shape or offset");
    }
    s.data = get_doubles(p + 16 + hlen + offset, s.value_count());
    expected += size;
    c.sections.push_back(std::move(s));
  }
  if (expected != payload) throw FormatError("container payload has trailing or missing bytes");
  h.erase("sections");
  h.erase("format");
  h.erase("version");
  c.header = std::move(h);
  return c;
}

void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_container(const std::filesystem::path& path, const Container& c) {
  atomic_write(path, encode_container(c));
}

Container read_container(const std::filesystem::path& path) { return decode_container(read_file(path)); }

std::string container_content(const Container& c) { return field<std::string>(c.header, "content"); }

Container sphere_container(const AnySphere& f, const json& extra) {
  Container c;
  c.header = extra.is_object() ? extra : json::object();
  std::visit(
      [&](const auto& s) {
        const bool real = std::is_same_v<std::decay_t<decltype(s)>, RealSphereSignal>;
        c.header["content"] = "sphere";
        c.header["L"] = s.L;
        c.header["spin"] = s.spin;
        c.header["lambda"] = nullptr;
        c.header["J0"] = nullptr;
        c.header["J"] = nullptr;
        c.header["frame"] = nullptr;
        c.header["multires"] = nullptr;
        c.header["real"] = real;
        auto sec = sphere_section("signal", s.L, !real);
        sec.data = pack(s.values);
        c.sections.push_back(std::move(sec));
      },
      f);
  return c;
}

AnySphere sphere_from_container(const Container& c) {
  if (container_content(c) != "sphere") throw FormatError("container does not hold a sphere signal");
  const int L = field<int>(c.header, "L");
  const int spin = field<int>(c.header, "spin");
  const bool real = field<bool>(c.header, "real");
  const auto& sec = c.section("signal");
  if (sphere_band_limit(sec) != L) throw FormatError("signal section does not match L");
  check_complex(sec, real);
  if (real) {
    if (spin != 0) throw FormatError("real signals must have spin 0");
    RealSphereSignal f;
    f.L = L;
    unpack(sec.data, f.values);
    return f;
  }
  SphereSignal f;
  f.L = L;
  f.spin = spin;
  unpack(sec.data, f.values);
  return f;
}

Container coeffs_container(const AnyCoeffs& any) {
  Container c;
  std::visit(
      [&](const auto& k) {
        const bool real = std::is_same_v<std::decay_t<decltype(k)>, RealCurveletCoeffs>;
        c.header = {{"content", "curvelet"}, {"L", k.params.L},        {"spin", k.params.spin},
                    {"lambda", k.params.lambda}, {"J0", k.params.J0},   {"J", k.params.J},
                    {"frame", to_string(k.frame)}, {"multires", k.multires}, {"real", real}};
        auto sec = sphere_section("scaling", k.scaling.L, !real);
        sec.data = pack(k.scaling.values);
        c.sections.push_back(std::move(sec));
        for (std::size_t i = 0; i < k.scales.size(); ++i) {
          auto s = so3_section("scale_" + std::to_string(k.params.J0 + static_cast<int>(i)), k.scales[i].grid, !real);
          s.data = pack(k.scales[i].values);
          c.sections.push_back(std::move(s));
        }
      },
      any);
  return c;
}

AnyCoeffs coeffs_from_container(const Container& c) {
  if (container_content(c) != "curvelet") throw FormatError("container does not hold curvelet coefficients");
  TilingParams p;
  p.L = field<int>(c.header, "L");
  p.spin = field<int>(c.header, "spin");
  p.lambda = field<double>(c.header, "lambda");
  p.J0 = field<int>(c.header, "J0");
  p.J = field<int>(c.header, "J");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("container parameters are invalid: ") + e.what());
  }
  if (p.J < p.J0) throw FormatError("container declares J < J0");
  const Frame frame = [&] {
    try {
      return frame_from_string(field<std::string>(c.header, "frame"));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }();
  const bool multires = field<bool>(c.header, "multires");
  const bool real = field<bool>(c.header, "real");
  if (real && p.spin != 0) throw FormatError("real coefficients must have spin 0");
  if (c.sections.size() != static_cast<std::size_t>(p.J - p.J0 + 2)) {
    throw FormatError("container holds " + std::to_string(c.sections.size()) + " sections, expected " +
                      std::to_string(p.J - p.J0 + 2));
  }

  auto fill = [&](auto& k) {
    k.params = p;
    k.frame = frame;
    k.multires = multires;
    const auto& sc = c.section("scaling");
    check_complex(sc, real);
    k.scaling.L = sphere_band_limit(sc);
    k.scaling.spin = 0;
    unpack(sc.data, k.scaling.values);
    k.scales.resize(p.J - p.J0 + 1);
    for (int j = p.J0; j <= p.J; ++j) {
      const auto& s = c.section("scale_" + std::to_string(j));
      check_complex(s, real);
      auto& dst = k.scales[j - p.J0];
      dst.grid = SO3Grid::cubic(so3_band_limit(s));
      unpack(s.data, dst.values);
    }
  };
  if (real) {
    RealCurveletCoeffs k;
    fill(k);
    return k;
  }
  CurveletCoeffs k;
  fill(k);
  return k;
}

}  // namespace scurve
