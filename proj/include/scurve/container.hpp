#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "scurve/curvelet.hpp"
#include "scurve/sphere.hpp"

namespace scurve {

// SCRV1 layout:
//   bytes 0..7    "SCRV1\0\0\0"
//   bytes 8..15   header length h (uint64, little-endian, multiple of 8)
//   bytes 16..    JSON header, space-padded to h bytes
//   then          payload of little-endian float64, complex interleaved (re, im)
// Section offsets in the header are byte offsets from the start of the payload.
inline constexpr char container_magic[8] = {'S', 'C', 'R', 'V', '1', 0, 0, 0};

struct Section {
  std::string name;
  std::string kind;                  // "sphere" or "so3"
  std::vector<std::uint64_t> shape;  // sphere: theta, phi; so3: gamma, beta, alpha
  bool complex = true;
  std::vector<double> data;          // interleaved when complex

  std::uint64_t value_count() const;
};

struct Container {
  nlohmann::json header;  // everything except the section table
  std::vector<Section> sections;

  const Section& section(const std::string& name) const;
};

// Serialises to bytes; the section table is rebuilt from `sections`.
std::string encode_container(const Container& c);
// Throws FormatError on anything inconsistent.
Container decode_container(std::string_view bytes);

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

// Writes to a temporary file next to `path` and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

using AnySphere = std::variant<SphereSignal, RealSphereSignal>;
using AnyCoeffs = std::variant<CurveletCoeffs, RealCurveletCoeffs>;

// `extra` is merged into the header (e.g. an rng record).
Container sphere_container(const AnySphere& f, const nlohmann::json& extra = {});
AnySphere sphere_from_container(const Container& c);

Container coeffs_container(const AnyCoeffs& c);
AnyCoeffs coeffs_from_container(const Container& c);

// Content tag of a decoded container: "sphere" or "curvelet".
std::string container_content(const Container& c);

}  // namespace scurve
