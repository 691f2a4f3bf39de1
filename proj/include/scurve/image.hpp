#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scurve/sphere.hpp"

namespace scurve {

// Grayscale raster, row-major from the top row.
struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;
};

// Binary PGM (P5), 8-bit or 16-bit big-endian samples, maxval <= 65535.
GrayImage decode_pgm(const std::string& bytes);
std::string encode_pgm(const GrayImage& img);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

struct IngestOptions {
  std::optional<double> clip;  // intensity ceiling, in units of maxval = 1
  bool rescale = false;        // map [min, max] onto [0, 1] after clipping
};

// Treats the image as equirectangular (rows: theta from 0 to pi, columns:
// phi from 0 to 2pi, pixel centres at half-integers), samples it bilinearly
// at the nodes of band-limit L and band-limits the result by a forward and
// inverse transform.
RealSphereSignal sphere_from_image(const GrayImage& img, int L, const IngestOptions& opt = {});

// Quantises a real signal onto a width x (width/2) equirectangular image
// with nearest-node lookup; values are mapped linearly from [lo, hi].
GrayImage image_from_sphere(const RealSphereSignal& f, int width, double lo, double hi, int maxval = 65535);

}  // namespace scurve
