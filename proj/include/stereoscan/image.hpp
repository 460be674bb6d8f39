#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stereoscan::img {

class ImageError : public std::runtime_error {
 public:
  explicit ImageError(const std::string& what) : std::runtime_error(what) {}
};

// 8-bit RGBA raster, row-major.
struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 4 * width * height

  RgbaImage() = default;
  RgbaImage(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0,
            std::uint8_t a = 0);

  std::uint8_t* at(int x, int y) { return pixels.data() + 4 * (y * width + x); }
  const std::uint8_t* at(int x, int y) const { return pixels.data() + 4 * (y * width + x); }
  bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Decodes PNG/JPEG/BMP bytes to RGBA. Throws ImageError on failure
// (including GIF, which the backend cannot decode).
RgbaImage decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const RgbaImage& image);

// Source-over blend of src onto dst at integer offset.
void blend_pixel(std::uint8_t* dst, const std::uint8_t* src);

struct Hsv {
  double h = 0;  // degrees [0, 360)
  double s = 0;  // [0, 1]
  double v = 0;  // [0, 1]
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Intrinsic (width, height) from an SVG header: width/height attributes
// first, then the viewBox.
std::optional<std::pair<double, double>> svg_intrinsic_size(std::string_view svg_text);

// Gray placeholder used when a costume cannot be rasterized; carries the
// costume name so the image stays identifiable.
RgbaImage placeholder_image(int width, int height, const std::string& label);

// Fraction of pixels whose channels all lie within `tolerance` of the
// other image's. Images of different sizes have similarity 0.
double pixel_similarity(const RgbaImage& a, const RgbaImage& b, int tolerance = 16);

}  // namespace stereoscan::img
