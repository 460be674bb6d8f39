#include "stereoscan/image.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <regex>

namespace stereoscan::img {

RgbaImage::RgbaImage(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b,
                     std::uint8_t a)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 4) {
  for (std::size_t i = 0; i < pixels.size(); i += 4) {
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
    pixels[i + 3] = a;
  }
}

RgbaImage decode_image(std::span<const std::uint8_t> bytes) {
  cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
              const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  if (decoded.empty()) throw ImageError("image decode failed");
  if (decoded.depth() == CV_16U) {
    cv::Mat scaled;
    decoded.convertTo(scaled, CV_8U, 1.0 / 257.0);
    decoded = scaled;
  } else if (decoded.depth() != CV_8U) {
    throw ImageError("unsupported image bit depth");
  }

  cv::Mat rgba;
  switch (decoded.channels()) {
    case 1: cv::cvtColor(decoded, rgba, cv::COLOR_GRAY2RGBA); break;
    case 3: cv::cvtColor(decoded, rgba, cv::COLOR_BGR2RGBA); break;
    case 4: cv::cvtColor(decoded, rgba, cv::COLOR_BGRA2RGBA); break;
    default: throw ImageError("unsupported channel count");
  }

  RgbaImage image;
  image.width = rgba.cols;
  image.height = rgba.rows;
  image.pixels.resize(static_cast<std::size_t>(rgba.cols) * rgba.rows * 4);
  if (rgba.isContinuous()) {
    std::copy(rgba.data, rgba.data + image.pixels.size(), image.pixels.begin());
  } else {
    for (int y = 0; y < rgba.rows; ++y)
      std::copy_n(rgba.ptr<std::uint8_t>(y), static_cast<std::size_t>(rgba.cols) * 4,
                  image.pixels.begin() + static_cast<std::size_t>(y) * rgba.cols * 4);
  }
  return image;
}

std::vector<std::uint8_t> encode_png(const RgbaImage& image) {
  cv::Mat rgba(image.height, image.width, CV_8UC4,
               const_cast<std::uint8_t*>(image.pixels.data()));
  cv::Mat bgra;
  cv::cvtColor(rgba, bgra, cv::COLOR_RGBA2BGRA);
  std::vector<std::uint8_t> out;
  std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 6};
  if (!cv::imencode(".png", bgra, out, params)) throw ImageError("png encode failed");
  return out;
}

void blend_pixel(std::uint8_t* dst, const std::uint8_t* src) {
  unsigned sa = src[3];
  if (sa == 255) {
    dst[0] = src[0];
    dst[1] = src[1];
    dst[2] = src[2];
    dst[3] = 255;
    return;
  }
  if (sa == 0) return;
  unsigned da = dst[3];
  unsigned out_a = sa + da * (255 - sa) / 255;
  for (int c = 0; c < 3; ++c) {
    unsigned s = src[c];
    unsigned d = dst[c];
    unsigned num = s * sa * 255 + d * da * (255 - sa);
    dst[c] = out_a == 0 ? 0 : static_cast<std::uint8_t>(num / (out_a * 255));
  }
  dst[3] = static_cast<std::uint8_t>(out_a);
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  double mx = std::max({r, g, b});
  double mn = std::min({r, g, b});
  double delta = mx - mn;
  Hsv hsv;
  hsv.v = mx;
  hsv.s = mx == 0 ? 0 : delta / mx;
  if (delta == 0) {
    hsv.h = 0;
  } else if (mx == r) {
    hsv.h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (mx == g) {
    hsv.h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    hsv.h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (hsv.h < 0) hsv.h += 360.0;
  return hsv;
}

std::optional<std::pair<double, double>> svg_intrinsic_size(std::string_view svg_text) {
  std::string head(svg_text.substr(0, std::min<std::size_t>(svg_text.size(), 4096)));
  std::size_t tag = head.find("<svg");
  if (tag == std::string::npos) return std::nullopt;
  std::size_t tag_end = head.find('>', tag);
  std::string attrs = head.substr(tag, tag_end == std::string::npos ? std::string::npos
                                                                     : tag_end - tag);

  auto attr_number = [&](const char* name) -> std::optional<double> {
    std::regex re(std::string(name) + R"(\s*=\s*["']\s*([0-9]*\.?[0-9]+))");
    std::smatch m;
    if (std::regex_search(attrs, m, re)) return std::atof(m[1].str().c_str());
    return std::nullopt;
  };

  auto w = attr_number("width");
  auto h = attr_number("height");
  if (w && h && *w > 0 && *h > 0) return std::make_pair(*w, *h);

  std::regex viewbox(R"(viewBox\s*=\s*["']\s*[0-9.eE+-]+[ ,]+[0-9.eE+-]+[ ,]+([0-9.eE+-]+)[ ,]+([0-9.eE+-]+))");
  std::smatch m;
  if (std::regex_search(attrs, m, viewbox)) {
    double vw = std::atof(m[1].str().c_str());
    double vh = std::atof(m[2].str().c_str());
    if (vw > 0 && vh > 0) return std::make_pair(vw, vh);
  }
  return std::nullopt;
}

RgbaImage placeholder_image(int width, int height, const std::string& label) {
  width = std::clamp(width, 8, 1024);
  height = std::clamp(height, 8, 1024);
  RgbaImage image(width, height, 0xb0, 0xb0, 0xb0, 0xff);
  for (int x = 0; x < width; ++x) {
    for (int y : {0, height - 1}) {
      auto* px = image.at(x, y);
      px[0] = px[1] = px[2] = 0x40;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x : {0, width - 1}) {
      auto* px = image.at(x, y);
      px[0] = px[1] = px[2] = 0x40;
    }
  }
  if (!label.empty() && width >= 40 && height >= 16) {
    cv::Mat rgba(image.height, image.width, CV_8UC4, image.pixels.data());
    cv::putText(rgba, label, cv::Point(4, height / 2), cv::FONT_HERSHEY_PLAIN, 0.8,
                cv::Scalar(0x20, 0x20, 0x20, 0xff), 1, cv::LINE_8);
  }
  return image;
}

double pixel_similarity(const RgbaImage& a, const RgbaImage& b, int tolerance) {
  if (a.width != b.width || a.height != b.height || a.width == 0 || a.height == 0) return 0;
  std::size_t matching = 0;
  std::size_t total = static_cast<std::size_t>(a.width) * a.height;
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint8_t* pa = a.pixels.data() + i * 4;
    const std::uint8_t* pb = b.pixels.data() + i * 4;
    bool close = true;
    for (int c = 0; c < 4 && close; ++c)
      close = std::abs(static_cast<int>(pa[c]) - static_cast<int>(pb[c])) <= tolerance;
    if (close) ++matching;
  }
  return static_cast<double>(matching) / static_cast<double>(total);
}

}  // namespace stereoscan::img
