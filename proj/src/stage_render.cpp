#include "stereoscan/stage_render.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "stereoscan/util.hpp"

namespace stereoscan::render {

RenderError::RenderError(Kind kind, const std::string& detail)
    : std::runtime_error((kind == Kind::UnrasterizableCostume ? "UnrasterizableCostume: "
                                                              : "IoError: ") +
                         detail),
      kind_(kind) {}

namespace {

img::RgbaImage make_placeholder(const ir::Target& target, const ir::Costume& costume,
                                std::optional<std::pair<double, double>> size,
                                const RenderOptions& options, RenderNotes* notes) {
  if (!options.allow_placeholder)
    throw RenderError(RenderError::Kind::UnrasterizableCostume, costume.asset_id);
  if (notes != nullptr)
    notes->placeholder_costumes.push_back(target.name + "/" + costume.name);
  int w = 64, h = 64;
  if (size) {
    w = static_cast<int>(std::lround(size->first));
    h = static_cast<int>(std::lround(size->second));
  } else if (costume.rotation_center_x > 0 && costume.rotation_center_y > 0) {
    w = static_cast<int>(std::lround(costume.rotation_center_x * 2));
    h = static_cast<int>(std::lround(costume.rotation_center_y * 2));
  }
  return img::placeholder_image(w, h, costume.name);
}

// Nearest-neighbor scale to an exact size.
img::RgbaImage scale_to(const img::RgbaImage& src, int w, int h) {
  img::RgbaImage out(w, h);
  for (int y = 0; y < h; ++y) {
    int sy = std::min(static_cast<int>((y + 0.5) * src.height / h), src.height - 1);
    for (int x = 0; x < w; ++x) {
      int sx = std::min(static_cast<int>((x + 0.5) * src.width / w), src.width - 1);
      std::copy_n(src.at(sx, sy), 4, out.at(x, y));
    }
  }
  return out;
}

struct SpriteTransform {
  double anchor_x, anchor_y;   // stage pixel of the rotation center
  double center_x, center_y;   // costume pixel anchored there
  double scale;                // costume px -> stage px
  double cos_r = 1, sin_r = 0; // clockwise rotation in screen coords
  bool flip_x = false;

  // Forward: costume -> stage.
  void forward(double cx, double cy, double* sx, double* sy) const {
    double dx = (cx - center_x) * (flip_x ? -1.0 : 1.0) * scale;
    double dy = (cy - center_y) * scale;
    *sx = anchor_x + dx * cos_r - dy * sin_r;
    *sy = anchor_y + dx * sin_r + dy * cos_r;
  }

  // Inverse: stage -> costume.
  void inverse(double sx, double sy, double* cx, double* cy) const {
    double vx = sx - anchor_x;
    double vy = sy - anchor_y;
    double dx = (vx * cos_r + vy * sin_r) / scale;
    double dy = (-vx * sin_r + vy * cos_r) / scale;
    if (flip_x) dx = -dx;
    *cx = dx + center_x;
    *cy = dy + center_y;
  }
};

void composite_sprite(img::RgbaImage& stage, const ir::Target& sprite,
                      const ir::Costume& costume, const img::RgbaImage& raster) {
  SpriteTransform t;
  t.anchor_x = kStageWidth / 2.0 + sprite.x;
  t.anchor_y = kStageHeight / 2.0 - sprite.y;
  double r = std::max(1, costume.bitmap_resolution);
  t.center_x = costume.rotation_center_x;
  t.center_y = costume.rotation_center_y;
  t.scale = sprite.size / 100.0 / r;
  if (t.scale <= 0) return;

  if (sprite.rotation_style == ir::RotationStyle::AllAround && sprite.direction != 90.0) {
    double theta = (sprite.direction - 90.0) * std::numbers::pi / 180.0;
    t.cos_r = std::cos(theta);
    t.sin_r = std::sin(theta);
    // Snap quarter-turn rotations so boundary pixels stay exact.
    auto snap = [](double v) {
      for (double target : {-1.0, 0.0, 1.0})
        if (std::abs(v - target) < 1e-12) return target;
      return v;
    };
    t.cos_r = snap(t.cos_r);
    t.sin_r = snap(t.sin_r);
  } else if (sprite.rotation_style == ir::RotationStyle::LeftRight && sprite.direction < 0) {
    t.flip_x = true;
  }

  double min_x = kStageWidth, min_y = kStageHeight, max_x = 0, max_y = 0;
  const double corners[4][2] = {{0, 0},
                                {static_cast<double>(raster.width), 0},
                                {0, static_cast<double>(raster.height)},
                                {static_cast<double>(raster.width),
                                 static_cast<double>(raster.height)}};
  for (const auto& corner : corners) {
    double sx, sy;
    t.forward(corner[0], corner[1], &sx, &sy);
    min_x = std::min(min_x, sx);
    min_y = std::min(min_y, sy);
    max_x = std::max(max_x, sx);
    max_y = std::max(max_y, sy);
  }
  int x0 = std::max(0, static_cast<int>(std::floor(min_x)));
  int y0 = std::max(0, static_cast<int>(std::floor(min_y)));
  int x1 = std::min(kStageWidth, static_cast<int>(std::ceil(max_x)) + 1);
  int y1 = std::min(kStageHeight, static_cast<int>(std::ceil(max_y)) + 1);

  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      double cx, cy;
      t.inverse(x + 0.5, y + 0.5, &cx, &cy);
      int px = static_cast<int>(std::floor(cx));
      int py = static_cast<int>(std::floor(cy));
      if (!raster.contains(px, py)) continue;
      img::blend_pixel(stage.at(x, y), raster.at(px, py));
    }
  }
}

}  // namespace

img::RgbaImage costume_image(const ir::Project& project, const ir::Target& target,
                             const ir::Costume& costume, const RenderOptions& options,
                             RenderNotes* notes) {
  ir::AssetBytes asset = ir::asset_bytes(project, costume);
  if (costume.format == ir::CostumeFormat::Svg) {
    std::string svg(asset.bytes.begin(), asset.bytes.end());
    if (options.svg_rasterizer) {
      if (auto raster = options.svg_rasterizer(svg, 1)) return *raster;
    }
    return make_placeholder(target, costume, img::svg_intrinsic_size(svg), options, notes);
  }
  try {
    return img::decode_image(asset.bytes);
  } catch (const img::ImageError&) {
    return make_placeholder(target, costume, std::nullopt, options, notes);
  }
}

StageImage render_stage(const ir::Project& project, const RenderOptions& options,
                        RenderNotes* notes) {
  StageImage stage;
  stage.image = img::RgbaImage(kStageWidth, kStageHeight, 255, 255, 255, 255);

  if (project.stage.current_costume < project.stage.costumes.size()) {
    const ir::Costume& backdrop = project.stage.costumes[project.stage.current_costume];
    img::RgbaImage raster = costume_image(project, project.stage, backdrop, options, notes);
    if (raster.width > 0 && raster.height > 0) {
      img::RgbaImage scaled = scale_to(raster, kStageWidth, kStageHeight);
      for (int y = 0; y < kStageHeight; ++y)
        for (int x = 0; x < kStageWidth; ++x)
          img::blend_pixel(stage.image.at(x, y), scaled.at(x, y));
    }
  }
  // Backdrop compositing leaves the stage fully opaque.
  for (std::size_t i = 3; i < stage.image.pixels.size(); i += 4) stage.image.pixels[i] = 255;

  std::vector<const ir::Target*> sprites;
  for (const ir::Target& sprite : project.sprites)
    if (sprite.visible) sprites.push_back(&sprite);
  std::stable_sort(sprites.begin(), sprites.end(),
                   [](const ir::Target* a, const ir::Target* b) {
                     return a->layer_order < b->layer_order;
                   });

  for (const ir::Target* sprite : sprites) {
    if (sprite->current_costume >= sprite->costumes.size()) continue;
    const ir::Costume& costume = sprite->costumes[sprite->current_costume];
    img::RgbaImage raster = costume_image(project, *sprite, costume, options, notes);
    composite_sprite(stage.image, *sprite, costume, raster);
  }
  return stage;
}

std::vector<std::pair<std::string, std::string>> export_costumes(
    const ir::Project& project, const std::string& out_dir, const RenderOptions& options,
    RenderNotes* notes) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw RenderError(RenderError::Kind::Io, out_dir + ": " + ec.message());

  std::vector<std::pair<std::string, std::string>> written;
  for (const ir::Target& sprite : project.sprites) {
    if (sprite.current_costume >= sprite.costumes.size()) continue;
    const ir::Costume& costume = sprite.costumes[sprite.current_costume];
    img::RgbaImage raster = costume_image(project, sprite, costume, options, notes);
    std::string filename = util::sanitize_filename(sprite.name) + "__" +
                           util::sanitize_filename(costume.name) + ".png";
    std::filesystem::path path = std::filesystem::path(out_dir) / filename;
    std::vector<std::uint8_t> png = img::encode_png(raster);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RenderError(RenderError::Kind::Io, path.string());
    out.write(reinterpret_cast<const char*>(png.data()),
              static_cast<std::streamsize>(png.size()));
    written.emplace_back(sprite.name, path.string());
  }
  return written;
}

}  // namespace stereoscan::render
