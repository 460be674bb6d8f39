#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stereoscan/image.hpp"
#include "stereoscan/scratch_ir.hpp"

namespace stereoscan::render {

inline constexpr int kStageWidth = 480;
inline constexpr int kStageHeight = 360;

class RenderError : public std::runtime_error {
 public:
  enum class Kind { UnrasterizableCostume, Io };
  RenderError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Hook for SVG -> raster conversion; the core ships without one and falls
// back to labeled placeholders unless the options forbid it.
using SvgRasterizer =
    std::function<std::optional<img::RgbaImage>(const std::string& svg_text, int scale)>;

struct RenderOptions {
  SvgRasterizer svg_rasterizer;
  bool allow_placeholder = true;
};

// Costumes that were replaced by placeholders (reduced visual fidelity).
struct RenderNotes {
  std::vector<std::string> placeholder_costumes;  // "<target>/<costume>"
};

struct StageImage {
  img::RgbaImage image;  // always 480x360, fully opaque
};

// Costume raster at source resolution; placeholder or throw per options.
img::RgbaImage costume_image(const ir::Project& project, const ir::Target& target,
                             const ir::Costume& costume, const RenderOptions& options = {},
                             RenderNotes* notes = nullptr);

// The stage as it appears at program start: backdrop scaled to 480x360,
// visible sprites composited in ascending layer order, nearest-neighbor
// sampling throughout.
StageImage render_stage(const ir::Project& project, const RenderOptions& options = {},
                        RenderNotes* notes = nullptr);

// Current costume of every sprite written as "<sprite>__<costume>.png".
// Returns (sprite name, file path) pairs in sprite order.
std::vector<std::pair<std::string, std::string>> export_costumes(
    const ir::Project& project, const std::string& out_dir, const RenderOptions& options = {},
    RenderNotes* notes = nullptr);

}  // namespace stereoscan::render
