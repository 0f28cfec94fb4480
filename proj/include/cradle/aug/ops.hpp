#pragma once

#include <map>
#include <memory>
#include <vector>

#include "cradle/aug/marks.hpp"
#include "cradle/core/image.hpp"

namespace cradle::aug {

// All operations here are pure: same inputs, bit-identical outputs.

struct GridResult {
  Image image;
  std::map<int, Rect> cells;  // id (1-based, row-major) -> cell rect
};

/// Grid lines plus a per-cell coordinate label; `cells` partitions the frame.
GridResult draw_grid(const Image& frame, const GridSpec& spec);

inline constexpr int kDefaultBandWidth = 16;

/// Pure blue band on the left edge, pure yellow on the right.
Image draw_side_bands(const Image& frame, int band_width = kDefaultBandWidth);

/// Magenta cursor glyph with its hotspot at `pos`; clipped at frame edges.
Image draw_pointer(const Image& frame, Point pos);

struct Proposal {
  Rect rect;
  double score = 1.0;
};

/// Region-proposal source. Real deployments plug a segmentation model in
/// here; tests use the deterministic color-component segmenter below.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::vector<Proposal> propose(const Image& frame) = 0;
};

/// Connected components over color-quantized pixels (step 32 per channel,
/// 8-connectivity). Components touching the frame border are treated as
/// background. Score is the component's bounding-box fill ratio.
class ColorComponentSegmenter : public Segmenter {
 public:
  explicit ColorComponentSegmenter(int quant_step = 32, long long min_area = 1)
      : quant_step_(quant_step), min_area_(min_area) {}
  std::vector<Proposal> propose(const Image& frame) override;

 private:
  int quant_step_;
  long long min_area_;
};

/// Proposals -> deduplicated (IoU > 0.9), sorted top-to-bottom then
/// left-to-right, ids assigned 1..n.
MarkSet segment_to_marks(const Image& frame, Segmenter& segmenter);

enum class MarkStyle { standard, uniform };

/// standard: per-id multicolor borders, id label just outside the top-left
/// corner, output padded so no label pixel lands outside the raster.
/// uniform: single-color borders, black-on-white id label inside the box.
Image render_marks(const Image& frame, const MarkSet& marks, MarkStyle style);

/// Removes marks whose pixels match `watermark` above its threshold;
/// remaining ids are re-densified from 1.
MarkSet filter_watermarks(const MarkSet& marks, const Image& frame,
                          const Template& watermark);

/// Normalized cross-correlation sweep with non-max suppression.
std::vector<Detection> match_templates(const Image& frame,
                                       const std::vector<Template>& templates);

/// NCC of `tmpl` anchored at (x, y) in `frame`; in [-1, 1].
double ncc_at(const Image& frame, const Image& tmpl, int x, int y);

/// Loads every `<name>.png` in a directory as a template named `<name>`,
/// sorted by name.
std::vector<Template> load_templates(const std::string& dir,
                                     double match_threshold = 0.9);

Point centroid(const Rect& rect);

}  // namespace cradle::aug
